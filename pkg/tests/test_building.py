from itertools import combinations

import pytest

from cases import D1, D2, D3, D4, D5, building, complete_graph, path_graph, s
from nestohedron.bitsets import full
from nestohedron.building import (
    Graph,
    contraction,
    decompose,
    from_lists,
    graphical_from_graph,
    is_graphical,
    product,
    restriction,
    singletons,
    validate_building,
)
from nestohedron.errors import (
    EmptyGround,
    EmptyRestriction,
    EmptySetMember,
    InvalidInput,
    MissingSingleton,
    NotAMember,
    UnionNotClosed,
)


def labelled(b):
    """Members as sorted tuples of 1-based labels."""
    return sorted(tuple(i + 1 for i in range(b.n) if m >> i & 1) for m in b.sets)


class TestValidate:
    def test_all_subsets_of_three(self):
        b = validate_building(range(1, 8), 3)
        assert b.components == (full(3),)
        assert b.rank == 2

    def test_two_singletons(self):
        b = from_lists([[0], [1]], 2)
        assert b.rank == 0
        assert b.components == (s(1), s(2))

    def test_union_not_closed(self):
        with pytest.raises(UnionNotClosed) as err:
            building(3, (1, 2), (2, 3))
        assert {err.value.first, err.value.second} == {s(1, 2), s(2, 3)}

    def test_missing_singleton(self):
        with pytest.raises(MissingSingleton) as err:
            from_lists([[0], [1]], 3)
        assert err.value.element == 2

    def test_empty_member(self):
        with pytest.raises(EmptySetMember):
            validate_building([0, 1], 1)

    def test_canonical_order_and_dedup(self):
        b = validate_building([7, 1, 2, 4, 3, 3, 1], 3)
        assert b.sets == (1, 2, 4, 3, 7)

    def test_errors_are_value_errors(self):
        assert issubclass(MissingSingleton, InvalidInput)
        assert issubclass(InvalidInput, ValueError)


class TestGraphical:
    def test_path_is_d4(self):
        assert graphical_from_graph(path_graph(3)) == D4

    def test_two_edges_is_d2(self):
        assert graphical_from_graph(Graph.from_edges(4, [(0, 2), (1, 3)])) == D2

    def test_edgeless(self):
        b = graphical_from_graph(Graph.from_edges(3, []))
        assert b == singletons(3)
        assert b.rank == 0

    def test_complete_graph_is_everything(self):
        assert graphical_from_graph(complete_graph(3)) == D5

    def test_is_graphical_examples(self):
        ok, g = is_graphical(D2)
        assert ok and g.sorted_edges() == [(0, 2), (1, 3)]
        ok, g = is_graphical(D3)
        assert not ok and g.sorted_edges() == [(0, 1)]
        ok, g = is_graphical(D1)
        assert not ok and g.sorted_edges() == []

    def test_graph_rejects_loops_and_bad_endpoints(self):
        with pytest.raises(InvalidInput):
            Graph.from_edges(3, [(1, 1)])
        with pytest.raises(InvalidInput):
            Graph.from_edges(3, [(0, 3)])

    def test_edges_normalized(self):
        assert Graph.from_edges(3, [(2, 0)]).sorted_edges() == [(0, 2)]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_round_trip_exhaustive(self, n):
        pairs = list(combinations(range(n), 2))
        for bits in range(1 << len(pairs)):
            g = Graph.from_edges(n, [p for k, p in enumerate(pairs) if bits >> k & 1])
            ok, back = is_graphical(graphical_from_graph(g))
            assert ok and back == g


class TestRestrictionContraction:
    def test_restriction_d4(self):
        r = restriction(D4, s(1, 2))
        assert labelled(r) == [(1,), (1, 2), (2,)]
        assert r.origin == (0, 1)

    def test_restriction_d5(self):
        r = restriction(D5, s(1, 3))
        assert labelled(r) == [(1,), (1, 2), (2,)]
        assert r.origin == (0, 2)

    def test_restriction_to_ground(self):
        for b in (D1, D2, D3, D4, D5):
            assert restriction(b, b.ground) == b

    def test_restriction_empty(self):
        with pytest.raises(EmptyRestriction):
            restriction(D4, 0)

    def test_contraction_d4(self):
        c = contraction(D4, s(2))
        assert c.origin == (0, 2)
        assert labelled(c) == [(1,), (1, 2), (2,)]

    def test_contraction_d2(self):
        c = contraction(D2, s(1))
        assert c.origin == (1, 2, 3)
        # local 1,2,3 stand for 2,3,4; {2,4} survives, {3} comes from {1,3}
        assert labelled(c) == [(1,), (1, 3), (2,), (3,)]

    def test_contraction_trivial(self):
        c = contraction(singletons(2), s(1))
        assert labelled(c) == [(1,)]
        assert c.origin == (1,)

    def test_contraction_whole_ground(self):
        with pytest.raises(EmptyGround):
            contraction(D4, D4.ground)

    def test_contraction_strict(self):
        with pytest.raises(NotAMember):
            contraction(D2, s(1, 2), strict=True)
        # without the flag the formula still applies
        assert contraction(D2, s(1, 2)).n == 2


class TestProduct:
    def test_d1_squared(self):
        p = product([D1, D1])
        # rank adds up over factors: 2 + 2
        assert p.n == 6 and p.rank == 4
        assert p.components == (s(1, 2, 3), s(4, 5, 6))

    def test_single_factor(self):
        assert product([D4]) == D4

    def test_rank_zero_factors(self):
        assert product([singletons(2), singletons(1)]).rank == 0

    def test_decompose(self):
        p = product([D4, D1, singletons(1)])
        assert decompose(p) == [singletons(1), D4, D1]
        assert product([D4, D1, singletons(1)]) == p
