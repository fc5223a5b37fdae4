from itertools import permutations

import pytest

from cases import D1, D2, D3, D4, D5, FIXTURES, GRAPHICAL, fam, s
from nestohedron.building import from_lists
from nestohedron.errors import ConvexityViolation, NotAdjacent, WrongDimension
from nestohedron.fan import QuotientLattice
from nestohedron.nested import dual_graph, enumerate_complex
from nestohedron.polytope import (
    SupportFunction,
    check_convexity,
    convexity_gap,
    convexity_gap_closed_form,
    custom_support_criterion,
    dependence,
    f_n,
    geometric_edges,
    realize,
    simplified_gap,
    two_faces,
    verify_normal_fan,
    vertex,
    vertices,
)


class TestRealize:
    def test_d2(self):
        p = realize(D2)
        assert p.equalities == (s(1, 3), s(2, 4))
        assert dict(p.inequalities) == {s(1): 1, s(2): 1, s(3): 1, s(4): 1}

    def test_d3(self):
        p = realize(D3)
        assert p.equalities == (s(1, 2, 3),)
        assert dict(p.inequalities) == {s(1): 3, s(2): 3, s(3): 3, s(1, 2): 4}

    def test_components_have_no_inequality(self):
        for b in FIXTURES.values():
            p = realize(b)
            assert not set(b.components) & {i for i, _ in p.inequalities}
            assert all(SupportFunction(b)(c) == 0 for c in b.components)


class TestVertices:
    def test_d2_square(self):
        assert vertex(realize(D2), fam([1], [2])) == (1, 1, -1, -1)
        pts = set(vertices(realize(D2)).values())
        assert pts == {(1, 1, -1, -1), (1, -1, -1, 1), (-1, 1, 1, -1), (-1, -1, 1, 1)}

    def test_d3_trapezoid(self):
        pts = set(vertices(realize(D3)).values())
        assert pts == {(3, 1, -4), (1, 3, -4), (-6, 3, 3), (3, -6, 3)}

    def test_d5_hexagon(self):
        pts = set(vertices(realize(D5)).values())
        assert pts == set(permutations((3, 1, -4)))

    def test_integral(self):
        for b in GRAPHICAL.values():
            for x in vertices(realize(b)).values():
                assert all(isinstance(v, int) for v in x)


class TestDependence:
    def test_d4_with_component_union(self):
        dep = dependence(D4, fam([1], [1, 2]), fam([1], [3]))
        assert dep.terms() == {s(1, 2): 1, s(3): 1, s(1, 2, 3): -1}

    def test_d4_with_intersection(self):
        dep = dependence(D4, fam([2], [1, 2]), fam([2], [2, 3]))
        assert dep.terms() == {s(1, 2): 1, s(2, 3): 1, s(2): -1, s(1, 2, 3): -1}

    def test_d2(self):
        dep = dependence(D2, fam([1], [2]), fam([2], [3]))
        assert dep.terms() == {s(1): 1, s(3): 1, s(1, 3): -1}
        assert QuotientLattice(D2).combine({s(1): 1, s(3): 1}) == (0, 0)

    def test_d3_relations(self):
        ql = QuotientLattice(D3)
        assert ql.combine({s(1): 1, s(2): 1, s(1, 2): -1}) == (0, 0)
        assert ql.combine({s(1, 2): 1, s(3): 1}) == (0, 0)

    def test_not_adjacent(self):
        with pytest.raises(NotAdjacent):
            dependence(D4, fam([1], [1, 2]), fam([3], [2, 3]))


class TestConvexity:
    def test_d3_disjoint_swap(self):
        assert check_convexity(D3, fam([1], [1, 2]), fam([2], [1, 2])) == 2

    def test_d4_overlapping_swap(self):
        assert check_convexity(D4, fam([2], [1, 2]), fam([2], [2, 3])) == 5

    def test_split_of_n(self):
        for n in range(2, 9):
            for a in range(1, n):
                assert f_n(n, a) + f_n(n, n - a) - f_n(n, n) > 0

    def test_d1_margin(self):
        margins = {check_convexity(D1, a, c) for a, c in
                   [(fam([1], [2]), fam([2], [3])), (fam([1], [3]), fam([2], [3]))]}
        assert margins == {9}

    def test_bad_support_rejected(self):
        with pytest.raises(ConvexityViolation):
            check_convexity(D3, fam([1], [1, 2]), fam([2], [1, 2]),
                            SupportFunction(D3, {s(1): 1, s(2): 1, s(3): 1, s(1, 2): 5}))

    def test_custom_criterion(self):
        assert custom_support_criterion(D3, lambda i: SupportFunction(D3)(i))
        assert not custom_support_criterion(D3, lambda i: 0)


class TestNormalFan:
    @pytest.mark.parametrize("name", ["D1", "D2", "D3", "D4", "D5"])
    def test_fixtures(self, name):
        b = FIXTURES[name]
        rep = verify_normal_fan(b)
        assert rep.vertices == len(enumerate_complex(b).maximal_faces)
        assert rep.edges == rep.vertices

    def test_graphical(self):
        for b in GRAPHICAL.values():
            rep = verify_normal_fan(b)
            assert rep.min_margin is None or rep.min_margin > 0

    def test_edges_match_dual_graph(self):
        b = GRAPHICAL["K4"]
        pts = vertices(realize(b))
        assert geometric_edges(realize(b), pts) == dual_graph(b).edge_set()


class TestTwoFaces:
    def test_d1_triangle(self):
        assert two_faces(D1) == {3: 1}

    def test_path4(self):
        assert two_faces(GRAPHICAL["path4"]) == {4: 3, 5: 6}

    def test_k3(self):
        assert two_faces(GRAPHICAL["K3"]) == {6: 1}

    def test_rank_one(self):
        with pytest.raises(WrongDimension):
            two_faces(from_lists([[0], [1], [0, 1]], 2))


class TestFIdentities:
    def test_f_n_at_n(self):
        assert all(f_n(n, n) == 0 for n in range(1, 13))

    def test_gap_closed_form(self):
        for n in range(2, 13):
            for a in range(1, n):
                for b in range(1, n - a + 1):
                    assert convexity_gap(n, a, b) == convexity_gap_closed_form(a, b)

    def test_simplified_strict(self):
        for r in range(1, 13):
            for p1 in range(1, r):
                for p2 in range(1, r):
                    assert simplified_gap(r, p1, p2) > 0
