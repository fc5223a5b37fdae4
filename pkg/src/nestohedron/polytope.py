"""The nested polytope: explicit H-description, exact vertices, normal-fan checks."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from . import bitsets
from .bitsets import members
from .building import BuildingSet, is_graphical
from .errors import (
    ConvexityViolation,
    NormalFanMismatch,
    NotAdjacent,
    NotMaximal,
    WrongDimension,
)
from .fan import QuotientLattice
from .linalg import rank, solve
from .nested import (
    DualGraph,
    NestedComplex,
    NestedSet,
    dual_graph,
    enumerate_complex,
    exchange_record,
    geodesic_loops,
)

Point = tuple[Fraction, ...]


def f_n(n: int, m: int) -> int:
    """``m (2^(n-1) - 2^(m-1))``, the support value of an ``m``-set inside an ``n``-set."""
    return m * (2 ** (n - 1) - 2 ** (m - 1))


class SupportFunction:
    """Right-hand sides of the facet inequalities.

    ``values`` maps every member of the building to ``f_n(|C|, |I|)`` with
    ``C`` the component containing ``I``; components get 0.
    """

    def __init__(self, b: BuildingSet, values: dict[int, int] | None = None):
        self.building = b
        if values is None:
            values = {s: f_n(b.component_of(s).bit_count(), s.bit_count()) for s in b.sets}
        self.values = values

    def __call__(self, subset: int) -> int:
        if self.building.is_component(subset):
            return 0
        return self.values[subset]


@dataclass(frozen=True)
class Polytope:
    building: BuildingSet
    equalities: tuple[int, ...]  # one component mask per row: sum over C of x_i = 0
    inequalities: tuple[tuple[int, int], ...]  # (I, rhs): sum over I of x_i <= rhs

    @property
    def n(self) -> int:
        return self.building.n

    def rhs(self, subset: int) -> int:
        return dict(self.inequalities)[subset]


def realize(b: BuildingSet, support: SupportFunction | None = None) -> Polytope:
    support = support or SupportFunction(b)
    return Polytope(
        b,
        tuple(b.components),
        tuple((s, support(s)) for s in b.vertices),
    )


def _row(mask: int, n: int) -> list[int]:
    return [mask >> i & 1 for i in range(n)]


def pairing(subset: int, point: Sequence) -> Fraction | int:
    return sum(point[i] for i in members(subset))


def vertex(p: Polytope, n: NestedSet) -> Point:
    """Solve the equalities together with the inequalities of ``n`` made tight."""
    b = p.building
    if len(n) != b.rank:
        raise NotMaximal(f"a maximal nested set has {b.rank} members, got {len(n)}")
    rhs_of = dict(p.inequalities)
    rows = [_row(c, b.n) for c in p.equalities] + [_row(s, b.n) for s in n]
    rhs = [0] * len(p.equalities) + [rhs_of[s] for s in n]
    x = tuple(v.numerator if v.denominator == 1 else v for v in solve(rows, rhs))
    tight = set(n)
    for s, bound in p.inequalities:
        val = pairing(s, x)
        if (s in tight and val != bound) or (s not in tight and val >= bound):
            raise NormalFanMismatch(
                f"vertex of {bitsets.family_label(n)} violates {bitsets.label(s)}",
                witness=(n, s),
            )
    return x


def vertices(p: Polytope, cx: NestedComplex | None = None) -> dict[NestedSet, Point]:
    cx = cx or enumerate_complex(p.building)
    return {n: vertex(p, n) for n in cx.maximal_faces}


@dataclass(frozen=True)
class Dependence:
    positive: tuple[int, ...]  # I1, I2 and the padding sets
    negative: tuple[int, ...]  # intersection components and the union target

    def terms(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for s in self.positive:
            out[s] += 1
        for s in self.negative:
            out[s] -= 1
        return dict(out)


def dependence(b: BuildingSet, n1: NestedSet, n2: NestedSet) -> Dependence:
    """The linear relation among the rays of two adjacent maximal cones.

    ``e(I1) + e(I2) - sum e(J) + sum e(padding) - e(union) = 0`` in the
    lattice, with ``J`` running over the components of ``I1 & I2``.
    """
    if len(set(n1) ^ set(n2)) != 2 or len(n1) != len(n2):
        raise NotAdjacent("maximal nested sets must differ in exactly one member")
    rec = exchange_record(b, tuple(n1), tuple(n2))
    dep = Dependence(
        (rec.i1, rec.i2) + rec.padding,
        tuple(rec.intersection_components) + (rec.union_target,),
    )
    ql = QuotientLattice(b)
    if any(ql.combine(dep.terms())):
        raise ConvexityViolation("dependence does not vanish in the lattice", witness=(n1, n2))
    return dep


def check_convexity(
    b: BuildingSet, n1: NestedSet, n2: NestedSet, support: SupportFunction | None = None
) -> int:
    support = support or SupportFunction(b)
    dep = dependence(b, n1, n2)
    margin = sum(support(s) for s in dep.positive) - sum(support(s) for s in dep.negative)
    if margin <= 0:
        raise ConvexityViolation(f"convexity margin {margin} is not positive", witness=(n1, n2))
    return margin


def geometric_edges(p: Polytope, points: dict[NestedSet, Point]) -> set[frozenset]:
    """Edges of the polytope read off the tight sets of its vertices.

    Two vertices span an edge when the inequalities tight at both, with the
    equalities, cut out a line, and no third vertex lies on that line.
    """
    n = p.n
    rank_target = n - 1
    eq_rows = [_row(c, n) for c in p.equalities]
    tight = {}
    for key_, x in points.items():
        tight[key_] = frozenset(s for s, bound in p.inequalities if pairing(s, x) == bound)
    by_pair_face: dict[frozenset, list] = defaultdict(list)
    for key_, t in tight.items():
        for sub in combinations(sorted(t, key=bitsets.key), max(len(t) - 1, 0)):
            by_pair_face[frozenset(sub)].append(key_)
    # with equal tight-set sizes, the owners of a face are all vertices on it
    uniform = len({len(t) for t in tight.values()}) <= 1
    edges = set()
    for face, owners in by_pair_face.items():
        if len(owners) != 2 and uniform:
            continue
        rows = eq_rows + [_row(s, n) for s in face]
        if rank(rows) != rank_target:
            continue
        on_line = owners if uniform else [k for k, t in tight.items() if face <= t]
        if len(on_line) == 2:
            edges.add(frozenset(on_line))
    return edges


@dataclass
class NormalFanReport:
    vertices: int = 0
    edges: int = 0
    min_margin: int | None = None
    margins: Counter | None = None

    def as_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": self.edges,
            "min_margin": self.min_margin,
        }


def verify_normal_fan(
    b: BuildingSet,
    cx: NestedComplex | None = None,
    dg: DualGraph | None = None,
    support: SupportFunction | None = None,
) -> NormalFanReport:
    """Check that the nested fan is the normal fan of the realized polytope.

    Every vertex is tight exactly on its nested set, every dual-graph edge
    has a positive convexity margin, and the polytope's own edge graph is
    the dual graph.
    """
    support = support or SupportFunction(b)
    cx = cx or enumerate_complex(b)
    dg = dg or dual_graph(b, cx)
    p = realize(b, support)
    points = vertices(p, cx)
    report = NormalFanReport(vertices=len(points), margins=Counter())
    for n, x in points.items():
        for c in p.equalities:
            if pairing(c, x) != 0:
                raise NormalFanMismatch("vertex leaves the equality subspace", witness=n)
        for s, bound in p.inequalities:
            val = pairing(s, x)
            if (val == bound) != (s in n) or val > bound:
                raise NormalFanMismatch(
                    f"ray {bitsets.label(s)} is tight off its cone", witness=(n, s)
                )
    for a, c, _ in dg.edges:
        m = check_convexity(b, dg.nodes[a], dg.nodes[c], support)
        report.margins[m] += 1
        report.min_margin = m if report.min_margin is None else min(report.min_margin, m)
    geo = geometric_edges(p, points)
    if geo != dg.edge_set():
        diff = geo ^ dg.edge_set()
        raise NormalFanMismatch("polytope edges differ from the dual graph", witness=diff)
    report.edges = len(geo)
    if len(set(points.values())) != len(points):
        raise NormalFanMismatch("two maximal cones share a vertex")
    return report


def two_faces(b: BuildingSet, dg: DualGraph | None = None) -> Counter:
    """Multiset of 2-face sizes, via geodesic loops."""
    if b.rank < 2:
        raise WrongDimension("2-faces need rank at least 2")
    sizes = Counter(geodesic_loops(b, dg).values())
    allowed = {4, 5, 6} if is_graphical(b)[0] else {3, 4, 5, 6}
    if not set(sizes) <= allowed:
        raise NormalFanMismatch(f"2-face sizes {sorted(sizes)} outside {sorted(allowed)}")
    return sizes


def dual_coordinates(ql: QuotientLattice, x: Point) -> tuple[Fraction, ...]:
    """A point of the polytope paired against the basis rays of the lattice."""
    return tuple(x[i] for i in ql.kept)


def convexity_gap(n: int, a: int, b: int) -> int:
    return f_n(n, a) + f_n(n, b) - f_n(n, a + b)


def convexity_gap_closed_form(a: int, b: int) -> int:
    return a * (2 ** (a + b - 1) - 2 ** (a - 1)) + b * (2 ** (a + b - 1) - 2 ** (b - 1))


def simplified_gap(r: int, p1: int, p2: int) -> int:
    return r * 2 ** (r - 1) - p1 * 2 ** (p1 - 1) - p2 * 2 ** (p2 - 1)


def custom_support_criterion(
    b: BuildingSet, value: Callable[[int], int], dg: DualGraph | None = None
) -> bool:
    """Does an arbitrary function on the rays satisfy the convexity criterion?"""
    dg = dg or dual_graph(b)
    support = SupportFunction(b, {s: value(s) for s in b.sets})
    try:
        for a, c, _ in dg.edges:
            check_convexity(b, dg.nodes[a], dg.nodes[c], support)
    except ConvexityViolation:
        return False
    return True
