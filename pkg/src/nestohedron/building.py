"""Building sets: validation, restriction, contraction, products, graphical buildings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import bitsets
from .bitsets import MAX_GROUND, canonical, compress, expand, full, members
from .errors import (
    EmptyGround,
    EmptyRestriction,
    EmptySetMember,
    InvalidInput,
    MissingSingleton,
    NotAMember,
    OutOfGround,
    UnionNotClosed,
)


@dataclass(frozen=True)
class BuildingSet:
    """A validated building on the ground set ``{0, ..., n-1}``.

    Construct through :func:`validate_building` (or the operations in this
    module); the constructor itself trusts its arguments.  ``origin`` records,
    for buildings produced by restriction or contraction, which element of
    the parent ground set each local index stands for.
    """

    n: int
    sets: tuple[int, ...]
    origin: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.sets))
        covered = 0
        comps = []
        for s in reversed(self.sets):
            if not s & covered:
                comps.append(s)
                covered |= s
        object.__setattr__(self, "components", tuple(sorted(comps, key=bitsets.key)))
        object.__setattr__(self, "_memo", {})

    def __contains__(self, subset: int) -> bool:
        return subset in self._members

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @property
    def ground(self) -> int:
        return full(self.n)

    @property
    def rank(self) -> int:
        return self.n - len(self.components)

    @property
    def vertices(self) -> tuple[int, ...]:
        """The non-maximal members, i.e. the vertices of the nested complex."""
        v = self._memo.get("vertices")
        if v is None:
            comps = set(self.components)
            v = tuple(s for s in self.sets if s not in comps)
            self._memo["vertices"] = v
        return v

    def is_component(self, subset: int) -> bool:
        return subset in self.components

    def component_of(self, subset: int) -> int:
        for c in self.components:
            if c & subset:
                return c
        raise ValueError(f"{bitsets.label(subset)} meets no component")

    def components_within(self, subset: int) -> tuple[int, ...]:
        """Maximal members contained in ``subset`` (the components of the restriction)."""
        memo = self._memo.setdefault("within", {})
        out = memo.get(subset)
        if out is None:
            covered = 0
            comps = []
            for s in reversed(self.sets):
                if not s & ~subset and not s & covered:
                    comps.append(s)
                    covered |= s
            out = tuple(sorted(comps, key=bitsets.key))
            memo[subset] = out
        return out

    def labels(self, one_based: bool = True) -> list[str]:
        return [bitsets.label(s, one_based) for s in self.sets]


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidInput("a graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            a, b = e
            if a == b:
                raise InvalidInput(f"loop at vertex {a + 1}")
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise OutOfGround(f"edge {(a + 1, b + 1)} leaves the vertex set")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> list[int]:
        adj = [0] * self.vertex_count
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj


def close_under_unions(sets: Iterable[int]) -> set[int]:
    """Smallest superfamily closed under unions of intersecting members."""
    family = set(sets)
    frontier = list(family)
    while frontier:
        new = []
        for a in frontier:
            for b in list(family):
                if a & b:
                    u = a | b
                    if u not in family:
                        family.add(u)
                        new.append(u)
        frontier = new
    return family


def validate_building(sets: Iterable[int], n: int) -> BuildingSet:
    if not 1 <= n <= MAX_GROUND:
        raise InvalidInput(f"ground set size must be between 1 and {MAX_GROUND}, got {n}")
    family = set()
    ground = full(n)
    for s in sets:
        if s == 0:
            raise EmptySetMember()
        if s & ~ground:
            raise OutOfGround(f"{bitsets.label(s)} is not a subset of the ground set")
        family.add(s)
    for i in range(n):
        if 1 << i not in family:
            raise MissingSingleton(i)
    ordered = canonical(family)
    for a_pos, a in enumerate(ordered):
        for b in ordered[a_pos + 1:]:
            if a & b and (a | b) not in family:
                raise UnionNotClosed(a, b)
    return BuildingSet(n, ordered)


def _trusted(sets: Iterable[int], n: int, origin=None) -> BuildingSet:
    return BuildingSet(n, canonical(sets), origin)


def from_lists(sets: Iterable[Iterable[int]], n: int) -> BuildingSet:
    return validate_building([bitsets.from_members(s) for s in sets], n)


def singletons(n: int) -> BuildingSet:
    return _trusted((1 << i for i in range(n)), n)


def graphical_from_graph(g: Graph) -> BuildingSet:
    """All vertex sets inducing connected subgraphs, grown one neighbour at a time."""
    adj = g.adjacency()
    seen = set()
    stack = [1 << v for v in range(g.vertex_count)]
    seen.update(stack)
    while stack:
        s = stack.pop()
        nbrs = 0
        for v in members(s):
            nbrs |= adj[v]
        nbrs &= ~s
        for v in members(nbrs):
            t = s | 1 << v
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return _trusted(seen, g.vertex_count)


def underlying_graph(b: BuildingSet) -> Graph:
    edges = frozenset(tuple(members(s)) for s in b.sets if s.bit_count() == 2)
    return Graph(b.n, edges)


def is_graphical(b: BuildingSet) -> tuple[bool, Graph]:
    g = underlying_graph(b)
    return graphical_from_graph(g).sets == b.sets, g


def restriction(b: BuildingSet, c: int) -> BuildingSet:
    if c == 0:
        raise EmptyRestriction("cannot restrict to the empty set")
    if c & ~b.ground:
        raise OutOfGround(f"{bitsets.label(c)} is not a subset of the ground set")
    index_map = tuple(members(c))
    sets = (compress(s, index_map) for s in b.sets if not s & ~c)
    return _trusted(sets, len(index_map), index_map)


def contraction(b: BuildingSet, c: int, strict: bool = False) -> BuildingSet:
    if c == 0:
        raise EmptyRestriction("cannot contract the empty set")
    if c & ~b.ground:
        raise OutOfGround(f"{bitsets.label(c)} is not a subset of the ground set")
    rest = b.ground & ~c
    if rest == 0:
        raise EmptyGround("contracting the whole ground set leaves nothing")
    if strict and c not in b:
        raise NotAMember(f"{bitsets.label(c)} is not in the building")
    index_map = tuple(members(rest))
    out = set()
    for s in b.sets:
        if not s & c:
            out.add(s)
        elif not c & ~s and s != c:
            out.add(s & ~c)
    return _trusted((compress(s, index_map) for s in out), len(index_map), index_map)


def product(bs: Sequence[BuildingSet]) -> BuildingSet:
    if not bs:
        raise InvalidInput("product needs at least one factor")
    offset = 0
    sets = []
    for b in bs:
        sets.extend(s << offset for s in b.sets)
        offset += b.n
    return _trusted(sets, offset)


def embed(b: BuildingSet, n: int) -> list[int]:
    """Members of a restriction/contraction, written in the parent's indices."""
    if b.origin is None:
        raise ValueError("building carries no index map")
    return [expand(s, b.origin) for s in b.sets]


def restriction_contraction(b: BuildingSet, c: int) -> BuildingSet:
    """``B|_C x C\\B`` on the original ground set, without re-indexing."""
    sets = embed(restriction(b, c), b.n) + embed(contraction(b, c), b.n)
    return _trusted(sets, b.n)


def decompose(b: BuildingSet) -> list[BuildingSet]:
    return [restriction(b, c) for c in b.components]


def relabel(b: BuildingSet, perm: Sequence[int]) -> BuildingSet:
    """Apply the element permutation ``i -> perm[i]``."""
    return _trusted((expand(s, perm) for s in b.sets), b.n)
