"""Nested sets and the nested complex of a building."""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from . import bitsets
from .bitsets import canonical, family_key
from .building import BuildingSet, is_graphical, restriction_contraction
from .errors import (
    ComplexViolation,
    NotAVertex,
    NotLinkable,
    TooLarge,
    WrongDimension,
)

MAX_ENUM_GROUND = 16
DEFAULT_MAX_FACES = 10**6

NestedSet = tuple  # tuple of subset masks in canonical order


def nested_set(family: Iterable[int]) -> NestedSet:
    return canonical(family)


def _check_vertices(b: BuildingSet, family: Iterable[int]) -> None:
    for s in family:
        if s not in b or b.is_component(s):
            raise NotAVertex(s)


def pairwise_compatible(b: BuildingSet, i: int, j: int) -> bool:
    _check_vertices(b, (i, j))
    return _compatible(b, i, j)


def _compatible(b: BuildingSet, i: int, j: int) -> bool:
    return not i & ~j or not j & ~i or (i | j) not in b


def is_nested(b: BuildingSet, family: Iterable[int]) -> bool:
    """Nestedness test.

    Intersecting members must be comparable (otherwise their union is in
    the building); after that pre-pass only families of pairwise disjoint
    members can still have their union in the building.
    """
    fam = canonical(family)
    _check_vertices(b, fam)
    for a, c in combinations(fam, 2):
        if a & c and a & ~c and c & ~a:
            return False
    unions: set[int] = set()
    for x in fam:
        for u in unions:
            if not u & x and (u | x) in b:
                return False
        unions |= {u | x for u in unions if not u & x}
        unions.add(x)
    return True


@dataclass(frozen=True)
class NestedComplex:
    building: BuildingSet
    vertices: tuple[int, ...]
    f_vector: tuple[int, ...]
    maximal_faces: tuple[NestedSet, ...]
    faces: tuple[tuple[NestedSet, ...], ...] | None  # faces[k] = nested k-sets

    @property
    def dimension(self) -> int:
        return len(self.f_vector) - 2

    def faces_of_size(self, k: int) -> tuple[NestedSet, ...]:
        if self.faces is None:
            raise TooLarge("face lists were not stored for this complex")
        return self.faces[k] if k < len(self.faces) else ()


def enumerate_complex(
    b: BuildingSet, max_faces: int = DEFAULT_MAX_FACES, graphical: bool | None = None
) -> NestedComplex:
    """Depth-first enumeration of all nested sets.

    Faces grow only by vertices later in canonical order.  Each face carries
    the unions of its pairwise disjoint subfamilies, so a new vertex is
    checked pairwise and then only against those cached unions.  For
    graphical buildings the pairwise test alone suffices.
    """
    if b.n > MAX_ENUM_GROUND:
        raise TooLarge(f"enumeration is capped at {MAX_ENUM_GROUND} ground elements")
    if graphical is None:
        graphical = is_graphical(b)[0]
    verts = b.vertices
    nv = len(verts)
    compat = [0] * nv
    for i in range(nv):
        for j in range(nv):
            if i != j and _compatible(b, verts[i], verts[j]):
                compat[i] |= 1 << j
    all_mask = (1 << nv) - 1
    counts = Counter()
    stored: list[list[NestedSet]] | None = [[] for _ in range(b.rank + 1)]
    maximal: list[NestedSet] = []
    rank = b.rank

    def extendable(face_idx, common, unions):
        # any vertex at all, earlier ones included, that keeps the face nested
        cand = common
        while cand:
            low = cand & -cand
            j = low.bit_length() - 1
            cand ^= low
            x = verts[j]
            if graphical or all(u & x or (u | x) not in b for u in unions):
                return True
        return False

    total = 0

    def visit(face_idx, last, common, unions):
        nonlocal stored, total
        k = len(face_idx)
        counts[k] += 1
        total += 1
        if stored is not None:
            if k >= len(stored):
                raise ComplexViolation(f"nested set larger than the rank {rank}")
            stored[k].append(tuple(verts[i] for i in face_idx))
            if total > max_faces:
                stored = None
        grew = False
        cand = common & ~((1 << (last + 1)) - 1)
        while cand:
            low = cand & -cand
            j = low.bit_length() - 1
            cand ^= low
            x = verts[j]
            if not graphical:
                if any(not u & x and (u | x) in b for u in unions):
                    continue
                new_unions = unions | {u | x for u in unions if not u & x} | {x}
            else:
                new_unions = unions
            grew = True
            visit(face_idx + (j,), j, common & compat[j], new_unions)
        if not grew and not extendable(face_idx, common, unions):
            face = tuple(verts[i] for i in face_idx)
            if k != rank:
                raise ComplexViolation(
                    f"maximal nested set of size {k} but rank {rank}",
                    witness=face,
                )
            maximal.append(face)

    visit((), -1, all_mask, frozenset())
    f = tuple(counts[k] for k in range(max(counts) + 1))
    maximal.sort(key=family_key)
    faces = None
    if stored is not None:
        faces = tuple(tuple(sorted(level, key=family_key)) for level in stored)
    return NestedComplex(b, verts, f, tuple(maximal), faces)


def f_vector(b: BuildingSet, cx: NestedComplex | None = None) -> tuple[int, ...]:
    return (cx or enumerate_complex(b)).f_vector


def multiply_f(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, c in enumerate(g):
            out[i + j] += a * c
    return tuple(out)


def link(b: BuildingSet, c: int) -> tuple[BuildingSet, dict[int, int]]:
    """The building ``B|_C x C\\B`` on the same ground set, and the map ``I -> I'``
    from vertices of the link of ``c`` onto its vertices."""
    if c not in b or b.is_component(c):
        raise NotLinkable(f"{bitsets.label(c)} is not a vertex of the nested complex")
    bp = restriction_contraction(b, c)
    mapping = {}
    for i in b.vertices:
        if i == c or not _compatible(b, i, c):
            continue
        mapping[i] = i & ~c if not c & ~i else i
    return bp, mapping


def link_faces(cx: NestedComplex, c: int) -> list[NestedSet]:
    """Faces of the link of ``c``, in original labels (``c`` removed)."""
    out = []
    for level in cx.faces or ():
        for face in level:
            if c in face:
                out.append(tuple(x for x in face if x != c))
    if cx.faces is None:
        raise TooLarge("face lists were not stored for this complex")
    return out


@dataclass(frozen=True)
class ExchangeRecord:
    i1: int
    i2: int
    intersection_components: tuple[int, ...]
    padding: tuple[int, ...]
    union_target: int


def exchange_record(b: BuildingSet, n1: NestedSet, n2: NestedSet) -> ExchangeRecord:
    """Describe the swap between two adjacent maximal nested sets.

    Finds the padding sets and the union target by taking, for each candidate
    target containing both swapped sets, the maximal shared members inside
    the leftover region; checks all three exchange properties on the way.
    """
    s1, s2 = set(n1), set(n2)
    only1, only2 = s1 - s2, s2 - s1
    if len(only1) != 1 or len(only2) != 1:
        raise ComplexViolation("nested sets are not adjacent", witness=(n1, n2))
    (i1,), (i2,) = only1, only2
    shared = s1 & s2
    if not i1 & ~i2 or not i2 & ~i1:
        raise ComplexViolation("one swapped set contains the other", witness=(n1, n2))
    meet = i1 & i2
    inter = b.components_within(meet) if meet else ()
    if any(j not in shared for j in inter):
        raise ComplexViolation("intersection components not shared", witness=(n1, n2))
    both = i1 | i2
    targets = sorted(
        (t for t in shared | set(b.components) if not both & ~t), key=bitsets.key
    )
    for t in targets:
        rest = t & ~both
        inside = [x for x in shared if not x & ~rest]
        pad = [x for x in inside if not any(x != y and not x & ~y for y in inside)]
        cover = 0
        for x in pad:
            cover |= x
        if cover == rest:
            return ExchangeRecord(i1, i2, tuple(inter), canonical(pad), t)
    raise ComplexViolation("no union target for exchange", witness=(n1, n2))


def exchange(b: BuildingSet, n: NestedSet, i: int) -> tuple[NestedSet, ExchangeRecord]:
    n = canonical(n)
    if i not in n:
        raise ValueError(f"{bitsets.label(i)} is not in the nested set")
    if len(n) != b.rank or not is_nested(b, n):
        raise ComplexViolation("exchange needs a maximal nested set", witness=n)
    rest = [x for x in n if x != i]
    found = [
        j for j in b.vertices if j not in n and is_nested(b, rest + [j])
    ]
    if len(found) != 1:
        raise ComplexViolation(
            f"expected exactly one exchange partner, found {len(found)}", witness=(n, i)
        )
    other = canonical(rest + found)
    return other, exchange_record(b, n, other)


@dataclass(frozen=True)
class DualGraph:
    nodes: tuple[NestedSet, ...]
    edges: tuple[tuple[int, int, ExchangeRecord], ...]

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in self.nodes]
        for a, c, _ in self.edges:
            adj[a].append(c)
            adj[c].append(a)
        for row in adj:
            row.sort()
        return adj

    def edge_set(self) -> set[frozenset]:
        return {frozenset((self.nodes[a], self.nodes[c])) for a, c, _ in self.edges}


def dual_graph(b: BuildingSet, cx: NestedComplex | None = None) -> DualGraph:
    """Maximal nested sets joined when they differ in one member.

    Every ridge (maximal set minus one member) must lie in exactly two
    maximal sets; the resulting graph must be rank-regular and connected.
    """
    cx = cx or enumerate_complex(b)
    nodes = cx.maximal_faces
    index = {n: k for k, n in enumerate(nodes)}
    by_ridge = defaultdict(list)
    for n in nodes:
        for x in n:
            by_ridge[tuple(y for y in n if y != x)].append(n)
    edges = []
    for ridge, owners in by_ridge.items():
        if len(owners) != 2:
            raise ComplexViolation(
                f"ridge lies in {len(owners)} maximal nested sets", witness=ridge
            )
        a, c = sorted(index[o] for o in owners)
        edges.append((a, c, exchange_record(b, nodes[a], nodes[c])))
    edges.sort(key=lambda e: (e[0], e[1]))
    dg = DualGraph(nodes, tuple(edges))
    adj = dg.adjacency()
    if any(len(row) != b.rank for row in adj):
        raise ComplexViolation("dual graph is not regular of degree rank")
    if nodes:
        seen = {0}
        queue = deque([0])
        while queue:
            for m in adj[queue.popleft()]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        if len(seen) != len(nodes):
            raise ComplexViolation("dual graph is disconnected")
    return dg


@dataclass(frozen=True)
class GeodesicLoop:
    face: NestedSet
    cycle: tuple[NestedSet, ...]
    kind: str  # D1..D5

    def __len__(self):
        return len(self.cycle)


LOOP_LENGTH = {"D1": 3, "D2": 4, "D3": 4, "D4": 5, "D5": 6}


def iterated_link(b: BuildingSet, face: Iterable[int]) -> BuildingSet:
    """Building whose nested complex is the link of ``face``."""
    pending = list(canonical(face))
    while pending:
        c = pending.pop()
        b, mapping = link(b, c)
        pending = [mapping[x] for x in pending]
    return b


def classify_rank_two(b: BuildingSet) -> str:
    if b.rank != 2:
        raise WrongDimension(f"rank-2 building expected, got rank {b.rank}")
    big = sorted(c.bit_count() for c in b.components if c.bit_count() > 1)
    if big == [2, 2]:
        return "D2"
    (comp,) = [c for c in b.components if c.bit_count() == 3]
    pairs = sum(1 for s in b.sets if s.bit_count() == 2 and not s & ~comp)
    return ("D1", "D3", "D4", "D5")[pairs]


def _order_cycle(nodes: list[NestedSet], adj: dict) -> tuple[NestedSet, ...]:
    start = min(nodes, key=family_key)
    prev, cur = start, min(adj[start], key=family_key)
    cycle = [start]
    while cur != start:
        cycle.append(cur)
        nxt = [m for m in adj[cur] if m != prev]
        prev, cur = cur, nxt[0]
    return tuple(cycle)


def _loop_from(dg_adj: dict, members_: list[NestedSet], face) -> tuple[NestedSet, ...]:
    inside = set(members_)
    sub = {n: [m for m in dg_adj[n] if m in inside] for n in members_}
    if any(len(v) != 2 for v in sub.values()):
        raise ComplexViolation("geodesic loop is not 2-regular", witness=face)
    cycle = _order_cycle(members_, sub)
    if len(cycle) != len(members_):
        raise ComplexViolation("geodesic loop is not a single cycle", witness=face)
    return cycle


def _named_adjacency(dg: DualGraph) -> dict:
    adj = dg.adjacency()
    return {dg.nodes[k]: [dg.nodes[m] for m in row] for k, row in enumerate(adj)}


def geodesic_loop(
    b: BuildingSet, d: Iterable[int], dg: DualGraph | None = None
) -> GeodesicLoop:
    d = canonical(d)
    if b.rank < 2 or len(d) != b.rank - 2:
        raise WrongDimension(f"need a nested set of size rank-2 = {b.rank - 2}")
    if not is_nested(b, d):
        raise WrongDimension("face is not nested")
    dg = dg or dual_graph(b)
    adj = _named_adjacency(dg)
    ds = set(d)
    members_ = [n for n in dg.nodes if ds <= set(n)]
    cycle = _loop_from(adj, members_, d)
    kind = classify_rank_two(iterated_link(b, d))
    if LOOP_LENGTH[kind] != len(cycle):
        raise ComplexViolation(f"{kind} loop has length {len(cycle)}", witness=d)
    return GeodesicLoop(d, cycle, kind)


def geodesic_loops(b: BuildingSet, dg: DualGraph | None = None) -> dict[NestedSet, int]:
    """Length of the geodesic loop around every nested set of size rank-2."""
    if b.rank < 2:
        return {}
    dg = dg or dual_graph(b)
    adj = _named_adjacency(dg)
    around = defaultdict(list)
    for n in dg.nodes:
        for pair in combinations(n, 2):
            around[tuple(x for x in n if x not in pair)].append(n)
    return {face: len(_loop_from(adj, ms, face)) for face, ms in sorted(
        around.items(), key=lambda kv: family_key(kv[0]))}


def check_f_recursion(b: BuildingSet, cx: NestedComplex | None = None) -> bool:
    """``k f_k = sum over vertices C of f_{k-1}`` of the link building; raises on mismatch."""
    f = f_vector(b, cx)
    totals = Counter()
    for c in b.vertices:
        fl = f_vector(link(b, c)[0])
        for k, v in enumerate(fl):
            totals[k + 1] += v
    for k in range(1, max(len(f), max(totals, default=0) + 1)):
        lhs = k * (f[k] if k < len(f) else 0)
        if lhs != totals[k]:
            raise ComplexViolation(f"f-vector recursion fails at k={k}: {lhs} != {totals[k]}")
    return True
