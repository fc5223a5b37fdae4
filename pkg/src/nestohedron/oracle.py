"""Brute-force reference implementations for cross-checking on small instances.

Nothing here uses the shortcuts of the optimized modules: nestedness is the
raw antichain condition, expansions are searched over every maximal nested
set in ``Z^S`` directly, and vertices come from tight-constraint enumeration
or from an exact edge walk over the H-description.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Sequence

import numpy as np

from . import bitsets
from .bitsets import canonical, family_key, members
from .building import BuildingSet, Graph, close_under_unions, graphical_from_graph, validate_building
from .errors import TooLarge
from .linalg import det, inverse, null_space, rank, solve_general
from .nested import NestedComplex
from .polytope import Polytope

MAX_BRUTE_FACES = 200_000
MAX_VERTEX_COMBINATIONS = 60_000


def raw_nested(b: BuildingSet, family: Sequence[int]) -> bool:
    """Definition check: no antichain of two or more members has its union in ``b``."""
    fam = list(family)
    for k in range(2, len(fam) + 1):
        for sub in combinations(fam, k):
            if any(x != y and not x & ~y for x in sub for y in sub):
                continue
            u = 0
            for x in sub:
                u |= x
            if u in b:
                return False
    return True


def brute_nested_complex(b: BuildingSet, max_faces: int = MAX_BRUTE_FACES) -> NestedComplex:
    """Every nested set, by growing families one vertex at a time.

    A family containing a non-nested subfamily is never nested, so growing
    only nested families still visits every nested set.
    """
    verts = tuple(s for s in b.sets if s not in set(b.components))
    levels: list[list[tuple]] = [[()]]
    total = 1
    while levels[-1]:
        nxt = []
        for face in levels[-1]:
            start = verts.index(face[-1]) + 1 if face else 0
            for x in verts[start:]:
                cand = face + (x,)
                if raw_nested(b, cand):
                    nxt.append(cand)
        total += len(nxt)
        if total > max_faces:
            raise TooLarge(f"more than {max_faces} nested sets")
        levels.append(nxt)
    levels.pop()
    faces = tuple(tuple(sorted((canonical(f) for f in lv), key=family_key)) for lv in levels)
    maximal = []
    all_faces = {frozenset(f) for lv in faces for f in lv}
    for lv in faces:
        for f in lv:
            fs = set(f)
            if not any(frozenset(fs | {x}) in all_faces for x in verts if x not in fs):
                maximal.append(f)
    maximal.sort(key=family_key)
    return NestedComplex(b, verts, tuple(len(lv) for lv in faces), tuple(maximal), faces)


class ExpansionSearch:
    """Exhaustive nested-expansion search in ``Z^S``.

    Every nested support lies in some maximal nested set ``M``, so solving
    ``sum c_I e_I + sum t_C e_C = v`` over each ``M`` (the ``t_C`` free) and
    keeping the nonnegative integral solutions finds every expansion.  Each
    system is inverted once, as an integer adjugate over its determinant.
    """

    def __init__(self, b: BuildingSet, cx: NestedComplex):
        self.building = b
        self.cones = cx.maximal_faces or ((),)
        comps = list(b.components)
        adjs = []
        for m in self.cones:
            cols = list(m) + comps
            if len(cols) != b.n:
                raise TooLarge("maximal nested set does not give a square system")
            mat = [[c >> i & 1 for c in cols] for i in range(b.n)]
            dt = det(mat)
            if dt == 0:
                raise TooLarge("maximal nested set does not give a basis")
            inv = inverse(mat)
            adjs.append([[int(v * dt) for v in row] for row in inv])
        self.adj = np.array(adjs, dtype=np.int64).reshape(len(self.cones), b.n, b.n)
        self.det = np.array(
            [det([[c >> i & 1 for c in list(m) + comps] for i in range(b.n)]) for m in self.cones],
            dtype=np.int64,
        )

    def expansions(self, v_lift: Sequence[int]) -> set[frozenset]:
        k = len(self.cones[0])
        num = self.adj @ np.array(v_lift, dtype=np.int64)  # (cones, n)
        num = num[:, :k] * np.sign(self.det)[:, None]
        den = np.abs(self.det)[:, None]
        ok = ((num >= 0) & (num % den == 0)).all(axis=1)
        out = set()
        for idx in np.nonzero(ok)[0]:
            coeffs = (num[idx] // den[idx]).tolist()
            out.add(frozenset((s, c) for s, c in zip(self.cones[idx], coeffs) if c > 0))
        return out

    def count(self, v_lift: Sequence[int]) -> int:
        return len(self.expansions(v_lift))


def brute_expansion_uniqueness(
    ql,
    v: Sequence[int],
    cx: NestedComplex | None = None,
    bound: int = 10,
    search: ExpansionSearch | None = None,
) -> int:
    """Number of nonnegative integer expansions of the lattice vector ``v`` with nested support."""
    b = ql.building
    if ql.dim > 5 or max((abs(x) for x in v), default=0) > bound:
        raise TooLarge("brute expansion search is limited to dim 5 and |coords| <= bound")
    if search is None:
        search = ExpansionSearch(b, cx or brute_nested_complex(b))
    return search.count(ql.lift(v))


def brute_vertices(p: Polytope, limit: int = MAX_VERTEX_COMBINATIONS) -> set[tuple]:
    """Vertices from every choice of ``rank`` tight inequalities.

    All choices are solved at once in floating point to discard singular
    and clearly infeasible ones; every survivor is then re-solved and
    checked exactly, so the float pass only prunes.
    """
    b = p.building
    if b.n > 7:
        raise TooLarge("brute vertex enumeration needs |S| <= 7")
    ineq = list(p.inequalities)
    d = b.rank
    if comb(len(ineq), d) > limit:
        raise TooLarge(f"{comb(len(ineq), d)} constraint subsets exceed {limit}")
    eq_rows = [[c >> i & 1 for i in range(b.n)] for c in p.equalities]
    a_ineq = np.array([[s >> i & 1 for i in range(b.n)] for s, _ in ineq], dtype=float)
    a_ineq = a_ineq.reshape(len(ineq), b.n)
    rhs_ineq = np.array([r for _, r in ineq], dtype=float)
    k = comb(len(ineq), d)
    combos = np.array(list(combinations(range(len(ineq)), d)), dtype=np.int64).reshape(k, d)
    mats = np.concatenate(
        [np.broadcast_to(np.array(eq_rows, dtype=float).reshape(-1, b.n), (k, len(eq_rows), b.n)),
         a_ineq[combos]],
        axis=1,
    )
    rhs = np.concatenate([np.zeros((k, len(eq_rows))), rhs_ineq[combos]], axis=1)
    # 0/1 matrices of size <= 7 have integer determinants far above float error
    regular = np.abs(np.linalg.det(mats)) > 0.5
    xs = np.linalg.solve(mats[regular], rhs[regular][..., None])[..., 0]
    slack = 1e-6 * (1 + np.abs(rhs_ineq))
    feasible = (xs @ a_ineq.T <= rhs_ineq + slack).all(axis=1)
    out = set()
    for idx in combos[regular][feasible]:
        rows = eq_rows + [[ineq[j][0] >> i & 1 for i in range(b.n)] for j in idx]
        sol = solve_general(rows, [0] * len(eq_rows) + [ineq[j][1] for j in idx])
        if sol is None or sol[1]:
            continue
        x = tuple(v.numerator if v.denominator == 1 else v for v in sol[0])
        if all(_dot(s, x) <= rhs for s, rhs in ineq):
            out.add(x)
    return out


def _dot(mask: int, x) -> Fraction:
    return sum((x[i] for i in members(mask)), Fraction(0))


def _scaled(v: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(c.denominator for c in v)) if v else 1
    return [int(c * den) for c in v], den


def _idot(mask: int, nums: Sequence[int]) -> int:
    return sum(nums[i] for i in members(mask))


def walk_vertices(p: Polytope) -> set[tuple]:
    """Vertices by an exact walk along the edges of the H-description.

    Starts at the origin (interior, since every right-hand side is positive),
    shoots to a vertex, then follows every edge direction at every vertex.
    Degenerate vertices are handled by trying every basis of the tight rows.
    Vectors are kept as integer numerators over a common denominator.
    """
    b = p.building
    n = b.n
    d = b.rank
    eq_rows = [[c >> i & 1 for i in range(n)] for c in p.equalities]
    ineq = list(p.inequalities)

    def tight_at(x):
        xn, xd = _scaled(x)
        return [k for k, (s, rhs) in enumerate(ineq) if _idot(s, xn) == rhs * xd]

    def advance(x, u, skip):
        """Move from x along u until the first inequality outside ``skip`` is hit."""
        xn, xd = _scaled(x)
        un, ud = _scaled(u)
        best = None  # (slack numerator, rate numerator); step = (p / q) * ud / xd
        for k, (s, rhs) in enumerate(ineq):
            if k in skip:
                continue
            rate = _idot(s, un)
            if rate > 0:
                slack = rhs * xd - _idot(s, xn)
                if best is None or slack * best[1] < best[0] * rate:
                    best = (slack, rate)
        if best is None:
            return None
        step = Fraction(best[0] * ud, best[1] * xd)
        return tuple(a + step * c for a, c in zip(x, u))

    x = tuple([Fraction(0)] * n)
    if d == 0:
        return {x}
    while True:
        t_rows = [[ineq[k][0] >> i & 1 for i in range(n)] for k in tight_at(x)]
        basis = null_space(eq_rows + t_rows, n)
        if not basis:
            break
        u = basis[0]
        y = advance(x, u, set())
        if y is None:
            y = advance(x, [-c for c in u], set())
        x = y
    seen = {x}
    queue = deque([x])
    neq = len(eq_rows)
    while queue:
        x = queue.popleft()
        tight = tight_at(x)
        for basis_idx in combinations(tight, d):
            rows = eq_rows + [[ineq[k][0] >> i & 1 for i in range(n)] for k in basis_idx]
            if rank(rows) != n:
                continue
            inv = inverse(rows)
            others = [k for k in tight if k not in basis_idx]
            for pos in range(d):
                # stay on the other basis rows, move off this one
                u = [-inv[r][neq + pos] for r in range(n)]
                if others:
                    un, _ = _scaled(u)
                    if any(_idot(ineq[k][0], un) > 0 for k in others):
                        continue
                y = advance(x, u, set(tight))
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return seen


def random_building(rng: random.Random, n: int, edge_prob: float = 0.5) -> BuildingSet:
    """A random graph's building, half the time enlarged by union-closing extra sets."""
    edges = [(a, c) for a, c in combinations(range(n), 2) if rng.random() < edge_prob]
    b = graphical_from_graph(Graph.from_edges(n, edges))
    if n >= 3 and rng.random() < 0.5:
        extra = set(b.sets)
        for _ in range(rng.randint(1, 3)):
            k = rng.randint(2, n)
            extra.add(bitsets.from_members(rng.sample(range(n), k)))
        b = validate_building(close_under_unions(extra), n)
    return b


def random_buildings(count: int, seed: int = 0, max_n: int = 6) -> list[BuildingSet]:
    rng = random.Random(seed)
    return [random_building(rng, rng.randint(1, max_n)) for _ in range(count)]


@dataclass
class OracleReport:
    instance: str
    checks: list[str] = field(default_factory=list)
    passed: bool = True
    witness: object = None

    def fail(self, check: str, witness) -> "OracleReport":
        self.passed = False
        self.checks.append(check)
        self.witness = witness
        return self


def _mismatch(a: set, b: set):
    """Smallest element of the symmetric difference, as a reproducing witness."""
    diff = a ^ b
    return min(diff, key=lambda f: (len(f), repr(f))) if diff else None


def compare_all(b: BuildingSet, name: str = "", samples: int = 20, seed: int = 0) -> OracleReport:
    """Run every oracle against the optimized path on one building."""
    from .fan import QuotientLattice, nested_expansion
    from .nested import enumerate_complex
    from .polytope import realize, vertices

    rep = OracleReport(name or f"n={b.n} |B|={len(b)}")
    fast = enumerate_complex(b)
    slow = brute_nested_complex(b)
    rep.checks.append("complex")
    fa = {f for lv in fast.faces for f in lv}
    sl = {f for lv in slow.faces for f in lv}
    if fa != sl:
        return rep.fail("complex", _mismatch(fa, sl))
    if fast.maximal_faces != slow.maximal_faces:
        return rep.fail("maximal faces", _mismatch(set(fast.maximal_faces), set(slow.maximal_faces)))
    if b.rank <= 5:
        rep.checks.append("expansion uniqueness")
        ql = QuotientLattice(b)
        search = ExpansionSearch(b, slow)
        rng = random.Random(seed)
        for _ in range(samples):
            lift = [rng.randint(0, 10) for _ in range(b.n)]
            found = search.expansions(lift)
            mine = frozenset(nested_expansion(ql, ql.project(lift)).terms.items())
            if found != {mine}:
                return rep.fail("expansion uniqueness", tuple(lift))
    p = realize(b)
    rep.checks.append("vertices")
    mine = set(vertices(p, fast).values())
    try:
        theirs = brute_vertices(p)
    except TooLarge:
        theirs = walk_vertices(p)
    if mine != theirs:
        return rep.fail("vertices", _mismatch(mine, theirs))
    return rep
