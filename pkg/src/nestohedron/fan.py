"""The nested fan: lattice coordinates, unimodularity, nested expansions, fan axioms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import bitsets
from .bitsets import canonical, members
from .building import BuildingSet
from .errors import FanViolation, LengthMismatch, NotMaximal
from .linalg import det, integer_inverse, pointed_orthant_trivial
from .nested import NestedComplex, NestedSet, enumerate_complex, is_nested

SAMPLE_BOX = 50


class QuotientLattice:
    """``Z^S`` modulo the component vectors ``e_C``.

    The largest element of every component is eliminated; a vector is
    written in the coordinates of the remaining elements (ascending) after
    substituting ``e_last = -(sum of the other e_i in C)``.
    """

    def __init__(self, b: BuildingSet):
        self.building = b
        self.eliminated = tuple(max(members(c)) for c in b.components)
        elim = set(self.eliminated)
        self.kept = tuple(i for i in range(b.n) if i not in elim)
        self.dim = len(self.kept)
        self._elim_of = {}
        for c in b.components:
            last = max(members(c))
            for i in members(c):
                self._elim_of[i] = last
        self._rays: dict[int, tuple[int, ...]] = {}

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.building.n:
            raise LengthMismatch(f"expected {self.building.n} coordinates, got {len(v)}")
        return tuple(int(v[i]) - int(v[self._elim_of[i]]) for i in self.kept)

    def ray(self, subset: int) -> tuple[int, ...]:
        r = self._rays.get(subset)
        if r is None:
            r = self.project([subset >> i & 1 for i in range(self.building.n)])
            self._rays[subset] = r
        return r

    def lift(self, v: Sequence[int]) -> list[int]:
        """Nonnegative preimage with minimum zero on every component."""
        if len(v) != self.dim:
            raise LengthMismatch(f"expected {self.dim} coordinates, got {len(v)}")
        c = [0] * self.building.n
        for i, x in zip(self.kept, v):
            c[i] = int(x)
        for comp in self.building.components:
            idx = list(members(comp))
            low = min(c[i] for i in idx)
            for i in idx:
                c[i] -= low
        return c

    def combine(self, terms: dict[int, int]) -> tuple[int, ...]:
        out = [0] * self.dim
        for s, coef in terms.items():
            for k, x in enumerate(self.ray(s)):
                out[k] += coef * x
        return tuple(out)


def ray_matrix(ql: QuotientLattice, n: NestedSet) -> list[list[int]]:
    """Rays as columns."""
    rays = [ql.ray(s) for s in n]
    return [[r[k] for r in rays] for k in range(ql.dim)]


def basis_check(ql: QuotientLattice, n: NestedSet) -> int:
    if len(n) != ql.dim:
        raise NotMaximal(f"a maximal nested set has {ql.dim} members, got {len(n)}")
    return det(ray_matrix(ql, n))


def ambient_basis_det(b: BuildingSet, n: NestedSet) -> int:
    """Determinant of the ``e_I`` for ``I`` in ``N`` together with the components."""
    cols = list(n) + list(b.components)
    if len(cols) != b.n:
        raise NotMaximal("wrong number of vectors for a basis of Z^S")
    return det([[c >> i & 1 for c in cols] for i in range(b.n)])


@dataclass(frozen=True)
class NestedExpansion:
    terms: dict[int, int] = field(hash=False)

    @property
    def support(self) -> NestedSet:
        return canonical(self.terms)


def nested_expansion(ql: QuotientLattice, v: Sequence[int]) -> NestedExpansion:
    """Expansion through the filtration ``S_j = {i : c_i >= j}`` of a normalized lift."""
    b = ql.building
    c = ql.lift(v)
    levels = sorted(set(c) - {0})
    terms: dict[int, int] = {}
    prev = 0
    for t in levels:
        s_j = 0
        for i, x in enumerate(c):
            if x >= t:
                s_j |= 1 << i
        for comp in b.components_within(s_j):
            terms[comp] = terms.get(comp, 0) + (t - prev)
        prev = t
    for s in terms:
        if b.is_component(s):
            raise FanViolation("expansion used a component", witness=tuple(v))
    return NestedExpansion(dict(sorted(terms.items(), key=lambda kv: bitsets.key(kv[0]))))


def locate(ql: QuotientLattice, v: Sequence[int]) -> NestedSet:
    """Smallest cone of the fan containing ``v``."""
    return nested_expansion(ql, v).support


@dataclass
class FanReport:
    cones: int = 0
    pairs: int = 0
    pairs_exact_fallback: int = 0
    samples: int = 0
    dim: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class _ConeTable:
    """Integer inverses of all maximal ray matrices, and every ray in every basis."""

    def __init__(self, ql: QuotientLattice, cx: NestedComplex):
        self.cones = cx.maximal_faces
        self.verts = list(cx.vertices)
        self.vidx = {s: k for k, s in enumerate(self.verts)}
        d = ql.dim
        mats = np.array(
            [ray_matrix(ql, n) for n in self.cones], dtype=np.int64
        ).reshape(len(self.cones), d, d)
        # round a float inverse, then confirm it exactly in integers
        self.inv = np.rint(np.linalg.inv(mats.astype(float))).astype(np.int64)
        eye = np.eye(d, dtype=np.int64)
        for k in np.nonzero(~(mats @ self.inv == eye).all(axis=(1, 2)))[0]:
            self.inv[k] = np.array(integer_inverse(ray_matrix(ql, self.cones[k])), dtype=np.int64)
        self.rays = np.array([ql.ray(s) for s in self.verts], dtype=np.int64).reshape(-1, d)
        self.members = np.array(
            [[self.vidx[s] for s in n] for n in self.cones], dtype=np.int64
        ).reshape(len(self.cones), d)
        # coords[k, v, r]: coefficient of the r-th ray of cone k in ray v
        self.coords = np.einsum("krd,vd->kvr", self.inv, self.rays)
        self.incidence = np.zeros((len(self.cones), len(self.verts)), dtype=bool)
        for k in range(len(self.cones)):
            self.incidence[k, self.members[k]] = True
        if np.abs(self.coords).max(initial=0) > 2**40:
            raise FanViolation("coordinate table overflow risk")
        self.good = self._separation(ql.building)

    def _separation(self, b: BuildingSet) -> np.ndarray:
        """good[k, v]: the vertex of cone k is tight on ray v only if v is in cone k.

        The vertex x_k of the realization pairs to f(I) with every I in N_k.
        Strict slack off N_k makes x_1 - x_2 a functional separating the
        non-shared rays of N_1 and N_2, which certifies the pair exactly.
        """
        from .polytope import f_n

        height = np.array(
            [f_n(bitsets.size(b.component_of(s)), bitsets.size(s)) for s in self.verts],
            dtype=np.int64,
        )
        own = height[self.members]  # (cones, d)
        pairing = np.einsum("kvr,kr->kv", self.coords, own)
        slack = height[None, :] - pairing
        return (slack > 0) | (self.incidence & (slack == 0))


def _check_intersections(table: _ConeTable, report: FanReport) -> None:
    cones = table.cones
    m = len(cones)
    d = table.members.shape[1] if m else 0
    if m < 2 or d == 0:
        return
    for k2 in range(m):
        others = np.arange(k2)  # each unordered pair once
        if not len(others):
            continue
        mem1 = table.members[others]  # (p, d) vertex ids of N1
        in2 = np.isin(mem1, table.members[k2])  # ray of N1 shared with N2
        # which of N2's basis positions are shared, per N1
        pos_shared = (table.members[k2][None, :, None] == mem1[:, None, :]).any(axis=2)
        q = table.coords[k2][mem1]  # (p, d_rays_of_N1, d_positions_of_N2)
        free_pos = ~pos_shared
        # certificate 1: summing the non-shared coordinates gives a negative value
        sums = (q * free_pos[:, None, :]).sum(axis=2)
        ok_sum = np.where(in2, True, sums < 0).all(axis=1)
        # certificate 2: one non-shared coordinate is negative for every non-shared ray
        neg = (q < 0) | in2[:, :, None]
        ok_row = (neg.all(axis=1) & free_pos).any(axis=1)
        # separating functional from the realization, both directions
        ok_sep = table.good[k2][mem1].all(axis=1) & table.good[others][
            :, table.members[k2]
        ].all(axis=1)
        ok = ok_sep | ok_sum | ok_row
        report.pairs += len(others)
        for k1 in np.nonzero(~ok)[0]:
            report.pairs_exact_fallback += 1
            n1 = set(cones[k1])
            n2 = cones[k2]
            j_rays = [s for s in cones[k1] if s not in set(n2)]
            r_pos = [p for p, s in enumerate(n2) if s not in n1]
            qm = [
                [int(table.coords[k2][table.vidx[s]][p]) for s in j_rays] for p in r_pos
            ]
            if not pointed_orthant_trivial(qm):
                raise FanViolation(
                    "cones meet outside their common face",
                    witness=(cones[k1], n2),
                )


def check_smoothness(ql: QuotientLattice, cx: NestedComplex) -> None:
    """Every maximal ray matrix has determinant +-1."""
    for n in cx.maximal_faces:
        dt = basis_check(ql, n)
        if abs(dt) != 1:
            raise FanViolation(f"ray matrix has determinant {dt}", witness=n)


def check_intersections(
    ql: QuotientLattice, cx: NestedComplex, table: _ConeTable | None = None
) -> FanReport:
    """Any two maximal cones meet exactly in the cone on their common rays."""
    report = FanReport(cones=len(cx.maximal_faces), dim=ql.dim)
    if ql.dim:
        _check_intersections(table or _ConeTable(ql, cx), report)
    return report


def check_completeness(
    ql: QuotientLattice,
    cx: NestedComplex,
    samples: int = 1000,
    seed: int = 0,
    table: _ConeTable | None = None,
) -> int:
    """Sampled lattice vectors expand with nested support and land in the right cones."""
    if ql.dim == 0:
        return 0
    rng = random.Random(seed)
    vs = [tuple(rng.randint(-SAMPLE_BOX, SAMPLE_BOX) for _ in range(ql.dim)) for _ in range(samples)]
    supports = [_check_expansion(ql, v) for v in vs]
    _check_containment(table or _ConeTable(ql, cx), vs, supports)
    return len(vs)


def verify_fan(
    ql: QuotientLattice,
    samples: int = 1000,
    seed: int = 0,
    cx: NestedComplex | None = None,
) -> FanReport:
    """Smoothness, pairwise intersections and completeness of the nested fan.

    Raises :class:`FanViolation` with a witness on the first failure.
    """
    cx = cx or enumerate_complex(ql.building)
    if ql.dim == 0:
        return FanReport(cones=len(cx.maximal_faces), dim=0)
    check_smoothness(ql, cx)
    table = _ConeTable(ql, cx)
    report = check_intersections(ql, cx, table)
    report.samples = check_completeness(ql, cx, samples, seed, table)
    return report


def _check_expansion(ql: QuotientLattice, v) -> NestedSet:
    exp = nested_expansion(ql, v)
    support = exp.support
    if not is_nested(ql.building, support):
        raise FanViolation("expansion support is not nested", witness=v)
    if ql.combine(exp.terms) != tuple(v):
        raise FanViolation("expansion does not reproduce the vector", witness=v)
    again = nested_expansion(ql, ql.combine(exp.terms))
    if again.terms != exp.terms:
        raise FanViolation("re-expansion differs", witness=v)
    return support


def _check_containment(table: _ConeTable, vs, supports, chunk: int = 256) -> None:
    """The cones containing each vector are exactly the cones containing its support."""
    for lo in range(0, len(vs), chunk):
        block = np.array(vs[lo : lo + chunk], dtype=np.int64)
        coords = np.einsum("krd,sd->skr", table.inv, block)  # (samples, cones, d)
        containing = (coords >= 0).all(axis=2)
        interior = (coords > 0).all(axis=2).sum(axis=1)
        for j, support in enumerate(supports[lo : lo + chunk]):
            v = vs[lo + j]
            if any(s not in table.vidx for s in support):
                raise FanViolation("expansion support is not a face of the complex", witness=v)
            cols = [table.vidx[s] for s in support]
            expected = table.incidence[:, cols].all(axis=1)
            if not np.array_equal(containing[j], expected):
                raise FanViolation(
                    "cones containing the vector disagree with its support", witness=v
                )
            if interior[j] > 1:
                raise FanViolation("vector is interior to two maximal cones", witness=v)


def cone_intersection_naive(ql: QuotientLattice, n1: NestedSet, n2: NestedSet) -> bool:
    """Exact pairwise check for one pair, without the vectorized shortcuts."""
    inv2 = integer_inverse(ray_matrix(ql, n2))
    s1, s2 = set(n1), set(n2)
    j_rays = [s for s in n1 if s not in s2]
    r_pos = [p for p, s in enumerate(n2) if s not in s1]
    q = [[sum(inv2[p][k] * ql.ray(s)[k] for k in range(ql.dim)) for s in j_rays]
         for p in r_pos]
    return pointed_orthant_trivial(q)


def all_pairs_naive(ql: QuotientLattice, cx: NestedComplex) -> bool:
    return all(
        cone_intersection_naive(ql, a, c) for a, c in combinations(cx.maximal_faces, 2)
    )
