"""Exact integer/rational linear algebra on small dense matrices (lists of lists)."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import SingularSystem

Matrix = Sequence[Sequence[int]]


def det(matrix: Matrix) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def solve(matrix: Matrix, rhs: Sequence[int]) -> list[Fraction]:
    """Solve a square integer system exactly.

    Forward elimination is fraction-free (Bareiss) on the augmented matrix,
    so intermediate values stay integral; only back substitution divides.
    """
    n = len(matrix)
    m = [list(map(int, row)) + [int(b)] for row, b in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in m):
        raise ValueError("solve() needs a square system")
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    break
            else:
                raise SingularSystem("singular system", witness=[list(r) for r in matrix])
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n]) - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return x


def rref(matrix: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Fractions; returns (rows, pivot_columns)."""
    m = [[Fraction(v) for v in row] for row in matrix]
    if not m:
        return m, []
    cols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(matrix: Sequence[Sequence]) -> int:
    """Rank over the rationals; fraction-free when every entry is an int."""
    if not all(type(v) is int for row in matrix for v in row):
        return len(rref(matrix)[1])
    m = [list(row) for row in matrix]
    if not m:
        return 0
    r, prev = 0, 1
    for c in range(len(m[0])):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivot = m[r][c]
        for i in range(r + 1, len(m)):
            m[i] = [(a * pivot - m[i][c] * b) // prev for a, b in zip(m[i], m[r])]
        prev = pivot
        r += 1
        if r == len(m):
            break
    return r


def solve_general(matrix: Sequence[Sequence], rhs: Sequence):
    """Solve a possibly non-square system over the rationals.

    Returns ``None`` when inconsistent, otherwise ``(particular, free_cols)``;
    the solution is unique exactly when ``free_cols`` is empty.
    """
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, ncols)
    for row in red[len(pivots):]:
        if row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        x[c] = row[ncols]
    free = [c for c in range(ncols) if c not in pivots]
    return x, free


def null_space(matrix: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    red, pivots = rref(matrix, ncols) if matrix else ([], [])
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(v)
    return basis


def adjugate(matrix: Matrix) -> tuple[list[list[int]], int]:
    """``(A, d)`` with ``matrix @ A == d * I``; fraction-free Gauss-Jordan on ``[M | I]``.

    ``d`` is the determinant up to sign; it is 0 exactly when the matrix is singular.
    """
    n = len(matrix)
    m = [[int(v) for v in row] + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k]), None)
        if p is None:
            return [[0] * n for _ in range(n)], 0
        m[k], m[p] = m[p], m[k]
        pivot = m[k][k]
        for i in range(n):
            if i == k:
                continue
            f = m[i][k]
            m[i] = [(pivot * a - f * b) // prev for a, b in zip(m[i], m[k])]
        prev = pivot
    return [row[n:] for row in m], prev


def inverse(matrix: Matrix) -> list[list[Fraction]]:
    if all(type(v) is int for row in matrix for v in row):
        adj, d = adjugate(matrix)
        if d == 0:
            raise SingularSystem("matrix is not invertible", witness=[list(r) for r in matrix])
        return [[Fraction(v, d) for v in row] for row in adj]
    n = len(matrix)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = rref(aug, n)
    if len(pivots) < n:
        raise SingularSystem("matrix is not invertible", witness=[list(r) for r in matrix])
    return [row[n:] for row in red]


def integer_inverse(matrix: Matrix) -> list[list[int]]:
    """Inverse of a unimodular integer matrix, as integers."""
    inv = inverse(matrix)
    out = []
    for row in inv:
        if any(v.denominator != 1 for v in row):
            raise SingularSystem("inverse is not integral", witness=[list(r) for r in matrix])
        out.append([int(v) for v in row])
    return out


def _fm_eliminate(rows: list[tuple[list[Fraction], Fraction]], var: int):
    pos, neg, rest = [], [], []
    for a, b in rows:
        if a[var] > 0:
            pos.append((a, b))
        elif a[var] < 0:
            neg.append((a, b))
        else:
            rest.append((a, b))
    for ap, bp in pos:
        for an, bn in neg:
            sp, sn = ap[var], -an[var]
            a = [sn * x + sp * y for x, y in zip(ap, an)]
            a[var] = Fraction(0)
            rest.append((a, sn * bp + sp * bn))
    # drop exact duplicates to slow the blow-up
    seen, out = set(), []
    for a, b in rest:
        k = (tuple(a), b)
        if k not in seen:
            seen.add(k)
            out.append((a, b))
    return out


def feasible(a_ub: Sequence[Sequence], b_ub: Sequence) -> bool:
    """Is ``{x : a_ub @ x <= b_ub}`` nonempty?  Fourier-Motzkin, exact."""
    rows = [([Fraction(v) for v in a], Fraction(b)) for a, b in zip(a_ub, b_ub)]
    nvars = len(rows[0][0]) if rows else 0
    for var in range(nvars):
        rows = _fm_eliminate(rows, var)
    return all(b >= 0 for _, b in rows)


def pointed_orthant_trivial(q: Sequence[Sequence[int]]) -> bool:
    """True iff ``b >= 0`` and ``q @ b >= 0`` force ``b = 0``.

    The cone lies in the orthant so it is pointed; it is nontrivial exactly
    when it has an extreme ray, i.e. a nonzero point where m-1 independent
    constraints are tight.
    """
    m = len(q[0]) if q else 0
    if m == 0:
        return True
    cons = [[int(i == j) for i in range(m)] for j in range(m)] + [list(r) for r in q]

    def inside(b) -> bool:
        return all(sum(c * x for c, x in zip(row, b)) >= 0 for row in cons)

    seen = set()
    for idx in combinations(range(len(cons)), m - 1):
        basis = null_space([cons[i] for i in idx], m)
        if len(basis) != 1:
            continue
        b = basis[0]
        key = tuple(b)
        if key in seen:
            continue
        seen.add(key)
        if inside(b) or inside([-x for x in b]):
            return False
    return True


def independent_subsets(rows: Sequence[Sequence], k: int):
    """All k-subsets of row indices whose rows are linearly independent."""
    for idx in combinations(range(len(rows)), k):
        if rank([rows[i] for i in idx]) == k:
            yield idx
