"""Exact integer linear algebra over Python ints.

Matrices are plain row-major sequences of integer sequences; results are
returned as tuples of tuples so they can be hashed and shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from fantastack import kernels

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]


class DimensionError(ValueError):
    """Raised when vector or matrix shapes do not line up."""


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise DimensionError("ragged matrix")
    return m


def shape(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, int]:
    """Rows and columns of ``m``; ``ncols`` disambiguates an empty matrix."""
    if len(m) == 0:
        return 0, ncols or 0
    return len(m), len(m[0])


def transpose(m: Sequence[Sequence[int]], ncols: int = 0) -> IntMatrix:
    if not m:
        return tuple(() for _ in range(ncols))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], x: Sequence[int]) -> IntVector:
    return tuple(sum(ai * xi for ai, xi in zip(row, x)) for row in a)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def primitive(v: Sequence[int]) -> IntVector:
    """Divide ``v`` by the gcd of its coordinates (zero stays zero)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g in (0, 1):
        return tuple(v)
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r][c]
        for i in range(r + 1, len(work)):
            f = work[i][c]
            if f:
                work[i] = [p * x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return r


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionError("det of a non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Some rational solution of ``a x = b``, or None when inconsistent.

    Free variables are set to zero, so the answer is unique whenever ``a``
    has full column rank.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    work = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r][c]
        work[r] = [x / p for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    if any(work[i][ncols] != 0 for i in range(r, nrows)):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = work[i][ncols]
    return tuple(x)


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ M @ V == S`` with ``U`` and ``V`` unimodular and ``S`` diagonal."""

    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def snf(m: Sequence[Sequence[int]], ncols: int | None = None) -> SNFDecomposition:
    """Smith normal form with transformation matrices.

    Pivot choice is deterministic: the nonzero entry of smallest magnitude in
    the active block, ties broken by lowest (row, column) index.

    Args:
        m: integer matrix, row-major.
        ncols: column count, only needed when ``m`` has no rows.
    """
    nr, nc = shape(m, ncols)
    a = [list(row) for row in m]
    u = [list(row) for row in identity(nr)]
    v = [list(row) for row in identity(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    factors = []
    for k in range(min(nr, nc)):
        while True:
            best = None
            for i in range(k, nr):
                for j in range(k, nc):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(k, i)
            swap_cols(k, j)
            p = a[k][k]
            dirty = False
            for i in range(k + 1, nr):
                if a[i][k]:
                    add_row(i, k, -(a[i][k] // p))
                    dirty = dirty or a[i][k] != 0
            for j in range(k + 1, nc):
                if a[k][j]:
                    add_col(j, k, -(a[k][j] // p))
                    dirty = dirty or a[k][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(k + 1, nr) for j in range(k + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(k, bad, 1)
                continue
            break
        if a[k][k] == 0:
            break
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        factors.append(a[k][k])
    return SNFDecomposition(
        S=tuple(map(tuple, a)),
        U=tuple(map(tuple, u)),
        V=tuple(map(tuple, v)),
        invariant_factors=tuple(factors),
    )


def invariant_factors(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, ...]:
    return snf(m, ncols).invariant_factors


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """A basis of ``{x in Z^n : a x = 0}``, one vector per row."""
    dec = snf(a, ncols)
    n = shape(a, ncols)[1]
    return tuple(tuple(dec.V[i][j] for i in range(n)) for j in range(dec.rank, n))


def _check_vectors(vectors, ambient_rank):
    for vec in vectors:
        if len(vec) != ambient_rank:
            raise DimensionError(f"vector {tuple(vec)} is not of length {ambient_rank}")


def quotient_is_torsion_free(vectors: Sequence[Sequence[int]], ambient_rank: int) -> bool:
    """True when ``Z^n / span(vectors)`` has no torsion."""
    _check_vectors(vectors, ambient_rank)
    return all(f == 1 for f in invariant_factors(vectors, ambient_rank))


def is_extendable_to_basis(vectors: Sequence[Sequence[int]], ambient_rank: int) -> bool:
    """True when ``vectors`` can be completed to a basis of ``Z^n``."""
    _check_vectors(vectors, ambient_rank)
    factors = invariant_factors(vectors, ambient_rank)
    return len(factors) == len(vectors) and all(f == 1 for f in factors)


def solve_nonneg(
    a: Sequence[Sequence[int]],
    b: Sequence[int],
    bound: Sequence[int],
    backend: str | None = None,
) -> list[IntVector]:
    """All ``0 <= x <= bound`` with ``a x = b``, sorted lexicographically."""
    if len(b) != len(a):
        raise DimensionError("right-hand side length does not match row count")
    if any(len(row) != len(bound) for row in a):
        raise DimensionError("bound length does not match column count")
    if any(x < 0 for x in bound):
        raise ValueError("bound must be componentwise nonnegative")
    return kernels.solve_box(a, b, bound, backend=backend)


def rational_inverse(m: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse of a nonsingular square integer matrix over the rationals."""
    n = len(m)
    if rank(m) < n:
        raise ValueError("matrix is singular")
    cols = [solve_rational(m, [int(i == j) for i in range(n)]) for j in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
