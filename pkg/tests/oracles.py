"""Brute-force reference computations, written without the library's algorithms.

Cone membership uses hand-written inequalities, lattice points come from
plain box loops, and linear algebra is Fraction Gaussian elimination.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd


# name -> (rays, inequalities of the cone, Q-Gorenstein data or None)
FIXTURES = {
    "SMOOTH2": ([(1, 0), (0, 1)], [(1, 0), (0, 1)], ((1, 1), 1)),
    "A1": ([(1, 0), (1, 2)], [(0, 1), (2, -1)], ((1, 0), 1)),
    "CONIFOLD": (
        [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)],
        [(1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1)],
        ((0, 0, 1), 1),
    ),
    "M3": ([(1, 0), (2, 3)], [(0, 1), (3, -2)], ((3, -1), 3)),
    "NONQG": (
        [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 2)],
        None,
        None,
    ),
}
QG_FIXTURES = ("SMOOTH2", "A1", "CONIFOLD", "M3")
A1FULL_NU = [(1, 0), (1, 2), (1, 1)]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def frac_rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def frac_det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return out


def frac_nullspace(rows, ncols):
    """Basis of the rational nullspace, as rows."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = [a / m[r][c] for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def gcd_of_maximal_minors(vectors) -> int:
    k = len(vectors)
    n = len(vectors[0])
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, int(frac_det([[v[c] for c in cols] for v in vectors])))
    return g


def in_cone(ineqs, w) -> bool:
    return all(dot(n, w) >= 0 for n in ineqs)


def box_points(ineqs, radius, d):
    return [w for w in product(range(-radius, radius + 1), repeat=d) if in_cone(ineqs, w)]


def points_by_grade(ineqs, q, max_grade, radius):
    out = {}
    for w in box_points(ineqs, radius, len(q)):
        g = dot(w, q)
        if g <= max_grade:
            out.setdefault(g, []).append(w)
    return out


def minimal_elements(points):
    """Nonzero semigroup elements that are not a sum of two nonzero ones."""
    pts = set(points)
    nonzero = [p for p in pts if any(p)]
    out = []
    for x in nonzero:
        split = any(
            any(a) and tuple(xi - ai for xi, ai in zip(x, a)) in pts and any(xi - ai for xi, ai in zip(x, a))
            for a in nonzero
        )
        if not split:
            out.append(x)
    return sorted(out)


def brute_dual_hilbert_basis(rays, radius):
    # the dual cone is cut out by the primal rays
    return minimal_elements(box_points(rays, radius, len(rays[0])))


def brute_lifts(columns, w, bound):
    r = len(columns)
    out = []
    for x in product(range(bound + 1), repeat=r):
        img = tuple(sum(x[i] * columns[i][k] for i in range(r)) for k in range(len(w)))
        if img == tuple(w):
            out.append(x)
    return sorted(out)


def torus_times(counts, d, m, precision):
    """Multiply ``sum counts[g] t^g`` by ``(1 - t^m)^d`` one factor at a time."""
    c = [counts.get(g, 0) for g in range(precision + 1)]
    for _ in range(d):
        c = [c[k] - (c[k - m] if k >= m else 0) for k in range(precision + 1)]
    return c


def brute_j_prime(hb, w) -> int:
    """Nullity of the full jet system with one variable per (generator, level)."""
    s = len(hb)
    orders = [dot(w, p) for p in hb]
    top = max(orders, default=0)
    if top == 0:
        return 0
    rel = frac_nullspace([[p[k] for p in hb] for k in range(len(w))], s)
    nvars = s * top
    idx = lambda i, lvl: i * top + (lvl - 1)
    eqs = []
    for i in range(s):
        for lvl in range(orders[i] + 1, top + 1):
            row = [0] * nvars
            row[idx(i, lvl)] = 1
            eqs.append(row)
    for rv in rel:
        for lvl in range(1, top + 1):
            row = [Fraction(0)] * nvars
            for i in range(s):
                row[idx(i, lvl)] = rv[i]
            eqs.append(row)
    return nvars - frac_rank(eqs)


def brute_j_w(semigroup, w, q, m, d) -> int:
    """Minimum over all nonsingular ``d``-subsets of the given semigroup elements."""
    best = None
    for sub in combinations(semigroup, d):
        if frac_det(sub) != 0:
            val = m * sum(dot(w, p) for p in sub)
            best = val if best is None else min(best, val)
    return best - dot(w, q)
