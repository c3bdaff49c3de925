# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels on 64-bit integers.

Callers guarantee every intermediate fits in a signed 64-bit word; see
``fantastack.kernels`` for the guard that routes oversized inputs to the
pure-Python implementation.
"""
from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef struct BoxProblem:
    int nrows
    int ncols
    i64 *cols       # cols[j * nrows + i] = a[i][j]
    i64 *bound
    i64 *reach_lo   # (ncols + 1) * nrows
    i64 *reach_hi
    i64 *resid      # (ncols + 1) * nrows, one residual row per depth
    i64 *x
    int pivot_row


cdef object _emit(BoxProblem *p):
    return tuple([p.x[j] for j in range(p.ncols)])


cdef int _rec(BoxProblem *p, int j, list out) except -1:
    cdef int i, nrows = p.nrows
    cdef int last = p.ncols - 1
    cdef i64 v, q, c
    cdef i64 *res = p.resid + j * nrows
    cdef i64 *nxt
    cdef i64 *lcol
    for i in range(nrows):
        if res[i] < p.reach_lo[j * nrows + i] or res[i] > p.reach_hi[j * nrows + i]:
            return 0
    if j == last:
        lcol = p.cols + last * nrows
        if p.pivot_row < 0:
            for i in range(nrows):
                if res[i] != 0:
                    return 0
            for v in range(p.bound[j] + 1):
                p.x[j] = v
                out.append(_emit(p))
            p.x[j] = 0
            return 0
        c = lcol[p.pivot_row]
        if res[p.pivot_row] % c != 0:
            return 0
        q = res[p.pivot_row] // c
        if q < 0 or q > p.bound[j]:
            return 0
        for i in range(nrows):
            if res[i] != q * lcol[i]:
                return 0
        p.x[j] = q
        out.append(_emit(p))
        p.x[j] = 0
        return 0
    nxt = p.resid + (j + 1) * nrows
    for v in range(p.bound[j] + 1):
        p.x[j] = v
        for i in range(nrows):
            nxt[i] = res[i] - v * p.cols[j * nrows + i]
        _rec(p, j + 1, out)
    p.x[j] = 0
    return 0


def solve_box(a, b, bound):
    """Lexicographically sorted ``x`` with ``0 <= x <= bound`` and ``a x == b``."""
    cdef int nrows = len(b)
    cdef int ncols = len(bound)
    cdef int i, j
    cdef i64 c
    cdef BoxProblem p
    cdef list out = []
    if ncols == 0:
        return [()] if all(v == 0 for v in b) else []
    p.nrows = nrows
    p.ncols = ncols
    p.cols = <i64 *> malloc(max(1, ncols * nrows) * sizeof(i64))
    p.bound = <i64 *> malloc(ncols * sizeof(i64))
    p.reach_lo = <i64 *> malloc(max(1, (ncols + 1) * nrows) * sizeof(i64))
    p.reach_hi = <i64 *> malloc(max(1, (ncols + 1) * nrows) * sizeof(i64))
    p.resid = <i64 *> malloc(max(1, (ncols + 1) * nrows) * sizeof(i64))
    p.x = <i64 *> malloc(ncols * sizeof(i64))
    try:
        for j in range(ncols):
            p.bound[j] = bound[j]
            p.x[j] = 0
            for i in range(nrows):
                p.cols[j * nrows + i] = a[i][j]
        for i in range(nrows):
            p.reach_lo[ncols * nrows + i] = 0
            p.reach_hi[ncols * nrows + i] = 0
            p.resid[i] = b[i]
        for j in range(ncols - 1, -1, -1):
            for i in range(nrows):
                c = p.cols[j * nrows + i] * p.bound[j]
                p.reach_lo[j * nrows + i] = p.reach_lo[(j + 1) * nrows + i] + (c if c < 0 else 0)
                p.reach_hi[j * nrows + i] = p.reach_hi[(j + 1) * nrows + i] + (c if c > 0 else 0)
        p.pivot_row = -1
        for i in range(nrows):
            if p.cols[(ncols - 1) * nrows + i] != 0:
                p.pivot_row = i
                break
        _rec(&p, 0, out)
    finally:
        free(p.cols)
        free(p.bound)
        free(p.reach_lo)
        free(p.reach_hi)
        free(p.resid)
        free(p.x)
    return out


def cone_points_box(normals, q, lo, hi, i64 max_grade):
    """Lattice points of the box ``lo..hi`` with ``<n, x> >= 0`` for every
    normal and ``0 <= <q, x> <= max_grade``, in lexicographic order."""
    cdef int d = len(lo)
    cdef int nn = len(normals)
    cdef int i, k, pos
    cdef i64 g, s
    cdef bint ok
    cdef list out = []
    cdef i64 *nv = <i64 *> malloc(max(1, nn * d) * sizeof(i64))
    cdef i64 *qv = <i64 *> malloc(d * sizeof(i64))
    cdef i64 *lov = <i64 *> malloc(d * sizeof(i64))
    cdef i64 *hiv = <i64 *> malloc(d * sizeof(i64))
    cdef i64 *x = <i64 *> malloc(d * sizeof(i64))
    try:
        if d == 0:
            return [()]
        for i in range(d):
            qv[i] = q[i]
            lov[i] = lo[i]
            hiv[i] = hi[i]
            x[i] = lo[i]
            if lov[i] > hiv[i]:
                return out
        for k in range(nn):
            for i in range(d):
                nv[k * d + i] = normals[k][i]
        while True:
            g = 0
            for i in range(d):
                g += qv[i] * x[i]
            if 0 <= g <= max_grade:
                ok = True
                for k in range(nn):
                    s = 0
                    for i in range(d):
                        s += nv[k * d + i] * x[i]
                    if s < 0:
                        ok = False
                        break
                if ok:
                    out.append(tuple([x[i] for i in range(d)]))
            # odometer, last coordinate fastest
            pos = d - 1
            while pos >= 0:
                if x[pos] < hiv[pos]:
                    x[pos] += 1
                    break
                x[pos] = lov[pos]
                pos -= 1
            if pos < 0:
                break
    finally:
        free(nv)
        free(qv)
        free(lov)
        free(hiv)
        free(x)
    return out
