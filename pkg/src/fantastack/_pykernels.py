"""Pure-Python enumeration kernels.

Same algorithms and output order as the compiled ``_ckernels`` module; used
whenever the extension is not built or an operand does not fit in 64 bits.
"""
from itertools import product


def solve_box(a, b, bound):
    """Lexicographically sorted ``x`` with ``0 <= x <= bound`` and ``a x == b``."""
    nrows = len(b)
    ncols = len(bound)
    if ncols == 0:
        return [()] if all(v == 0 for v in b) else []
    cols = [[a[i][j] for i in range(nrows)] for j in range(ncols)]
    # reach_lo[j][i], reach_hi[j][i]: range of row i over columns j..n-1
    reach_lo = [[0] * nrows for _ in range(ncols + 1)]
    reach_hi = [[0] * nrows for _ in range(ncols + 1)]
    for j in range(ncols - 1, -1, -1):
        for i in range(nrows):
            c = cols[j][i] * bound[j]
            reach_lo[j][i] = reach_lo[j + 1][i] + min(0, c)
            reach_hi[j][i] = reach_hi[j + 1][i] + max(0, c)

    out = []
    x = [0] * ncols
    last = ncols - 1
    lcol = cols[last]
    pivot_row = next((i for i in range(nrows) if lcol[i] != 0), None)

    def rec(j, resid):
        lo, hi = reach_lo[j], reach_hi[j]
        for i in range(nrows):
            if resid[i] < lo[i] or resid[i] > hi[i]:
                return
        if j == last:
            if pivot_row is None:
                if any(resid):
                    return
                for v in range(bound[j] + 1):
                    x[j] = v
                    out.append(tuple(x))
                return
            q, r = divmod(resid[pivot_row], lcol[pivot_row])
            if r or q < 0 or q > bound[j]:
                return
            if all(resid[i] == q * lcol[i] for i in range(nrows)):
                x[j] = q
                out.append(tuple(x))
            return
        col = cols[j]
        for v in range(bound[j] + 1):
            x[j] = v
            rec(j + 1, [r - v * c for r, c in zip(resid, col)])
        x[j] = 0

    rec(0, list(b))
    return out


def cone_points_box(normals, q, lo, hi, max_grade):
    """Lattice points of the box ``lo..hi`` with ``<n, x> >= 0`` for every
    normal and ``0 <= <q, x> <= max_grade``, in lexicographic order."""
    out = []
    for x in product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        g = sum(a * b for a, b in zip(q, x))
        if g < 0 or g > max_grade:
            continue
        if all(sum(a * b for a, b in zip(n, x)) >= 0 for n in normals):
            out.append(x)
    return out
