"""Backend selection for the enumeration hot loops.

The compiled extension ``fantastack._ckernels`` is used when it imports and
the operands fit comfortably in 64-bit words; otherwise the pure-Python
module takes over. Both return identical lists in identical order.
"""
from __future__ import annotations

from fantastack import _pykernels

try:
    from fantastack import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
BACKENDS = ("cython", "python") if _ckernels is not None else ("python",)

# products and sums of this many terms must stay below 2**63
_SAFE = 2**62


def _fits(*magnitudes: int) -> bool:
    total = 1
    for m in magnitudes:
        total *= max(1, m)
        if total >= _SAFE:
            return False
    return True


def _module(backend):
    if backend is None:
        return _ckernels or _pykernels
    if backend == "python":
        return _pykernels
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        return _ckernels
    raise ValueError(f"unknown backend {backend!r}")


def _maxabs(values) -> int:
    return max((abs(v) for v in values), default=0)


def solve_box(a, b, bound, backend=None):
    mod = _module(backend)
    if mod is _ckernels:
        amax = max((_maxabs(row) for row in a), default=0)
        ok = _fits(amax + 1, _maxabs(bound) + 1, len(bound) + 1) and _fits(_maxabs(b) + 1, 4)
        if not ok:
            if backend == "cython":
                raise OverflowError("operands exceed the 64-bit kernel range")
            mod = _pykernels
    return mod.solve_box(a, b, bound)


def cone_points_box(normals, q, lo, hi, max_grade, backend=None):
    mod = _module(backend)
    if mod is _ckernels:
        coord = max(_maxabs(lo), _maxabs(hi)) + 1
        coef = max(_maxabs(q), max((_maxabs(n) for n in normals), default=0)) + 1
        if not (_fits(coord, coef, len(lo) + 1) and _fits(max_grade + 1, 4)):
            if backend == "cython":
                raise OverflowError("operands exceed the 64-bit kernel range")
            mod = _pykernels
    return mod.cone_points_box(normals, q, lo, hi, max_grade)
