"""Tropicalization-level data of arcs: beta-fibers, sep counts, contact orders."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from fantastack.lattice import DimensionError, IntVector, det, dot, solve_nonneg
from fantastack.stacky import AffineToricData, Fantastack


class OutsideConeError(ValueError):
    pass


@dataclass(frozen=True)
class TropPoint:
    """A lattice point ``w`` of the cone, with its pairings against the facet
    normals as membership certificate."""

    w: IntVector
    certificate: tuple[int, ...]


@dataclass(frozen=True)
class BetaFiber:
    w: TropPoint
    lifts: tuple[IntVector, ...]


def trop_point(sigma: AffineToricData, w: Sequence[int] | TropPoint) -> TropPoint:
    if isinstance(w, TropPoint):
        return w
    w = tuple(int(x) for x in w)
    if len(w) != sigma.d:
        raise DimensionError(f"point {w} is not of length {sigma.d}")
    cert = tuple(dot(w, n) for n in sigma.sigma.facet_normals)
    if any(c < 0 for c in cert):
        raise OutsideConeError(f"{w} lies outside {sigma.sigma!r}")
    return TropPoint(w, cert)


def positive_functional(sigma: AffineToricData, f: Fantastack) -> IntVector:
    """Sum of the Hilbert basis of the dual semigroup; positive on every column
    of ``f`` lying in the cone."""
    p = tuple(sum(col) for col in zip(*sigma.hilbert_P))
    for i in f.chart_columns(sigma):
        v = f.columns[i]
        if dot(v, p) <= 0:
            raise ValueError(f"column {i} = {v} is zero; no positive functional exists")
    return p


def complement_witness(
    f: Fantastack, sigma: AffineToricData, i: int, p: Sequence[int] | None = None
) -> IntVector:
    """``f'`` in ``N^r`` with ``f_i + f'`` the image of ``p`` in the orthant dual.

    ``i`` is a 0-based column index; ``p`` defaults to :func:`positive_functional`.
    """
    if p is None:
        p = positive_functional(sigma, f)
    image = [dot(v, p) for v in f.columns]
    if any(x <= 0 for x in image):
        raise ValueError(f"{tuple(p)} is not positive on every column")
    image[i] -= 1
    return tuple(image)


def beta_fiber(
    f: Fantastack, sigma: AffineToricData, w: Sequence[int] | TropPoint, backend=None
) -> BetaFiber:
    """All ``x`` in ``N^r`` supported on the chart with ``sum x_i v_i = w``."""
    tp = trop_point(sigma, w)
    chart = f.chart_columns(sigma)
    p = positive_functional(sigma, f)
    wp = dot(tp.w, p)
    bound = [wp // dot(f.columns[i], p) for i in chart]
    a = [[f.columns[i][row] for i in chart] for row in range(f.d)]
    sols = solve_nonneg(a, tp.w, bound, backend) if chart else ([()] if not any(tp.w) else [])
    lifts = []
    for s in sols:
        x = [0] * f.r
        for i, v in zip(chart, s):
            x[i] = v
        lifts.append(tuple(x))
    return BetaFiber(tp, tuple(sorted(lifts)))


def sep_pi(f: Fantastack, sigma: AffineToricData, w, backend=None) -> int:
    return len(beta_fiber(f, sigma, w, backend).lifts)


def trop_cylinder_description(
    sigma: AffineToricData, w: Sequence[int] | TropPoint
) -> list[tuple[IntVector, int]]:
    """Each Hilbert-basis monomial with its order of vanishing along the fiber."""
    tp = trop_point(sigma, w)
    return [(p, dot(tp.w, p)) for p in sigma.hilbert_P]


def j_w(sigma: AffineToricData, w: Sequence[int] | TropPoint) -> int:
    """Order of the Gorenstein ideal along the trop fiber over ``w``.

    ``-<w, q> + min m <w, p_1 + ... + p_d>`` over nonsingular ``d``-subsets of
    the Hilbert basis. Restricting to the Hilbert basis loses nothing: the
    determinant is multilinear and every element of the semigroup is a
    nonnegative combination of basis elements with no smaller pairing.
    """
    q, m = sigma.require_q_gorenstein()
    tp = trop_point(sigma, w)
    best = None
    for sub in combinations(sigma.hilbert_P, sigma.d):
        if det(sub) == 0:
            continue
        val = m * sum(dot(tp.w, p) for p in sub)
        if best is None or val < best:
            best = val
    return best - dot(tp.w, q)
