"""Jet-fiber invariants over a trop fiber: stabilizer dimensions, the affine
dimension of the group quotient, the fiber class and stabilization levels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from fantastack.arcs import TropPoint, beta_fiber, trop_point
from fantastack.lattice import dot, integer_kernel, rank
from fantastack.motive import MotivicClass
from fantastack.stacky import AffineToricData, Fantastack


class NotCrepantError(ValueError):
    pass


@dataclass(frozen=True)
class JetFiberData:
    w: TropPoint
    j_prime: int
    theta: MotivicClass
    threshold: int


def h_dim(f: Fantastack | None, w_tilde: Sequence[int]) -> int:
    """Dimension of the stabilizer group of a lift: its coordinate sum."""
    if any(x < 0 for x in w_tilde):
        raise ValueError(f"lift {tuple(w_tilde)} has a negative coordinate")
    if f is not None and len(w_tilde) != f.r:
        raise ValueError(f"lift {tuple(w_tilde)} is not of length {f.r}")
    return sum(w_tilde)


def relation_lattice(sigma: AffineToricData) -> tuple[tuple[int, ...], ...]:
    """Integer relations ``sum m_i p_i = 0`` among the Hilbert basis, one per row."""
    hb = sigma.hilbert_P
    rows = [[p[k] for p in hb] for k in range(sigma.d)]
    return integer_kernel(rows, len(hb))


def j_prime(sigma: AffineToricData, w: Sequence[int] | TropPoint) -> int:
    """Dimension of the linear space cut out by the jet constraints.

    Variables ``x[i][l]`` for Hilbert-basis element ``i`` and level
    ``1 <= l <= max_i <w, p_i>``; ``x[i][l] = 0`` once ``l > <w, p_i>``, and
    every relation vector annihilates ``(x[i][l])_i`` at each level. The
    system is block diagonal in ``l``, so the rank is summed per level.
    """
    tp = trop_point(sigma, w)
    orders = [dot(tp.w, p) for p in sigma.hilbert_P]
    relations = relation_lattice(sigma)
    total = 0
    for level in range(1, max(orders, default=0) + 1):
        live = [i for i, o in enumerate(orders) if o >= level]
        block = [[rel[i] for i in live] for rel in relations]
        total += len(live) - (rank(block) if live else 0)
    return total


def _require_crepant(f: Fantastack, sigma: AffineToricData) -> None:
    q, m = sigma.require_q_gorenstein()
    bad = [i for i in f.chart_columns(sigma) if dot(f.columns[i], q) != m]
    if bad:
        raise NotCrepantError(
            f"columns {bad} are off the height-{m} hyperplane of {sigma.sigma!r}"
        )


def theta(f: Fantastack, sigma: AffineToricData, w: Sequence[int] | TropPoint) -> MotivicClass:
    """Class of the stabilized jet fiber: ``sum L^(j' - h(lift))`` over lifts."""
    _require_crepant(f, sigma)
    fiber = beta_fiber(f, sigma, w)
    jp = j_prime(sigma, fiber.w)
    out = MotivicClass()
    for lift in fiber.lifts:
        out = out + MotivicClass.L(jp - h_dim(f, lift))
    return out


def stability_threshold(f: Fantastack, sigma: AffineToricData, w: Sequence[int] | TropPoint) -> int:
    _require_crepant(f, sigma)
    fiber = beta_fiber(f, sigma, w)
    cands = [0]
    cands += [2 * dot(fiber.w.w, p) - 1 for p in sigma.hilbert_P]
    cands += [2 * x - 1 for lift in fiber.lifts for x in lift]
    return max(cands)


def jet_fiber_data(f: Fantastack, sigma: AffineToricData, w) -> JetFiberData:
    tp = trop_point(sigma, w)
    return JetFiberData(tp, j_prime(sigma, tp), theta(f, sigma, tp), stability_threshold(f, sigma, tp))
