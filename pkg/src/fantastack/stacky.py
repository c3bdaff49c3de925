"""Stacky fans, fantastacks and their combinatorial flags."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import lcm
from typing import Sequence

from fantastack.cones import Cone, ConeError, contains, dual_cone, hilbert_basis, points_up_to_grade
from fantastack.lattice import (
    IntMatrix,
    IntVector,
    dot,
    is_extendable_to_basis,
    is_primitive,
    rank,
    solve_rational,
)

MAX_COLUMNS = 20


class FantastackError(ValueError):
    """Validation failure while building a fantastack.

    ``kind`` is one of ``"ray uncovered"``, ``"v_i outside support"``,
    ``"cokernel infinite"``, ``"invalid fan"``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class NotQGorensteinError(ValueError):
    pass


@dataclass(frozen=True)
class StackyFanInput:
    ambient_rank: int
    rays: tuple[IntVector, ...]
    maximal_cones: tuple[tuple[int, ...], ...]
    nu: tuple[IntVector, ...] | None = None
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "maximal_cones", tuple(tuple(c) for c in self.maximal_cones))
        if self.nu is not None:
            object.__setattr__(self, "nu", tuple(tuple(int(x) for x in v) for v in self.nu))
        d = self.ambient_rank
        for r in self.rays:
            if len(r) != d:
                raise FantastackError("invalid fan", f"ray {r} is not of length {d}")
            if not is_primitive(r):
                raise FantastackError("invalid fan", f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise FantastackError("invalid fan", "rays are not distinct")
        if not self.maximal_cones:
            raise FantastackError("invalid fan", "no cones given")
        for c in self.maximal_cones:
            if not c or any(not 0 <= i < len(self.rays) for i in c):
                raise FantastackError("invalid fan", f"cone {list(c)} has an out-of-range ray index")
        for v in self.nu or ():
            if len(v) != d:
                raise FantastackError("invalid fan", f"nu column {v} is not of length {d}")

    @property
    def columns(self) -> tuple[IntVector, ...]:
        """The images ``v_i = nu(e_i)``; the rays themselves when ``nu`` is absent."""
        return self.rays if self.nu is None else self.nu


@dataclass(frozen=True)
class AffineToricData:
    """A full-dimensional pointed cone with its dual, the Hilbert basis of the
    dual semigroup, and Q-Gorenstein data ``(q, m)`` when it exists."""

    sigma: Cone
    dual: Cone
    hilbert_P: tuple[IntVector, ...]
    qm: tuple[IntVector, int] | None

    @property
    def d(self) -> int:
        return self.sigma.d

    def require_q_gorenstein(self) -> tuple[IntVector, int]:
        if self.qm is None:
            raise NotQGorensteinError(f"{self.sigma!r} is not Q-Gorenstein")
        return self.qm


def q_gorenstein(c: Cone) -> tuple[IntVector, int] | None:
    """Smallest ``m > 0`` and ``q`` with ``<v, q> = m`` on every primitive ray."""
    c.require_full_dimensional()
    sol = solve_rational(c.rays, [1] * len(c.rays))
    if sol is None:
        return None
    m = lcm(*(x.denominator for x in sol))
    return tuple(int(x * m) for x in sol), m


@lru_cache(maxsize=256)
def affine_toric_data(c: Cone) -> AffineToricData:
    c.require_full_dimensional()
    dual = dual_cone(c)
    return AffineToricData(c, dual, tuple(hilbert_basis(dual)), q_gorenstein(c))


@dataclass(frozen=True)
class Fantastack:
    """Validated stacky-fan data. Column ``i`` is ``v_i = nu(e_i)``; ``orthants[k]``
    lists the columns lying in maximal cone ``k``."""

    input: StackyFanInput
    cones: tuple[Cone, ...]
    columns: tuple[IntVector, ...]
    orthants: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return len(self.columns)

    @property
    def d(self) -> int:
        return self.input.ambient_rank

    @property
    def beta(self) -> IntMatrix:
        """``d x r`` matrix whose columns are the ``v_i``."""
        return tuple(tuple(v[i] for v in self.columns) for i in range(self.d))

    def affine(self, k: int = 0) -> AffineToricData:
        return affine_toric_data(self.cones[k])

    def chart_columns(self, sigma: AffineToricData) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.columns) if contains(sigma.sigma, v))

    def cone_containing(self, w: Sequence[int]) -> int | None:
        return next((k for k, c in enumerate(self.cones) if contains(c, w)), None)

    @cached_property
    def gms_iso_over_torus(self) -> bool:
        return gms_iso_over_torus(self)

    @cached_property
    def special_stabilizers(self) -> tuple[bool, tuple[int, ...] | None]:
        return has_special_stabilizers(self)

    @cached_property
    def combinatorially_crepant(self) -> bool:
        return is_combinatorially_crepant(self)

    @property
    def is_canonical(self) -> bool:
        return self.input.nu is None or tuple(self.input.nu) == self.input.rays


def build_fantastack(inp: StackyFanInput) -> Fantastack:
    d = inp.ambient_rank
    cones = []
    for idx in inp.maximal_cones:
        gens = [inp.rays[i] for i in idx]
        try:
            c = Cone(gens, d)
        except ConeError as e:
            raise FantastackError("invalid fan", str(e)) from None
        if not c.full_dimensional:
            raise FantastackError("invalid fan", f"maximal cone {list(idx)} is not full-dimensional")
        if len(c.rays) != len(set(gens)):
            raise FantastackError("invalid fan", f"cone {list(idx)} lists a ray that is not extreme")
        cones.append(c)
    columns = inp.columns
    for r in inp.rays:
        if not any(_on_ray(v, r) for v in columns):
            raise FantastackError("ray uncovered", f"ray {r} contains no nu column")
    # unreachable while maximal cones are full-dimensional; kept as a guard
    if not columns or rank(columns) < d:
        raise FantastackError("cokernel infinite", "the nu columns do not span N over Q")
    for i, v in enumerate(columns):
        if not any(contains(c, v) for c in cones):
            raise FantastackError("v_i outside support", f"column {i} = {v} is outside the support")
    orthants = tuple(
        tuple(i for i, v in enumerate(columns) if contains(c, v)) for c in cones
    )
    return Fantastack(inp, tuple(cones), tuple(columns), orthants)


def _on_ray(v: IntVector, r: IntVector) -> bool:
    # v is a positive multiple of the primitive vector r
    k = next((Fraction(a, b) for a, b in zip(v, r) if b), None)
    return k is not None and k > 0 and all(a == k * b for a, b in zip(v, r))


def canonical_stack(c: Cone | StackyFanInput) -> Fantastack:
    """Fantastack whose columns are the primitive ray generators."""
    if isinstance(c, StackyFanInput):
        inp = StackyFanInput(c.ambient_rank, c.rays, c.maximal_cones, None, c.name)
    else:
        c.require_full_dimensional()
        inp = StackyFanInput(c.d, c.rays, (tuple(range(len(c.rays))),))
    return build_fantastack(inp)


def fantastack_over_cone(c: Cone, nu: Sequence[Sequence[int]]) -> Fantastack:
    return build_fantastack(
        StackyFanInput(c.d, c.rays, (tuple(range(len(c.rays))),), tuple(map(tuple, nu)))
    )


def gms_iso_over_torus(f: Fantastack) -> bool:
    return all(any(v) for v in f.columns)


def is_combinatorially_crepant(f: Fantastack) -> bool:
    data = []
    for k, c in enumerate(f.cones):
        qm = affine_toric_data(c).qm
        if qm is None:
            raise NotQGorensteinError(f"maximal cone {k} {c!r} is not Q-Gorenstein")
        data.append((c, qm))
    return all(
        any(contains(c, v) and dot(q, v) == m for c, (q, m) in data)
        for v in f.columns
    )


def has_special_stabilizers(f: Fantastack) -> tuple[bool, tuple[int, ...] | None]:
    """Basis-extension test over all column subsets, smallest subsets first.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is a
    linearly independent subset of column indices that does not extend to a
    basis of ``N``.
    """
    if f.r > MAX_COLUMNS:
        raise ValueError(f"{f.r} columns exceed the subset-enumeration limit {MAX_COLUMNS}")
    cols = f.columns
    for size in range(1, f.r + 1):
        for sub in combinations(range(f.r), size):
            vecs = [cols[i] for i in sub]
            if rank(vecs) == size and not is_extendable_to_basis(vecs, f.d):
                return False, sub
    return True, None


def lemma_sum_identity(f: Fantastack, sigma: AffineToricData) -> tuple[bool, list[int]]:
    """``<v_i, q> = m`` for every column in the chart; returns offenders.

    Equivalent to ``m (f_1 + ... + f_r) = q`` as functionals on ``Z^r``, since
    ``q`` pulled back along ``beta`` has coordinates ``<v_i, q>``.
    """
    q, m = sigma.require_q_gorenstein()
    bad = [i for i in f.chart_columns(sigma) if dot(f.columns[i], q) != m]
    return not bad, bad


def beta_surjective_up_to(
    f: Fantastack, sigma: AffineToricData, grade_bound: int
) -> tuple[bool, list[IntVector]]:
    """Every ``w`` in ``sigma`` with ``<w, q> <= grade_bound * m`` has a lift."""
    from fantastack.arcs import beta_fiber

    q, m = sigma.require_q_gorenstein()
    missing = [
        w for w in points_up_to_grade(sigma.sigma, q, grade_bound * m)
        if not beta_fiber(f, sigma, w).lifts
    ]
    return not missing, missing
