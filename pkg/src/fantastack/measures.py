"""Measures of trop fibers, stringy series, sep integrals and the identity verifier.

Every series here is in ``t = L^(-1/m)`` for the root order ``m`` of the
cone. A point of grade ``g = <w, q>`` contributes from t-degree ``g``
onwards, so summing all points of grade at most ``precision`` gives every
coefficient up to ``precision`` exactly.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from fantastack.arcs import beta_fiber, j_w, sep_pi, trop_point
from fantastack.cones import graded_series_simplicial, points_up_to_grade, triangulate
from fantastack.jets import h_dim, j_prime, theta
from fantastack.lattice import dot
from fantastack.motive import (
    MotivicClass,
    RationalMotive,
    TruncatedSeries,
    render_class,
    render_series,
)
from fantastack.stacky import (
    AffineToricData,
    Fantastack,
    StackyFanInput,
    affine_toric_data,
    build_fantastack,
    has_special_stabilizers,
    lemma_sum_identity,
)


class PreconditionError(ValueError):
    pass


class InconsistentGradeError(ValueError):
    def __init__(self, w, grades):
        super().__init__(f"point {w} gets different grades {grades} from its containing cones")
        self.w = w
        self.grades = grades


def torus_factor(d: int) -> MotivicClass:
    """``(L - 1)^d L^-d``."""
    return (MotivicClass.L(1) - 1) ** d * MotivicClass.L(-d)


def _torus_poly(d: int, m: int) -> dict[int, int]:
    # (1 - t^m)^d
    return {m * k: (-1) ** k * comb(d, k) for k in range(d + 1)}


def gor_measure_trop_fiber(sigma: AffineToricData, w) -> MotivicClass:
    q, m = sigma.require_q_gorenstein()
    tp = trop_point(sigma, w)
    return torus_factor(sigma.d) * MotivicClass.z(-dot(tp.w, q), m)


def motivic_measure_trop_fiber(sigma: AffineToricData, w) -> MotivicClass:
    """Gorenstein measure untwisted by the contact order ``j_w``."""
    q, m = sigma.require_q_gorenstein()
    tp = trop_point(sigma, w)
    return gor_measure_trop_fiber(sigma, tp) * MotivicClass.z(-j_w(sigma, tp), m)


def motivic_measure_from_jets(sigma: AffineToricData, w) -> MotivicClass:
    """``(L - 1)^d L^(-d - j'_w)``, the same measure through jet dimensions."""
    return torus_factor(sigma.d) * MotivicClass.L(-j_prime(sigma, w))


def _require_stack_preconditions(f: Fantastack, sigma: AffineToricData) -> None:
    ok, bad = lemma_sum_identity(f, sigma)
    if not ok:
        raise PreconditionError(f"columns {bad} break crepancy over {sigma.sigma!r}")
    if not f.gms_iso_over_torus:
        raise PreconditionError("a nu column is zero; the moduli map is not an isomorphism over the torus")


def stack_measure_trop_preimage(f: Fantastack, sigma: AffineToricData, w) -> MotivicClass:
    """Stack measure of the arcs over ``trop^-1(w)``, summed lift by lift.

    Each lift ``x`` is a trop fiber of the orthant chart and contributes
    ``(L - 1)^d L^(-d - |x|)``.
    """
    _require_stack_preconditions(f, sigma)
    fiber = beta_fiber(f, sigma, w)
    out = MotivicClass()
    for lift in fiber.lifts:
        out = out + torus_factor(f.d) * MotivicClass.L(-h_dim(f, lift))
    return out


def _series_from_grades(grade_counts: Counter, d: int, m: int, precision: int) -> TruncatedSeries:
    acc: Counter = Counter()
    tp = _torus_poly(d, m)
    for g, n in grade_counts.items():
        for k, c in tp.items():
            if g + k <= precision:
                acc[g + k] += n * c
    return TruncatedSeries(acc, m, precision)


def stringy_series(sigma: AffineToricData, precision: int, backend=None) -> TruncatedSeries:
    q, m = sigma.require_q_gorenstein()
    grades = Counter(dot(w, q) for w in points_up_to_grade(sigma.sigma, q, precision, backend))
    return _series_from_grades(grades, sigma.d, m, precision)


def stringy_rational(sigma: AffineToricData) -> RationalMotive:
    """Closed form from the half-open pieces of a triangulation, simplified."""
    q, m = sigma.require_q_gorenstein()
    total = RationalMotive({}, (), m)
    for piece in triangulate(sigma.sigma):
        total = total + graded_series_simplicial(piece, q, m)
    return (RationalMotive(_torus_poly(sigma.d, m), (), m) * total).simplify()


def stringy_series_fan(inp: StackyFanInput, precision: int, backend=None) -> TruncatedSeries:
    """Stringy series of a whole fan, in ``t = L^(-1/M)`` with ``M`` the lcm of
    the cone root orders.

    Lattice points of the support are counted once each. A point lying in
    several maximal cones must get the same rational grade from all of them.
    """
    f = build_fantastack(StackyFanInput(inp.ambient_rank, inp.rays, inp.maximal_cones, None, inp.name))
    data = [affine_toric_data(c) for c in f.cones]
    qms = [s.require_q_gorenstein() for s in data]
    big_m = lcm(*(m for _, m in qms))
    grade_of: dict[tuple, Fraction] = {}
    for s, (q, m) in zip(data, qms):
        for w in points_up_to_grade(s.sigma, q, precision * m // big_m, backend):
            g = Fraction(dot(w, q), m)
            prev = grade_of.setdefault(w, g)
            if prev != g:
                raise InconsistentGradeError(w, (prev, g))
    grades = Counter(int(g * big_m) for g in grade_of.values())
    return _series_from_grades(grades, f.d, big_m, precision)


def _points_with_sep(f, sigma, precision, backend=None):
    q, m = sigma.require_q_gorenstein()
    for w in points_up_to_grade(sigma.sigma, q, precision, backend):
        yield w, dot(w, q), sep_pi(f, sigma, w, backend)


def sep_integral_series(f: Fantastack, sigma: AffineToricData, precision: int, backend=None) -> TruncatedSeries:
    """``sum_w sep(w) * mu_Gor(trop^-1(w))``, truncated.

    Summed both pointwise and grouped by the value of sep; the two orders
    must agree.
    """
    _require_stack_preconditions(f, sigma)
    _, m = sigma.require_q_gorenstein()
    pointwise: Counter = Counter()
    by_value: dict[int, Counter] = defaultdict(Counter)
    for _, g, n in _points_with_sep(f, sigma, precision, backend):
        pointwise[g] += n
        by_value[n][g] += 1
    a = _series_from_grades(pointwise, sigma.d, m, precision)
    b = TruncatedSeries({}, m, precision)
    for n, grades in sorted(by_value.items()):
        b = b + _series_from_grades(grades, sigma.d, m, precision) * n
    if a != b:
        raise ArithmeticError(f"summation orders disagree: {a} vs {b}")
    return a


def sepX_integral_series(f: Fantastack, sigma: AffineToricData, precision: int, backend=None) -> TruncatedSeries:
    """``sum_n (1/n) mu_X(sep_X = n)`` with rational coefficients.

    The stack measure of each level set is summed over lifts, so each point
    with ``n`` lifts enters ``n`` times and is then divided by ``n``.
    """
    _require_stack_preconditions(f, sigma)
    _, m = sigma.require_q_gorenstein()
    tp = _torus_poly(sigma.d, m)
    levels: dict[int, Counter] = defaultdict(Counter)
    q, _ = sigma.qm
    for w in points_up_to_grade(sigma.sigma, q, precision, backend):
        lifts = beta_fiber(f, sigma, w, backend).lifts
        for lift in lifts:
            # L^-h(lift) is t^(m h); crepancy makes m h = <w, q>
            levels[len(lifts)][m * h_dim(f, lift)] += 1
    acc: Counter = Counter()
    for n, grades in levels.items():
        for g, cnt in grades.items():
            for k, c in tp.items():
                if g + k <= precision:
                    acc[g + k] += Fraction(cnt * c, n)
    return TruncatedSeries(acc, m, precision)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str  # "pass", "fail" or "skipped"
    reason: str | None = None
    witness: dict | None = None
    checked: int = 0

    def __post_init__(self):
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError(f"failed check {self.name!r} has no witness")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "reason": self.reason,
            "checked": self.checked,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class VerificationReport:
    grade_bound: int
    precision: int
    checks: tuple[CheckRecord, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def __getitem__(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "grade_bound": self.grade_bound,
            "precision": self.precision,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
        }

    def render_table(self) -> str:
        width = max(len(c.name) for c in self.checks) if self.checks else 0
        lines = [f"grade bound {self.grade_bound}, precision {self.precision}"]
        for c in self.checks:
            line = f"{c.name.ljust(width)}  {c.status:<7}  checked={c.checked}"
            if c.reason:
                line += f"  ({c.reason})"
            lines.append(line)
            if c.witness:
                for k, v in c.witness.items():
                    lines.append(f"{'':{width}}    {k}: {v}")
        return "\n".join(lines)


def _w_json(w) -> list[int]:
    return list(w)


def _check_over_points(name, points, lhs_fn, rhs_fn, render) -> CheckRecord:
    n = 0
    for w in points:
        lhs, rhs = lhs_fn(w), rhs_fn(w)
        n += 1
        if lhs != rhs:
            return CheckRecord(name, "fail", witness={"w": _w_json(w), "lhs": render(lhs), "rhs": render(rhs)}, checked=n)
    return CheckRecord(name, "pass", checked=n)


def verify_identities(
    f: Fantastack, sigma: AffineToricData, grade_bound: int = 8, precision: int = 12, backend=None
) -> VerificationReport:
    """Run the six identity checks; precondition failures become skipped records."""
    names = (
        "theta_equals_sep_times_contact",
        "contact_order_routes_agree",
        "crepant_sum_identity",
        "termwise_measure_identity",
        "summed_measure_identity",
        "sepX_equals_stringy",
    )
    if sigma.qm is None:
        return VerificationReport(
            grade_bound, precision,
            tuple(CheckRecord(n, "skipped", reason="cone is not Q-Gorenstein") for n in names),
        )
    q, m = sigma.qm
    points = points_up_to_grade(sigma.sigma, q, grade_bound * m, backend)
    crepant, bad = lemma_sum_identity(f, sigma)
    stack_ok = crepant and f.gms_iso_over_torus
    why = None
    if not crepant:
        why = f"columns {bad} are off the height-{m} hyperplane"
    elif not f.gms_iso_over_torus:
        why = "a nu column is zero"
    out = []

    if crepant:
        out.append(_check_over_points(
            names[0], points,
            lambda w: theta(f, sigma, w),
            lambda w: MotivicClass.z(j_w(sigma, w), m) * sep_pi(f, sigma, w, backend),
            render_class,
        ))
    else:
        out.append(CheckRecord(names[0], "skipped", reason=why))

    # depends only on sigma, so it is meaningful for every stack over it
    out.append(_check_over_points(
        names[1], points,
        lambda w: j_w(sigma, w),
        lambda w: m * j_prime(sigma, w) - dot(w, q),
        str,
    ))

    if crepant:
        out.append(CheckRecord(names[2], "pass", checked=len(f.chart_columns(sigma))))
    else:
        out.append(CheckRecord(
            names[2], "fail", checked=len(f.chart_columns(sigma)),
            witness={"columns": bad, "lhs": str([dot(f.columns[i], q) for i in bad]), "rhs": str(m)},
        ))

    if stack_ok:
        out.append(_check_over_points(
            names[3], points,
            lambda w: stack_measure_trop_preimage(f, sigma, w),
            lambda w: gor_measure_trop_fiber(sigma, w) * sep_pi(f, sigma, w, backend),
            render_class,
        ))
        summed = TruncatedSeries({}, m, precision)
        n = 0
        for w in points_up_to_grade(sigma.sigma, q, precision, backend):
            summed = summed + stack_measure_trop_preimage(f, sigma, w).to_series(precision, m)
            n += 1
        integral = sep_integral_series(f, sigma, precision, backend)
        if summed == integral:
            out.append(CheckRecord(names[4], "pass", checked=n))
        else:
            out.append(CheckRecord(
                names[4], "fail", checked=n,
                witness={"lhs": render_series(summed), "rhs": render_series(integral)},
            ))
        out.append(_sepx_check(names[5], f, sigma, precision, backend))
    else:
        out.extend(CheckRecord(nm, "skipped", reason=why) for nm in names[3:])
    return VerificationReport(grade_bound, precision, tuple(out))


def _sepx_check(name, f, sigma, precision, backend) -> CheckRecord:
    q, m = sigma.qm
    lhs = sepX_integral_series(f, sigma, precision, backend)
    rhs = stringy_series(sigma, precision, backend)
    special, sub = has_special_stabilizers(f)
    if lhs == rhs:
        reason = None if special else f"stabilizers are not special (columns {list(sub)}) yet the series agree"
        return CheckRecord(name, "pass", reason=reason, checked=precision + 1)
    witness = {"lhs": render_series(lhs), "rhs": render_series(rhs)}
    gap = next(
        (w for w in sorted(points_up_to_grade(sigma.sigma, q, precision, backend), key=lambda w: (dot(w, q), w))
         if sep_pi(f, sigma, w, backend) == 0),
        None,
    )
    if gap is not None:
        witness = {"w": _w_json(gap), **witness}
    if special:
        return CheckRecord(name, "fail", reason="series differ although stabilizers are special",
                           witness=witness, checked=precision + 1)
    witness["stabilizer_witness"] = list(sub)
    return CheckRecord(name, "fail", reason="gap: stabilizers are not special", witness=witness,
                       checked=precision + 1)
