"""Exact arithmetic with powers of the Lefschetz class and its roots.

Every class is stored against a root order ``m``: the integer exponent ``k``
stands for ``z**k`` with ``z = L**(1/m)``. Convergent sums are handled in the
variable ``t = z**-1``, where "dimension tends to minus infinity" turns into
"t-degree tends to infinity" and truncation is a prefix.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

Coeff = int | Fraction


def _clean(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _fmt_power(e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "L"
    if e.denominator == 1:
        return f"L^{e.numerator}"
    return f"L^({e.numerator}/{e.denominator})"


def _fmt_terms(terms: Iterable[tuple[Fraction, Coeff]]) -> str:
    parts = []
    for e, c in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        power = _fmt_power(e)
        if not power:
            body = str(mag)
        elif mag == 1:
            body = power
        else:
            body = f"{mag}*{power}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class MotivicClass:
    """A finite sum ``sum_k c_k z**k`` with ``z = L**(1/m)``.

    Instances are immutable and normalized: zero coefficients are dropped and
    ``m`` is the smallest root order able to express every exponent.
    """

    __slots__ = ("m", "_terms")

    def __init__(self, coeffs: Mapping[int, Coeff] | None = None, m: int = 1):
        if m < 1:
            raise ValueError("root order must be positive")
        items = {int(k): _clean(c) for k, c in (coeffs or {}).items() if c != 0}
        g = m
        for k in items:
            g = math.gcd(g, k)
        if g > 1:
            items = {k // g: c for k, c in items.items()}
            m //= g
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_terms", tuple(sorted(items.items(), reverse=True)))

    def __setattr__(self, name, value):
        raise AttributeError("MotivicClass is immutable")

    @classmethod
    def L(cls, power: int | Fraction = 1, coeff: Coeff = 1) -> MotivicClass:
        """``coeff * L**power``; fractional powers pick their own root order."""
        power = Fraction(power)
        return cls({power.numerator: coeff}, power.denominator)

    @classmethod
    def z(cls, k: int, m: int, coeff: Coeff = 1) -> MotivicClass:
        return cls({k: coeff}, m)

    @classmethod
    def constant(cls, c: Coeff) -> MotivicClass:
        return cls({0: c})

    @property
    def coeffs(self) -> dict[int, Coeff]:
        return dict(self._terms)

    def terms(self) -> list[tuple[Fraction, Coeff]]:
        """(L-exponent, coefficient) pairs in decreasing exponent order."""
        return [(Fraction(k, self.m), c) for k, c in self._terms]

    def is_zero(self) -> bool:
        return not self._terms

    def rescaled(self, m: int) -> dict[int, Coeff]:
        """Coefficient map against root order ``m`` (a multiple of ``self.m``)."""
        if m % self.m:
            raise ValueError(f"root order {m} is not a multiple of {self.m}")
        f = m // self.m
        return {k * f: c for k, c in self._terms}

    def _coerce(self, other) -> MotivicClass:
        if isinstance(other, MotivicClass):
            return other
        if isinstance(other, (int, Rational)):
            return MotivicClass.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = _lcm(self.m, other.m)
        acc = Counter(self.rescaled(m))
        for k, c in other.rescaled(m).items():
            acc[k] += c
        return MotivicClass(acc, m)

    __radd__ = __add__

    def __neg__(self):
        return MotivicClass({k: -c for k, c in self._terms}, self.m)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = _lcm(self.m, other.m)
        a, b = self.rescaled(m), other.rescaled(m)
        acc: Counter = Counter()
        for ka, ca in a.items():
            for kb, cb in b.items():
                acc[ka + kb] += ca * cb
        return MotivicClass(acc, m)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) == 1 and abs(self._terms[0][1]) == 1:
                k, c = self._terms[0]
                return MotivicClass({k * n: c**n}, self.m)
            raise ValueError("only monomials with unit coefficient are invertible")
        out = MotivicClass.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.m == other.m and self._terms == other._terms

    def __hash__(self):
        return hash((self.m, self._terms))

    def __repr__(self):
        return f"MotivicClass({render_class(self)!r})"

    def __str__(self):
        return render_class(self)

    def to_series(self, precision: int, m: int | None = None) -> TruncatedSeries:
        """View as a series in ``t = z**-1``; needs no positive z-exponents."""
        m = m or self.m
        coeffs = self.rescaled(m)
        if any(k > 0 for k in coeffs):
            raise ValueError(f"{self} has positive powers of L; not a series in L^-1")
        return TruncatedSeries({-k: c for k, c in coeffs.items()}, m, precision)


LEFSCHETZ = MotivicClass.L(1)


def combine(a: MotivicClass, b: MotivicClass, op: str) -> MotivicClass:
    """Ring operation ``op`` in {"add", "sub", "mul"} on two classes."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def dimension(a: MotivicClass) -> Fraction | float:
    """Top L-exponent of ``a``; ``-inf`` for the zero class."""
    if a.is_zero():
        return -math.inf
    k, _ = a._terms[0]
    return Fraction(k, a.m)


def specialize_E(a: MotivicClass) -> dict[tuple[int, int], Coeff]:
    """Substitute ``L -> uv``; keys are (u-exponent, v-exponent)."""
    out = {}
    for e, c in a.terms():
        if e.denominator != 1:
            raise ValueError(f"not integral: {render_class(a)} has the power {e} of L")
        out[(int(e), int(e))] = c
    return out


def render_uv(poly: Mapping[tuple[int, int], Coeff]) -> str:
    terms = sorted(poly.items(), reverse=True)
    parts = []
    for (i, _), c in terms:
        mon = "" if i == 0 else ("(uv)" if i == 1 else f"(uv)^{i}")
        mag = abs(c)
        body = str(mag) if not mon else (mon if mag == 1 else f"{mag}*{mon}")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def render_class(a: MotivicClass) -> str:
    return _fmt_terms(a.terms())


class TruncatedSeries:
    """``sum_k c_k t**k + O(t**(precision+1))`` with ``t = L**(-1/m)``.

    Coefficients of t-degree up to ``precision`` are exact; nothing is known
    beyond. Arithmetic keeps the smaller precision of its operands.
    """

    __slots__ = ("m", "precision", "_coeffs")

    def __init__(self, coeffs: Mapping[int, Coeff] | None, m: int, precision: int):
        if m < 1:
            raise ValueError("root order must be positive")
        if precision < 0:
            raise ValueError("precision must be nonnegative")
        items = {}
        for k, c in (coeffs or {}).items():
            if k < 0:
                raise ValueError("series exponents must be nonnegative")
            if k <= precision and c != 0:
                items[int(k)] = _clean(c)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "_coeffs", dict(sorted(items.items())))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @property
    def coeffs(self) -> dict[int, Coeff]:
        return dict(self._coeffs)

    def __getitem__(self, k: int) -> Coeff:
        if k > self.precision:
            raise IndexError(f"coefficient t^{k} lies beyond precision {self.precision}")
        return self._coeffs.get(k, 0)

    def coefficient_list(self) -> list[Coeff]:
        return [self._coeffs.get(k, 0) for k in range(self.precision + 1)]

    def rescale(self, m: int) -> TruncatedSeries:
        if m % self.m:
            raise ValueError(f"root order {m} is not a multiple of {self.m}")
        f = m // self.m
        return TruncatedSeries({k * f: c for k, c in self._coeffs.items()}, m, self.precision * f)

    def _align(self, other: TruncatedSeries):
        m = _lcm(self.m, other.m)
        a, b = self.rescale(m), other.rescale(m)
        return a, b, m, min(a.precision, b.precision)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        a, b, m, p = self._align(other)
        acc = Counter(a._coeffs)
        for k, c in b._coeffs.items():
            acc[k] += c
        return TruncatedSeries(acc, m, p)

    def __neg__(self):
        return TruncatedSeries({k: -c for k, c in self._coeffs.items()}, self.m, self.precision)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return TruncatedSeries({k: c * other for k, c in self._coeffs.items()}, self.m, self.precision)
        if isinstance(other, MotivicClass):
            other = other.to_series(self.precision * other.m, other.m)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        a, b, m, p = self._align(other)
        acc: Counter = Counter()
        for ka, ca in a._coeffs.items():
            for kb, cb in b._coeffs.items():
                if ka + kb <= p:
                    acc[ka + kb] += ca * cb
        return TruncatedSeries(acc, m, p)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        m = _lcm(self.m, other.m)
        a, b = self.rescale(m), other.rescale(m)
        return a.precision == b.precision and a._coeffs == b._coeffs

    def __hash__(self):
        return hash((self.m, self.precision, tuple(self._coeffs.items())))

    def agrees_with(self, other: TruncatedSeries) -> bool:
        """Equal up to the smaller of the two precisions."""
        a, b, _, p = self._align(other)
        trim = lambda s: {k: c for k, c in s._coeffs.items() if k <= p}
        return trim(a) == trim(b)

    def truncate(self, precision: int) -> TruncatedSeries:
        return TruncatedSeries(self._coeffs, self.m, min(precision, self.precision))

    def terms(self) -> list[tuple[Fraction, Coeff]]:
        return [(Fraction(-k, self.m), c) for k, c in self._coeffs.items()]

    def __repr__(self):
        return f"TruncatedSeries({render_series(self)!r})"

    def __str__(self):
        return render_series(self)


def render_series(s: TruncatedSeries) -> str:
    body = _fmt_terms(s.terms())
    marker = _fmt_power(Fraction(-(s.precision + 1), s.m)) or "1"
    if body == "0":
        return f"O({marker})"
    return f"{body} + O({marker})"


class RationalMotive:
    """``numerator(t) / prod_a (1 - t**a)`` with ``t = L**(-1/m)``.

    The numerator is a polynomial in ``t`` with nonnegative exponents; the
    denominator is the sorted multiset of exponents ``a``.
    """

    __slots__ = ("m", "numerator", "denominator_factors")

    def __init__(self, numerator: Mapping[int, Coeff], denominator_factors: Iterable[int] = (), m: int = 1):
        num = {int(k): _clean(c) for k, c in numerator.items() if c != 0}
        if any(k < 0 for k in num):
            raise ValueError("numerator exponents must be nonnegative")
        den = tuple(sorted(int(a) for a in denominator_factors))
        if any(a <= 0 for a in den):
            raise ValueError("denominator factors (1 - t^a) need a > 0")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "numerator", dict(sorted(num.items())))
        object.__setattr__(self, "denominator_factors", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMotive is immutable")

    @classmethod
    def from_class(cls, a: MotivicClass) -> RationalMotive:
        return cls({-k: c for k, c in a.rescaled(a.m).items()}, (), a.m)

    def rescale(self, m: int) -> RationalMotive:
        if m % self.m:
            raise ValueError(f"root order {m} is not a multiple of {self.m}")
        f = m // self.m
        return RationalMotive(
            {k * f: c for k, c in self.numerator.items()},
            [a * f for a in self.denominator_factors],
            m,
        )

    def __add__(self, other):
        if not isinstance(other, RationalMotive):
            return NotImplemented
        m = _lcm(self.m, other.m)
        a, b = self.rescale(m), other.rescale(m)
        ca, cb = Counter(a.denominator_factors), Counter(b.denominator_factors)
        common = ca | cb
        na = _poly_mul(a.numerator, _den_poly(common - ca))
        nb = _poly_mul(b.numerator, _den_poly(common - cb))
        acc = Counter(na)
        for k, c in nb.items():
            acc[k] += c
        return RationalMotive(acc, common.elements(), m)

    def __mul__(self, other):
        if isinstance(other, MotivicClass):
            other = RationalMotive.from_class(other)
        if not isinstance(other, RationalMotive):
            return NotImplemented
        m = _lcm(self.m, other.m)
        a, b = self.rescale(m), other.rescale(m)
        return RationalMotive(
            _poly_mul(a.numerator, b.numerator),
            a.denominator_factors + b.denominator_factors,
            m,
        )

    __rmul__ = __mul__

    def simplify(self) -> RationalMotive:
        """Cancel every denominator factor ``(1 - t**a)`` dividing the numerator."""
        num = dict(self.numerator)
        kept = []
        for a in self.denominator_factors:
            q = _divide_one_minus(num, a)
            if q is None:
                kept.append(a)
            else:
                num = q
        return RationalMotive(num, kept, self.m)

    def __eq__(self, other):
        if not isinstance(other, RationalMotive):
            return NotImplemented
        m = _lcm(self.m, other.m)
        a, b = self.rescale(m), other.rescale(m)
        ca, cb = Counter(a.denominator_factors), Counter(b.denominator_factors)
        common = ca | cb
        return _poly_mul(a.numerator, _den_poly(common - ca)) == _poly_mul(b.numerator, _den_poly(common - cb))

    __hash__ = None

    def __repr__(self):
        return f"RationalMotive({render_rational(self)!r})"

    def __str__(self):
        return render_rational(self)


def _poly_mul(a: Mapping[int, Coeff], b: Mapping[int, Coeff]) -> dict[int, Coeff]:
    acc: Counter = Counter()
    for ka, ca in a.items():
        for kb, cb in b.items():
            acc[ka + kb] += ca * cb
    return {k: c for k, c in sorted(acc.items()) if c != 0}


def _den_poly(factors: Counter) -> dict[int, int]:
    out = {0: 1}
    for a in factors.elements():
        out = _poly_mul(out, {0: 1, a: -1})
    return out


def _divide_one_minus(num: Mapping[int, Coeff], a: int) -> dict[int, Coeff] | None:
    """Exact quotient of ``num`` by ``1 - t**a``, or None if it does not divide."""
    if not num:
        return {}
    top = max(num)
    rem = dict(num)
    quot = {}
    # long division from the low end: q_k = r_k + q_{k-a}
    for k in range(0, top + 1):
        c = rem.get(k, 0) + quot.get(k - a, 0)
        if k > top - a:
            if c != 0:
                return None
            continue
        if c:
            quot[k] = c
    return quot


def truncate_rational(r: RationalMotive, precision: int) -> TruncatedSeries:
    """Expand ``r`` as a power series in ``t`` up to t-degree ``precision``."""
    c = [0] * (precision + 1)
    for k, v in r.numerator.items():
        if k <= precision:
            c[k] += v
    for a in r.denominator_factors:
        for k in range(a, precision + 1):
            c[k] += c[k - a]
    return TruncatedSeries(dict(enumerate(c)), r.m, precision)


def _fmt_tpoly(num: Mapping[int, Coeff]) -> str:
    parts = []
    for k, c in sorted(num.items()):
        mon = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        mag = abs(c)
        body = str(mag) if not mon else (mon if mag == 1 else f"{mag}*{mon}")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def render_rational(r: RationalMotive) -> str:
    """E.g. ``(1 + t) / ((1 - t)^2)  [t = L^-1]``."""
    num = _fmt_tpoly(r.numerator)
    t = _fmt_power(Fraction(-1, r.m))
    if not r.denominator_factors:
        return f"{num}  [t = {t}]"
    den = []
    for a, n in sorted(Counter(r.denominator_factors).items()):
        f = "(1 - t)" if a == 1 else f"(1 - t^{a})"
        den.append(f if n == 1 else f"{f}^{n}")
    return f"({num}) / ({'*'.join(den)})  [t = {t}]"


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?
        (?P<L>L(?:\^(?:(?P<int>-?\d+)|\((?P<frac>-?\d+(?:/\d+)?)\)))?)?
        \s*""",
    re.VERBOSE,
)


def _parse_terms(text: str) -> list[tuple[Fraction, Fraction]]:
    text = text.strip()
    if text == "0":
        return []
    pos = 0
    out = []
    while pos < len(text):
        mt = _TERM.match(text, pos)
        if not mt or mt.end() == pos or not (mt.group("coef") or mt.group("L")):
            raise ValueError(f"cannot parse motive near {text[pos:]!r}")
        if out and not mt.group("sign"):
            raise ValueError(f"missing operator near {text[pos:]!r}")
        coef = Fraction(mt.group("coef") or 1)
        if mt.group("sign") == "-":
            coef = -coef
        if not mt.group("L"):
            exp = Fraction(0)
        elif mt.group("int") is not None:
            exp = Fraction(int(mt.group("int")))
        elif mt.group("frac") is not None:
            exp = Fraction(mt.group("frac"))
        else:
            exp = Fraction(1)
        out.append((exp, coef))
        pos = mt.end()
    return out


def parse_class(text: str) -> MotivicClass:
    """Inverse of :func:`render_class`."""
    out = MotivicClass()
    for exp, coef in _parse_terms(text):
        out = out + MotivicClass.L(exp, _clean(coef))
    return out


def parse_series(text: str, m: int | None = None) -> TruncatedSeries:
    """Inverse of :func:`render_series`.

    The marker ``O(L^-4)`` alone cannot tell ``m = 1`` from ``m = 3`` with
    precision 11, so ``m`` may be passed; by default it is the smallest root
    order expressing every exponent including the marker.
    """
    mo = re.search(r"\+?\s*O\((?P<marker>[^)]*\)?)\)\s*$", text)
    if not mo:
        raise ValueError("series text lacks an O(...) precision marker")
    marker = mo.group("marker")
    head = text[: mo.start()].strip()
    (mexp, mcoef), = _parse_terms(marker) or [(Fraction(0), 1)]
    if mcoef != 1 or mexp >= 0:
        raise ValueError(f"bad precision marker O({marker})")
    terms = _parse_terms(head) if head else []
    need = mexp.denominator
    for e, _ in terms:
        need = _lcm(need, e.denominator)
    if m is None:
        m = need
    elif m % need:
        raise ValueError(f"root order {m} cannot express the exponents of {text!r}")
    coeffs = {}
    for e, c in terms:
        if e > 0:
            raise ValueError("series terms must have nonpositive L-exponents")
        coeffs[int(-e * m)] = _clean(c)
    return TruncatedSeries(coeffs, m, int(-mexp * m) - 1)
