import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fantastack.motive import (
    MotivicClass,
    RationalMotive,
    TruncatedSeries,
    combine,
    dimension,
    parse_class,
    parse_series,
    render_class,
    render_rational,
    render_series,
    render_uv,
    specialize_E,
    truncate_rational,
)

L = MotivicClass.L


def classes(integral=False):
    m = st.just(1) if integral else st.integers(1, 4)
    return st.builds(
        lambda cs, m: MotivicClass(cs, m),
        st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=4),
        m,
    )


def test_combine_examples():
    assert combine(L() - 1, L() + 1, "mul") == L(2) - 1
    assert combine(MotivicClass.z(-2, 3), MotivicClass.z(-2, 3), "add") == MotivicClass.z(-2, 3, 2)
    assert render_class((L() - 1) ** 2) == "L^2 - 2*L + 1"
    with pytest.raises(ValueError):
        combine(L(), L(), "div")


def test_dimension_examples():
    assert dimension((L() - 1) ** 2 * L(-2)) == 0
    assert dimension(MotivicClass.z(-3, 2)) == Fraction(-3, 2)
    assert dimension(MotivicClass()) == -math.inf


def test_normalization():
    a = MotivicClass({-4: 1, 2: 3}, 2)
    assert a.m == 1 and a == L(-2) + L(1, 3)
    assert MotivicClass({3: 0}, 5).is_zero()
    with pytest.raises(AttributeError):
        a.m = 3


def test_specialize_E():
    assert render_uv(specialize_E(L(2) - 1)) == "(uv)^2 - 1"
    assert specialize_E(1 + L(-1)) == {(0, 0): 1, (-1, -1): 1}
    with pytest.raises(ValueError, match="not integral"):
        specialize_E(MotivicClass.z(1, 2))


@settings(max_examples=100, deadline=None)
@given(classes(), classes(), classes())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == MotivicClass()


@settings(max_examples=100, deadline=None)
@given(classes(), classes())
def test_dimension_subadditive(a, b):
    if a.is_zero() or b.is_zero():
        assert dimension(a * b) == -math.inf
        return
    assert dimension(a * b) <= dimension(a) + dimension(b)
    lead_a, lead_b = a.terms()[0][1], b.terms()[0][1]
    if lead_a > 0 and lead_b > 0:
        assert dimension(a * b) == dimension(a) + dimension(b)


@settings(max_examples=100, deadline=None)
@given(classes(integral=True), classes(integral=True))
def test_specialize_is_ring_map(a, b):
    def mul(p, r):
        out = {}
        for (i, _), x in p.items():
            for (j, _), y in r.items():
                out[(i + j, i + j)] = out.get((i + j, i + j), 0) + x * y
        return {k: v for k, v in out.items() if v}

    def add(p, r):
        out = dict(p)
        for k, v in r.items():
            out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    assert specialize_E(a * b) == mul(specialize_E(a), specialize_E(b))
    assert specialize_E(a + b) == add(specialize_E(a), specialize_E(b))


def test_truncate_rational_examples():
    assert truncate_rational(RationalMotive({0: 1, 1: 1}, [1, 1]), 3).coefficient_list() == [1, 3, 5, 7]
    assert truncate_rational(RationalMotive({0: 1}, [1]), 2).coefficient_list() == [1, 1, 1]
    r = RationalMotive({0: 1, 2: 1, 4: 1}, [3, 3], 3)
    assert truncate_rational(r, 4).coefficient_list() == [1, 0, 1, 2, 1]


@settings(max_examples=100, deadline=None)
@given(
    st.dictionaries(st.integers(0, 6), st.integers(-4, 4), max_size=4),
    st.lists(st.integers(1, 4), max_size=3),
    st.integers(0, 15),
)
def test_truncate_rational_recovers_numerator(num, den, p):
    r = RationalMotive(num, den)
    s = truncate_rational(r, p)
    back = s
    for a in den:
        back = back * TruncatedSeries({0: 1, a: -1}, 1, p)
    limit = p - max(den, default=0)
    for k in range(limit + 1):
        assert back[k] == num.get(k, 0)


def test_rational_simplify_and_render():
    r = RationalMotive({0: 1, 1: 1}, [1, 1]) * RationalMotive({0: 1, 2: 1, 1: -2}, [])
    assert r.simplify() == RationalMotive({0: 1, 1: 1})
    assert r.simplify().denominator_factors == ()
    assert render_rational(RationalMotive({0: 1, 1: 1}, [1, 1])) == "(1 + t) / ((1 - t)^2)  [t = L^-1]"
    assert RationalMotive({0: 1}, [1]) + RationalMotive({0: -1}, [1]) == RationalMotive({})


def test_series_arithmetic_and_precision():
    a = TruncatedSeries({0: 1, 1: 1}, 1, 5)
    b = TruncatedSeries({0: 1, 2: 1}, 2, 7)
    s = a + b
    assert s.m == 2 and s.precision == 7
    assert (a * b).precision == 7
    assert s.agrees_with(TruncatedSeries({0: 2, 2: 2}, 2, 3))
    with pytest.raises(IndexError):
        a[6]
    assert render_series(a) == "1 + L^-1 + O(L^-6)"
    assert render_series(TruncatedSeries({}, 3, 12)) == "O(L^(-13/3))"


def test_series_times_class():
    s = TruncatedSeries({0: 1, 1: 1, 2: 1, 3: 1}, 1, 3)
    assert (s * (1 - L(-1))).coefficient_list() == [1, 0, 0, 0]


def test_render_parse_examples():
    assert render_class(1 + L(-1)) == "1 + L^-1"
    assert render_class(L(Fraction(2, 3))) == "L^(2/3)"
    assert parse_class("L^2 - 2*L + 1") == (L() - 1) ** 2
    assert parse_class("0") == MotivicClass()
    assert parse_series("1 + L^(-2/3) + L^(-4/3) + O(L^(-13/3))") == TruncatedSeries({0: 1, 2: 1, 4: 1}, 3, 12)


@settings(max_examples=150, deadline=None)
@given(classes())
def test_class_round_trip(a):
    assert parse_class(render_class(a)) == a


@settings(max_examples=150, deadline=None)
@given(
    st.dictionaries(st.integers(0, 12), st.integers(-5, 5) | st.fractions(max_denominator=4), max_size=5),
    st.integers(1, 4),
    st.integers(0, 12),
)
def test_series_round_trip(coeffs, m, p):
    s = TruncatedSeries(coeffs, m, p)
    assert parse_series(render_series(s), m) == s
