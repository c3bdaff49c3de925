import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sigma, stack, stack_and_sigma
from oracles import FIXTURES, brute_j_prime

from fantastack.cones import points_up_to_grade
from fantastack.jets import NotCrepantError, h_dim, j_prime, jet_fiber_data, stability_threshold, theta
from fantastack.motive import MotivicClass
from fantastack.stacky import StackyFanInput, build_fantastack

L = MotivicClass.L


def test_h_dim():
    assert h_dim(None, (0, 1, 1, 0)) == 2
    assert h_dim(None, (0, 0)) == 0
    assert h_dim(None, (3, 5)) == 8
    with pytest.raises(ValueError):
        h_dim(None, (1, -1))
    with pytest.raises(ValueError):
        h_dim(stack("A1"), (1, 1, 1))


def test_j_prime_examples():
    assert j_prime(sigma("A1"), (2, 2)) == 4
    assert j_prime(sigma("A1"), (1, 0)) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_j_prime_smooth(a, b):
    assert j_prime(sigma("SMOOTH2"), (a, b)) == a + b


@pytest.mark.parametrize("name", ["SMOOTH2", "A1", "CONIFOLD", "M3", "NONQG"])
def test_j_prime_matches_full_linear_system(name):
    s = sigma(name)
    q = FIXTURES[name][2][0] if FIXTURES[name][2] else (1, 1, 3)
    for w in points_up_to_grade(s.sigma, q, 3 * (FIXTURES[name][2] or (0, 1))[1] + 1)[:40]:
        assert j_prime(s, w) == brute_j_prime(s.hilbert_P, w)


def test_theta_examples():
    f, s = stack_and_sigma("A1")
    assert theta(f, s, (2, 2)) == L(2)
    assert theta(f, s, (1, 1)) == MotivicClass()
    g, t = stack_and_sigma("SMOOTH2")
    for w in [(0, 0), (3, 1), (2, 5)]:
        assert theta(g, t, w) == MotivicClass.constant(1)


def test_theta_requires_crepancy():
    f = build_fantastack(StackyFanInput(2, ((1, 0), (1, 2)), ((0, 1),), ((1, 0), (1, 2), (2, 2))))
    with pytest.raises(NotCrepantError):
        theta(f, f.affine(0), (2, 2))
    with pytest.raises(NotCrepantError):
        stability_threshold(f, f.affine(0), (2, 2))


def test_stability_threshold_examples():
    f, s = stack_and_sigma("A1")
    assert stability_threshold(f, s, (2, 2)) == 3
    assert stability_threshold(f, s, (1, 0)) == 3
    for name in ("SMOOTH2", "A1", "CONIFOLD", "M3", "A1FULL"):
        g, t = stack_and_sigma(name)
        assert stability_threshold(g, t, (0,) * g.d) == 0


def test_jet_fiber_data_bundle():
    f, s = stack_and_sigma("A1")
    data = jet_fiber_data(f, s, (2, 2))
    assert (data.j_prime, data.theta, data.threshold) == (4, L(2), 3)
