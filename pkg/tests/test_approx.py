import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cevgreeks import ApproxConfig, lipschitz_certificate, phi, phi_eps_price, phi_prime, psi, psi_prime
from cevgreeks.approx import phi_eps_price_prime, regularized_drift
from helpers import HAND



def test_phi_upper_branch():
    assert phi(ApproxConfig(0.1, 2 / 3), 0.5) == pytest.approx(4.0, rel=1e-14)


def test_phi_linear_branch():
    # -2 * 0.1^-3 * 0.05 + 3 * 0.1^-2
    assert phi(ApproxConfig(0.1, 2 / 3), 0.05) == pytest.approx(200.0, rel=1e-12)


def test_psi_branches():
    cfg = ApproxConfig(0.1, 0.75)
    assert psi(cfg, 0.2) == pytest.approx(5.0, rel=1e-15)
    assert psi(cfg, 0.05) == pytest.approx(15.0, rel=1e-14)


def test_eps_must_be_positive():
    with pytest.raises(ValueError):
        ApproxConfig(0.0, 0.75)


def test_knot_uses_upper_branch():
    cfg = ApproxConfig(0.1, 0.75)
    assert phi(cfg, 0.1) == 0.1 ** (-3.0)
    assert psi(cfg, 0.1) == 1.0 / 0.1


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 2.0), st.floats(0.55, 0.95))
def test_continuous_and_c1_at_knot(eps, g):
    cfg = ApproxConfig(eps, g)
    below = np.nextafter(eps, 0.0)
    target = eps ** (-g / (1 - g))
    assert phi(cfg, below) == pytest.approx(target, rel=1e-9)
    assert phi(cfg, eps) == pytest.approx(target, rel=1e-12)
    assert psi(cfg, below) == pytest.approx(1.0 / eps, rel=1e-9)
    assert phi_prime(cfg, below) == pytest.approx(phi_prime(cfg, eps), rel=1e-9)
    assert psi_prime(cfg, below) == pytest.approx(psi_prime(cfg, eps), rel=1e-9)


@pytest.mark.parametrize("eps, g", [(0.1, 0.75), (0.05, 2 / 3), (0.3, 0.9)])
def test_derivatives_match_central_differences(eps, g):
    cfg = ApproxConfig(eps, g)
    x = np.concatenate([np.linspace(-1.0, 0.9 * eps, 50), np.geomspace(1.1 * eps, 10.0, 50)])
    h = 1e-7 * np.maximum(1.0, np.abs(x))
    for f, df in ((phi, phi_prime), (psi, psi_prime)):
        num = (f(cfg, x + h) - f(cfg, x - h)) / (2 * h)
        np.testing.assert_allclose(df(cfg, x), num, rtol=1e-5, atol=1e-6)


@pytest.mark.parametrize("eps, g", [(0.1, 0.75), (0.01, 0.6), (0.5, 0.9)])
def test_domination_and_derivative_bounds(eps, g):
    cfg = ApproxConfig(eps, g)
    x = np.geomspace(1e-6, 1e3, 20001)
    assert np.all(phi(cfg, x) <= x ** (-g / (1 - g)) * (1 + 1e-13))
    assert np.all(psi(cfg, x) <= (1 / x) * (1 + 1e-13))
    xs = np.concatenate([-x[::-1], x])
    assert np.all(np.abs(phi_prime(cfg, xs)) <= g / (1 - g) * eps ** (-1 / (1 - g)) * (1 + 1e-13))
    assert np.all(np.abs(psi_prime(cfg, xs)) <= eps**-2 * (1 + 1e-13))


def test_lipschitz_reference_value():
    # 0.04 * 3 * 0.1^-4 + 0.75 * 0.25 / 0.02 + 1
    assert lipschitz_certificate(ApproxConfig(0.1, 0.75), HAND) == pytest.approx(1210.375, rel=1e-14)


def test_lipschitz_decreases_to_kappa():
    eps = np.geomspace(1e-2, 1e4, 60)
    L = np.array([lipschitz_certificate(ApproxConfig(e, HAND.gamma), HAND) for e in eps])
    assert np.all(np.diff(L) < 0)
    assert np.all(L > HAND.kappa)
    assert L[-1] == pytest.approx(HAND.kappa, rel=1e-6)


@pytest.mark.parametrize("eps", [0.1, 0.3, 1.0])
def test_lipschitz_random_pairs(eps):
    rng = np.random.default_rng(7)
    x, y = rng.uniform(-5, 5, (2, 100_000))
    L = lipschitz_certificate(ApproxConfig(eps, HAND.gamma), HAND)
    gap = np.abs(regularized_drift(HAND, eps, x) - regularized_drift(HAND, eps, y))
    assert np.all(gap <= L * np.abs(x - y) * (1 + 1e-12) + 1e-12)


def test_phi_eps_price_values():
    cfg = ApproxConfig(0.5, 0.75)
    assert phi_eps_price(cfg, 1.0) == 1.0
    # mpmath: 1 - e^0.5 + 0.5
    assert phi_eps_price(cfg, 0.0) == pytest.approx(-0.14872127070012814685, rel=1e-14)


def test_phi_eps_price_rejects_eps_outside_unit_interval():
    with pytest.raises(ValueError):
        phi_eps_price(ApproxConfig(1.5, 0.75), 0.0)


@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
def test_phi_eps_price_continuous_bounded_increasing(eps):
    cfg = ApproxConfig(eps, 0.75)
    for knot in (eps, 1 / eps):
        assert abs(phi_eps_price(cfg, np.nextafter(knot, -np.inf)) - phi_eps_price(cfg, knot)) < 1e-12
    x = np.linspace(-10, 10 + 1 / eps, 100_001)
    y = phi_eps_price(cfg, x)
    assert np.all(np.diff(y) > 0)
    far = phi_eps_price(cfg, np.linspace(-1e3, 1e3, 10_001))
    assert np.all(np.diff(far) >= 0)
    assert far.max() <= 1 / eps + 1
    assert far.min() >= eps - np.exp(eps)


@pytest.mark.parametrize("eps", [0.1, 0.5])
def test_phi_eps_price_slope_jump_at_lower_knot(eps):
    # the printed lower branch meets the identity with slope e^eps, not 1
    cfg = ApproxConfig(eps, 0.75)
    left = phi_eps_price_prime(cfg, np.nextafter(eps, -np.inf))
    right = phi_eps_price_prime(cfg, eps)
    assert left - right == pytest.approx(np.expm1(eps), rel=1e-12)
    assert phi_eps_price_prime(cfg, np.nextafter(1 / eps, np.inf)) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.xfail(strict=True, reason="lower branch slope is e^eps at the knot, identity slope is 1")
def test_phi_eps_price_c1_at_lower_knot():
    cfg = ApproxConfig(0.5, 0.75)
    left = phi_eps_price_prime(cfg, np.nextafter(0.5, 0.0))
    assert abs(left - phi_eps_price_prime(cfg, 0.5)) < 1e-12
