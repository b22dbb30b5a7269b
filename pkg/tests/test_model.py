import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cevgreeks import ModelParams, ParamOutOfRange, constant_C, constant_xi, eps_zero, validate_params
from cevgreeks.approx import regularized_drift_slope
from helpers import HAND


valid_params = st.builds(
    ModelParams,
    x=st.floats(1.0, 500.0),
    nu0=st.floats(0.005, 0.5),
    r=st.floats(-0.05, 0.1),
    kappa=st.floats(0.1, 5.0),
    mu=st.floats(0.005, 0.5),
    theta=st.floats(0.05, 1.5),
    gamma=st.floats(0.55, 0.95),
    rho=st.floats(-0.95, 0.95),
    T=st.floats(0.1, 5.0),
)


def test_valid_params_returned_unchanged(params):
    assert validate_params(params) is params


@pytest.mark.parametrize(
    "field, value",
    [("gamma", 0.5), ("gamma", 1.0), ("rho", 1.0), ("rho", -1.0), ("kappa", 0.0), ("theta", -0.1), ("x", 0.0), ("T", 0.0), ("nu0", -1.0), ("mu", 0.0)],
)
def test_out_of_range(params, field, value):
    with pytest.raises(ParamOutOfRange) as info:
        validate_params(params.replace(**{field: value}))
    assert info.value.field == field


def _mp_C(p):
    mp.mp.dps = 40
    k, m, th, g = (mp.mpf(repr(v)) for v in (p.kappa, p.mu, p.theta, p.gamma))
    return -((2 * k * m / (th**2 * (1 - g))) ** (-g / (2 * g - 1))) * (1 - g) / (k * m * (2 * g - 1))


def _mp_xi(p):
    mp.mp.dps = 40
    k, m, th, g = (mp.mpf(repr(v)) for v in (p.kappa, p.mu, p.theta, p.gamma))
    return (k * m / (th**2 * (1 - g) ** 2)) ** (-1 / (2 * g - 1)) * (k * m * g * (2 * g - 1) / (2 * (1 - g) ** 2))


def test_constant_C_reference_value():
    # mpmath, 40 digits: -8.6316745750310977...
    assert constant_C(HAND) == pytest.approx(-8.631674575031098, rel=1e-13)


def test_constant_xi_reference_value():
    # mpmath, 40 digits: 0.018310546875 exactly
    assert constant_xi(HAND) == pytest.approx(0.018310546875, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(valid_params)
def test_constants_match_high_precision(p):
    assert constant_C(p) == pytest.approx(float(_mp_C(p)), rel=1e-11)
    assert constant_xi(p) == pytest.approx(float(_mp_xi(p)), rel=1e-11)
    assert constant_C(p) < 0
    assert constant_xi(p) > 0


def test_C_depends_on_kappa_mu_only_through_product():
    c = 3.7
    moved = HAND.replace(kappa=HAND.kappa / c, mu=HAND.mu * c)
    assert constant_C(moved) == pytest.approx(constant_C(HAND), rel=1e-13)
    assert float(_mp_C(moved)) == pytest.approx(float(_mp_C(HAND)), rel=1e-13)


def test_constants_bit_identical_on_repeat(params):
    assert constant_C(params) == constant_C(params)
    assert constant_xi(params) == constant_xi(params)


def test_xi_bounds_grid_maximum_of_drift_slope():
    p = HAND
    g = p.gamma
    a, b = p.kappa * p.mu, 0.5 * g * p.theta**2
    x = np.linspace(1e-3, 10.0, 2_000_001)
    slope = -a * g / (1 - g) * x ** (-1 / (1 - g)) + b / x**2
    assert slope.max() <= constant_xi(p) + 1e-12
    # the bound is attained, not merely an upper estimate
    assert slope.max() == pytest.approx(constant_xi(p), rel=1e-6)


def test_eps_zero_makes_linear_branch_slope_vanish(params):
    e0 = eps_zero(params)
    g = params.gamma
    lhs = 0.5 * g * params.theta**2 * e0 ** (-(2 * g - 1) / (1 - g))
    rhs = params.kappa * params.mu * g / (1 - g)
    assert lhs == pytest.approx(rhs, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(valid_params, st.floats(0.01, 0.99))
def test_regularized_slope_below_xi(p, frac):
    eps = frac * eps_zero(p)
    x = np.concatenate([np.linspace(-1.0, eps, 200), np.geomspace(eps, 100.0, 2000)])
    slope = regularized_drift_slope(p, eps, x)
    xi = constant_xi(p)
    assert np.all(slope <= xi + 1e-9 * max(1.0, abs(xi)))
