"""Model parameters for the CEV-type Heston model and the closed-form drift constants."""

from dataclasses import dataclass, fields

import numpy as np


class ParamOutOfRange(ValueError):
    """Raised when a model parameter falls outside its admissible interval."""

    def __init__(self, field, value, interval):
        self.field = field
        self.value = value
        self.interval = interval
        super().__init__(f"{field}={value!r} outside admissible interval {interval}")


@dataclass(frozen=True)
class ModelParams:
    """Market and model constants.

    Variance follows dnu = kappa (mu - nu) dt + theta nu^gamma dW and the asset
    dS = S (r dt + sqrt(nu) dB) with d<B, W> = rho dt, S_0 = x, nu_0 = nu0.
    """

    x: float
    nu0: float
    r: float
    kappa: float
    mu: float
    theta: float
    gamma: float
    rho: float
    T: float

    @property
    def sigma0(self):
        """Initial value of the transformed volatility nu0^(1 - gamma)."""
        return self.nu0 ** (1.0 - self.gamma)

    def replace(self, **changes):
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class DriftBounds:
    C: float
    xi: float


# Desk-scale parameter set used as the default throughout.
DEFAULT_PARAMS = ModelParams(
    x=100.0, nu0=0.04, r=0.02, kappa=1.5, mu=0.04, theta=0.3, gamma=0.75, rho=-0.5, T=1.0
)

_POSITIVE = ("x", "nu0", "kappa", "mu", "theta", "T")


def validate_params(p):
    """Return ``p`` unchanged if every standing assumption holds, else raise ParamOutOfRange."""
    for name in _POSITIVE:
        value = getattr(p, name)
        if not (np.isfinite(value) and value > 0):
            raise ParamOutOfRange(name, value, "(0, inf)")
    if not np.isfinite(p.r):
        raise ParamOutOfRange("r", p.r, "(-inf, inf)")
    if not 0.5 < p.gamma < 1.0:
        raise ParamOutOfRange("gamma", p.gamma, "(0.5, 1)")
    if not -1.0 < p.rho < 1.0:
        raise ParamOutOfRange("rho", p.rho, "(-1, 1)")
    return p


def constant_C(p):
    """Drift level of the Ornstein-Uhlenbeck process that bounds sigma from below."""
    validate_params(p)
    g = p.gamma
    km = p.kappa * p.mu
    base = 2.0 * km / (p.theta**2 * (1.0 - g))
    return -(base ** (-g / (2.0 * g - 1.0))) * (1.0 - g) / (km * (2.0 * g - 1.0))


def constant_xi(p):
    """Upper bound on the derivative of kappa*mu*x^(-g/(1-g)) - (g theta^2 / 2) / x over x > 0."""
    validate_params(p)
    g = p.gamma
    km = p.kappa * p.mu
    base = km / (p.theta**2 * (1.0 - g) ** 2)
    return base ** (-1.0 / (2.0 * g - 1.0)) * (km * g * (2.0 * g - 1.0) / (2.0 * (1.0 - g) ** 2))


def eps_zero(p):
    """Threshold below which the regularized drift has a negative slope on its linear branch.

    For eps < eps_zero the drift-derivative bound ``xi`` holds on the whole real line.
    """
    validate_params(p)
    g = p.gamma
    return (p.theta**2 * (1.0 - g) / (2.0 * p.kappa * p.mu)) ** ((1.0 - g) / (2.0 * g - 1.0))


def drift_bounds(p):
    return DriftBounds(C=constant_C(p), xi=constant_xi(p))
