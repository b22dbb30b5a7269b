"""Globally Lipschitz surrogates for the singular drift terms of the transformed volatility.

``phi`` and ``psi`` replace x^(-gamma/(1-gamma)) and 1/x below a threshold ``eps`` by
their tangent lines at ``eps``, so both are C^1 on the whole real line. The value at
``x == eps`` is taken from the upper branch.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ApproxConfig:
    eps: float
    gamma: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")


def _upper(x, eps):
    # keeps the unused branch of np.where finite
    return np.maximum(x, eps)


def phi(cfg, x):
    g = cfg.gamma
    eps = cfg.eps
    x = np.asarray(x, dtype=float)
    upper = _upper(x, eps) ** (-g / (1.0 - g))
    lower = -(g / (1.0 - g)) * eps ** (-1.0 / (1.0 - g)) * x + eps ** (-g / (1.0 - g)) / (1.0 - g)
    return np.where(x >= eps, upper, lower)


def phi_prime(cfg, x):
    g = cfg.gamma
    eps = cfg.eps
    x = np.asarray(x, dtype=float)
    upper = -(g / (1.0 - g)) * _upper(x, eps) ** (-1.0 / (1.0 - g))
    lower = np.full_like(x, -(g / (1.0 - g)) * eps ** (-1.0 / (1.0 - g)))
    return np.where(x >= eps, upper, lower)


def psi(cfg, x):
    eps = cfg.eps
    x = np.asarray(x, dtype=float)
    upper = 1.0 / _upper(x, eps)
    lower = -x / eps**2 + 2.0 / eps
    return np.where(x >= eps, upper, lower)


def psi_prime(cfg, x):
    eps = cfg.eps
    x = np.asarray(x, dtype=float)
    upper = -1.0 / _upper(x, eps) ** 2
    lower = np.full_like(x, -1.0 / eps**2)
    return np.where(x >= eps, upper, lower)


def phi_eps_price(cfg, x):
    """Three-branch cap used to regularize the log-price coefficients.

    Identity on [eps, 1/eps), exponential tails outside. Requires 0 < eps < 1.
    """
    eps = cfg.eps
    if not 0.0 < eps < 1.0:
        raise ValueError(f"phi_eps_price needs 0 < eps < 1, got {eps!r}")
    x = np.asarray(x, dtype=float)
    hi = 1.0 / eps
    low = np.exp(np.minimum(x, eps)) - np.exp(eps) + eps
    top = -np.exp(-np.maximum(x, hi) + hi) + hi + 1.0
    return np.where(x < eps, low, np.where(x < hi, x, top))


def phi_eps_price_prime(cfg, x):
    eps = cfg.eps
    x = np.asarray(x, dtype=float)
    hi = 1.0 / eps
    low = np.exp(np.minimum(x, eps))
    top = np.exp(-np.maximum(x, hi) + hi)
    return np.where(x < eps, low, np.where(x < hi, 1.0, top))


def regularized_drift(p, eps, x):
    """kappa*mu*Phi(x) - (gamma theta^2 / 2) Psi(x) - kappa x, without the (1 - gamma) factor."""
    cfg = ApproxConfig(eps=eps, gamma=p.gamma)
    b = 0.5 * p.gamma * p.theta**2
    return p.kappa * p.mu * phi(cfg, x) - b * psi(cfg, x) - p.kappa * np.asarray(x, dtype=float)


def regularized_drift_slope(p, eps, x):
    """kappa*mu*Phi'(x) - (gamma theta^2 / 2) Psi'(x); bounded above by xi when eps < eps_zero."""
    cfg = ApproxConfig(eps=eps, gamma=p.gamma)
    b = 0.5 * p.gamma * p.theta**2
    return p.kappa * p.mu * phi_prime(cfg, x) - b * psi_prime(cfg, x)


def lipschitz_certificate(cfg, p):
    """Lipschitz constant of ``regularized_drift`` as a function of x."""
    g = cfg.gamma
    eps = cfg.eps
    return (
        p.kappa * p.mu * g / (1.0 - g) * eps ** (-1.0 / (1.0 - g))
        + g * p.theta**2 / (2.0 * eps**2)
        + p.kappa
    )
