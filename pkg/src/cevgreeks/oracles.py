"""Reference values that do not go through the Malliavin machinery.

* Black-Scholes in the vanishing vol-of-vol limit, where the variance follows the ODE
  dnu = kappa (mu - nu) dt and the asset is lognormal with the integrated variance.
* Cameron-Martin bumps of the discretized flow: shifting the increments of one Brownian
  motion by ``delta * dt`` from index ``r`` onwards and differencing a terminal quantity
  approximates int_{t_r}^T D_s Q_T ds.

The normal CDF is scipy's ``ndtr`` (Cephes, erfc-based, double precision accurate).
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .paths import NoiseGrid, generate_noise, simulate_paths


@dataclass(frozen=True)
class BsReference:
    price: float
    delta: float
    rho: float
    effective_variance: float


def norm_cdf(x):
    return ndtr(x)


def norm_pdf(x):
    return np.exp(-0.5 * np.square(x)) / np.sqrt(2.0 * np.pi)


def effective_variance(p):
    """int_0^T nu_t dt for the deterministic variance nu' = kappa (mu - nu)."""
    return p.mu * p.T + (p.nu0 - p.mu) * (-np.expm1(-p.kappa * p.T)) / p.kappa


def _d1_d2(p, K, total_var):
    sd = np.sqrt(total_var)
    d1 = (np.log(p.x / K) + p.r * p.T + 0.5 * total_var) / sd
    return d1, d1 - sd


def bs_limit_reference(p, K):
    """Black-Scholes call price, delta and rho with total variance ``effective_variance(p)``."""
    if not K > 0:
        raise ValueError(f"strike must be positive, got {K!r}")
    total_var = effective_variance(p)
    d1, d2 = _d1_d2(p, K, total_var)
    disc = np.exp(-p.r * p.T)
    return BsReference(
        price=float(p.x * ndtr(d1) - K * disc * ndtr(d2)),
        delta=float(ndtr(d1)),
        rho=float(K * p.T * disc * ndtr(d2)),
        effective_variance=float(total_var),
    )


def bs_limit_greeks(p, payoff):
    """(price, delta, rho) in the deterministic-variance limit for any supported payoff."""
    disc = np.exp(-p.r * p.T)
    K = payoff.strike
    if payoff.kind == "constant":
        return disc, 0.0, -p.T * disc
    if payoff.kind in ("call", "put") and K == 0:
        call = (p.x, 1.0, 0.0)
    else:
        ref = bs_limit_reference(p, K)
        call = (ref.price, ref.delta, ref.rho)
    if payoff.kind == "call":
        return call
    if payoff.kind == "put":
        return call[0] - p.x + K * disc, call[1] - 1.0, call[2] - K * p.T * disc
    if payoff.kind == "digital-call":
        total_var = effective_variance(p)
        sd = np.sqrt(total_var)
        _, d2 = _d1_d2(p, K, total_var)
        price = disc * ndtr(d2)
        delta = disc * norm_pdf(d2) / (p.x * sd)
        rho = -p.T * price + disc * norm_pdf(d2) * p.T / sd
        return float(price), float(delta), float(rho)
    raise ValueError(f"unsupported payoff kind {payoff.kind!r}")


def _terminal(paths, quantity):
    return {
        "sigma_T": paths.sigma[..., -1],
        "nu_T": paths.nu[..., -1],
        "X_T": paths.X[..., -1],
        "S_T": paths.S[..., -1],
    }[quantity]


def bump_directional_derivatives(p, grid, seed, which_brownian, r_indices, delta_bump, quantity="sigma_T", eps_num=None):
    """Central differences of a terminal quantity under Cameron-Martin shifts of one driver.

    For every ``r`` in ``r_indices`` the increments of ``which_brownian`` ("W" or "W_hat")
    from index ``r`` onwards are shifted by +/- ``delta_bump * dt``; all shifted copies are
    simulated together as one batch. ``quantity`` is one of sigma_T, nu_T, X_T, S_T.
    """
    if not delta_bump > 0:
        raise ValueError("delta_bump must be positive")
    if which_brownian not in ("W", "W_hat"):
        raise ValueError(f"unknown brownian {which_brownian!r}")
    r_indices = np.atleast_1d(np.asarray(r_indices, dtype=int))
    base = generate_noise(seed, grid, p.rho)
    shift = np.zeros((r_indices.size, grid.n_steps))
    for row, r in enumerate(r_indices):
        shift[row, r:] = delta_bump * grid.dt
    shift = np.concatenate([shift, -shift])
    dW = np.broadcast_to(base.dW, shift.shape)
    dW_hat = np.broadcast_to(base.dW_hat, shift.shape)
    if which_brownian == "W":
        dW = dW + shift
    else:
        dW_hat = dW_hat + shift
    noise = NoiseGrid.from_increments(dW, dW_hat, p.rho)
    terminal = _terminal(simulate_paths(p, grid, noise, eps_num=eps_num), quantity)
    up, down = terminal[: r_indices.size], terminal[r_indices.size :]
    return (up - down) / (2.0 * delta_bump)


def bump_directional_derivative(p, grid, seed, which_brownian, r_index, delta_bump, quantity="sigma_T", eps_num=None):
    """Single-index form of ``bump_directional_derivatives``; approximates int_{t_r}^T D_s Q_T ds."""
    return float(bump_directional_derivatives(p, grid, seed, which_brownian, [r_index], delta_bump, quantity, eps_num)[0])
