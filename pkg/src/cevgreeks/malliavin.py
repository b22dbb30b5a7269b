"""Closed-form Malliavin derivatives evaluated along simulated paths.

D denotes differentiation with respect to W (the variance driver) and D_hat with
respect to W_hat, the Brownian motion independent of W with B = rho W + sqrt(1 - rho^2) W_hat.
Time integrals are left-endpoint Riemann sums and stochastic integrals left-point Ito
sums on the simulation grid, matching the Euler scheme that produced the path.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .paths import format_float


class DegeneratePath(ValueError):
    pass


@dataclass
class DerivativePath:
    r_index: int
    d_sigma: np.ndarray
    d_nu: np.ndarray
    d_X: np.ndarray
    d_S: np.ndarray
    d_hat_X: np.ndarray
    d_hat_S: np.ndarray


def _floored(values, floor):
    values = np.maximum(values, floor)
    if np.any(values <= 0):
        raise DegeneratePath("non-positive volatility after flooring")
    return values


def _exp_window(integrand, dt, r_index, n_points):
    """exp of the running left-point sum of ``integrand`` starting at ``r_index``; zeros before it.

    Returns the exponent array and a mask of the grid points at or after ``r_index``.
    """
    shape = integrand.shape[:-1] + (n_points,)
    exponent = np.zeros(shape)
    active = np.zeros(n_points, dtype=bool)
    if r_index < n_points:
        active[r_index:] = True
        exponent[..., r_index + 1 :] = np.cumsum(integrand[..., r_index:] * dt, axis=-1)
    return exponent, active


def sigma_log_integrand(p, sigma):
    """-kappa mu gamma / (1 - gamma) sigma^(-1/(1-gamma)) + gamma theta^2 / (2 sigma^2) - kappa."""
    g = p.gamma
    return (
        -p.kappa * p.mu * g / (1.0 - g) * sigma ** (-1.0 / (1.0 - g))
        + g * p.theta**2 / (2.0 * sigma**2)
        - p.kappa
    )


def d_sigma(paths, p, grid, r_index):
    """D_r sigma_t = (1 - g) theta exp{(1 - g) int_r^t (drift slope - kappa) ds} at every grid time."""
    g = p.gamma
    sigma = _floored(paths.sigma, paths.floor)
    exponent, active = _exp_window(sigma_log_integrand(p, sigma[..., :-1]), grid.dt, r_index, grid.n_steps + 1)
    return np.where(active, (1.0 - g) * p.theta * np.exp((1.0 - g) * exponent), 0.0)


def d_nu(paths, p, grid, r_index):
    """D_r nu_t = theta nu_t^g exp{(1 - g) int_r^t (...) ds}, written in terms of nu."""
    g = p.gamma
    nu = _floored(paths.nu, paths.floor ** (1.0 / (1.0 - g)))
    v = nu[..., :-1]
    integrand = -p.kappa * p.mu * g / ((1.0 - g) * v) + g * p.theta**2 / (2.0 * v ** (2.0 * (1.0 - g))) - p.kappa
    exponent, active = _exp_window(integrand, grid.dt, r_index, grid.n_steps + 1)
    return np.where(active, p.theta * nu**g * np.exp((1.0 - g) * exponent), 0.0)


def d_X(paths, p, grid, noise, u_index):
    """(D_u X_t, D_hat_u X_t) along the grid.

    D_u X_t = -1/2 int_u^t D_u nu_s ds + rho sqrt(nu_u) + 1/2 int_u^t nu_s^(-1/2) D_u nu_s dB_s
    D_hat_u X_t = sqrt(1 - rho^2) sqrt(nu_u)
    """
    n_points = grid.n_steps + 1
    nu = _floored(paths.nu, paths.floor ** (1.0 / (1.0 - p.gamma)))
    shape = nu.shape
    dx = np.zeros(shape)
    dhx = np.zeros(shape)
    if u_index >= n_points:
        return dx, dhx
    dnu = d_nu(paths, p, grid, u_index)
    dt = grid.dt
    root_u = np.sqrt(nu[..., u_index])
    terms = -0.5 * dnu[..., u_index:-1] * dt + 0.5 * dnu[..., u_index:-1] / np.sqrt(nu[..., u_index:-1]) * noise.dB[..., u_index:]
    dx[..., u_index] = p.rho * root_u
    dx[..., u_index + 1 :] = np.cumsum(terms, axis=-1) + (p.rho * root_u)[..., None]
    dhx[..., u_index:] = (np.sqrt(1.0 - p.rho**2) * root_u)[..., None]
    return dx, dhx


def d_S(paths, p, grid, noise, t_prime_index):
    """(D_t' S_t, D_hat_t' S_t) via the chain rule through S = exp(X)."""
    dx, dhx = d_X(paths, p, grid, noise, t_prime_index)
    return paths.S * dx, paths.S * dhx


def derivative_path(paths, p, grid, noise, r_index):
    dx, dhx = d_X(paths, p, grid, noise, r_index)
    return DerivativePath(
        r_index=r_index,
        d_sigma=d_sigma(paths, p, grid, r_index),
        d_nu=d_nu(paths, p, grid, r_index),
        d_X=dx,
        d_S=paths.S * dx,
        d_hat_X=dhx,
        d_hat_S=paths.S * dhx,
    )


QUANTITIES = ("sigma_T", "nu_T", "X_T", "S_T")
BROWNIANS = ("W", "W_hat")


def terminal_profile(paths, p, grid, noise, quantity, brownian):
    """D_s Q_T (or D_hat_s Q_T) for s = t_0 .. t_{n-1}, for a single path.

    Entry ``j`` equals the last grid value of the corresponding ``d_*`` sequence with
    differentiation index ``j``.
    """
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    if brownian not in BROWNIANS:
        raise ValueError(f"unknown brownian {brownian!r}")
    n = grid.n_steps
    g = p.gamma
    if brownian == "W_hat":
        if quantity in ("sigma_T", "nu_T"):
            return np.zeros(n)
        nu = _floored(paths.nu, paths.floor ** (1.0 / (1.0 - g)))
        dhx = np.sqrt(1.0 - p.rho**2) * np.sqrt(nu[:-1])
        return dhx if quantity == "X_T" else paths.S[-1] * dhx
    if quantity in ("sigma_T", "nu_T"):
        # reverse cumulative sum gives every window [t_j, T] in one pass
        sigma = _floored(paths.sigma, paths.floor)
        tail = np.cumsum((sigma_log_integrand(p, sigma[:-1]) * grid.dt)[::-1])[::-1]
        ds = (1.0 - g) * p.theta * np.exp((1.0 - g) * tail)
        if quantity == "sigma_T":
            return ds
        return paths.nu[-1] ** g / (1.0 - g) * ds
    out = np.empty(n)
    for j in range(n):
        out[j] = d_X(paths, p, grid, noise, j)[0][-1]
    return out if quantity == "X_T" else paths.S[-1] * out


def integrated_terminal_derivative(paths, p, grid, noise, quantity, brownian, r_index):
    """Riemann sum over s in [t_r, T] of D_s Q_T; the Cameron-Martin bump should reproduce it."""
    profile = terminal_profile(paths, p, grid, noise, quantity, brownian)
    return float(np.sum(profile[r_index:]) * grid.dt)


def write_derivative_csv(stream, deriv, grid):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k", "t", "d_sigma", "d_nu", "d_X", "d_hat_X", "d_S", "d_hat_S"])
    cols = (deriv.d_sigma, deriv.d_nu, deriv.d_X, deriv.d_hat_X, deriv.d_S, deriv.d_hat_S)
    for k, t in enumerate(grid.times):
        writer.writerow([k, format_float(t)] + [format_float(c[k]) for c in cols])
