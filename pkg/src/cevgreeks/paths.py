"""Reproducible noise generation and Euler simulation of (sigma, nu, X, S).

Every per-path random stream is drawn from a Philox4x64 counter-based generator keyed
by the master seed, with the path index in the third counter word. A path's increments
therefore depend only on ``(master_seed, path_index)``; batch layout and thread count
never enter. Uniforms are built from the top 53 bits of each raw word, shifted to the
open interval (0, 1), and mapped to Gaussians by the inverse normal CDF.

Arrays carry time on the last axis, so every routine accepts a single path (1-D) or a
batch of paths (2-D) alike.
"""

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtri

from .approx import regularized_drift
from .model import constant_C, eps_zero, validate_params

_U64_MAX = 2**64


class NegativeVariance(ValueError):
    pass


@dataclass(frozen=True)
class TimeGrid:
    T: float
    n_steps: int

    def __post_init__(self):
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError(f"n_steps must be a positive integer, got {self.n_steps!r}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T!r}")

    @property
    def dt(self):
        return self.T / self.n_steps

    @property
    def times(self):
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    path_index: int


@dataclass
class NoiseGrid:
    dW: np.ndarray
    dW_hat: np.ndarray
    dB: np.ndarray
    rho: float

    @classmethod
    def from_increments(cls, dW, dW_hat, rho):
        dW = np.asarray(dW, dtype=float)
        dW_hat = np.asarray(dW_hat, dtype=float)
        return cls(dW=dW, dW_hat=dW_hat, dB=correlate(dW, dW_hat, rho), rho=rho)


@dataclass
class PathSet:
    sigma: np.ndarray
    nu: np.ndarray
    X: np.ndarray
    S: np.ndarray
    sigma_eps: Optional[np.ndarray] = None
    u: Optional[np.ndarray] = None
    clamp_count: int = 0
    floor: float = 0.0


def correlate(dW, dW_hat, rho):
    """Increments of B = rho W + sqrt(1 - rho^2) W_hat."""
    return rho * dW + np.sqrt(1.0 - rho * rho) * dW_hat


def _check_seed(master_seed, path_index):
    if not 0 <= master_seed < _U64_MAX:
        raise ValueError(f"master_seed must be an unsigned 64-bit integer, got {master_seed!r}")
    if not 0 <= path_index < _U64_MAX:
        raise ValueError(f"path_index must be an unsigned 64-bit integer, got {path_index!r}")


def path_uniforms(master_seed, path_index, n):
    """``n`` uniforms in (0, 1) from the stream of one path."""
    _check_seed(master_seed, path_index)
    bits = np.random.Philox(key=master_seed, counter=np.array([0, 0, path_index, 0], dtype=np.uint64)).random_raw(n)
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def generate_noise(seed, grid, rho):
    """Brownian increments of one path: first ``n_steps`` normals drive W, the next drive W_hat."""
    return generate_noise_batch(seed.master_seed, [seed.path_index], grid, rho, squeeze=True)


def generate_noise_batch(master_seed, path_indices, grid, rho, antithetic=False, squeeze=False):
    """Increments for several paths, one row per entry of ``path_indices``.

    With ``antithetic`` set, path ``2j + 1`` reuses the stream of path ``2j`` with both
    increment sequences negated.
    """
    n = grid.n_steps
    path_indices = [int(i) for i in path_indices]
    z = np.empty((len(path_indices), 2 * n))
    for row, idx in enumerate(path_indices):
        source = idx // 2 if antithetic else idx
        z[row] = path_uniforms(master_seed, source, 2 * n)
    z = ndtri(z)
    if antithetic:
        odd = np.array([i % 2 == 1 for i in path_indices])
        z[odd] = -z[odd]
    z *= np.sqrt(grid.dt)
    if squeeze:
        z = z[0]
    return NoiseGrid.from_increments(z[..., :n], z[..., n:], rho)


def default_eps_num(p):
    """Numerical safeguard for the singular drift: 1e-3 sigma_0, kept below eps_zero."""
    return min(1e-3 * p.sigma0, 0.5 * eps_zero(p))


def resolve_eps_num(p, eps_num):
    if eps_num is None:
        return default_eps_num(p)
    limit = eps_zero(p)
    if not 0 < eps_num < limit:
        raise ValueError(f"eps_num must lie in (0, {limit!r}), got {eps_num!r}")
    return eps_num


def _euler_sigma(p, grid, dW, eps):
    g = p.gamma
    dt = grid.dt
    vol = (1.0 - g) * p.theta
    out = np.empty(dW.shape[:-1] + (grid.n_steps + 1,))
    out[..., 0] = p.sigma0
    for k in range(grid.n_steps):
        s = out[..., k]
        out[..., k + 1] = s + (1.0 - g) * regularized_drift(p, eps, s) * dt + vol * dW[..., k]
    return out


def simulate_sigma_path(p, grid, noise, eps_num=None):
    """Euler scheme for sigma = nu^(1 - gamma) with the singular drift guarded at ``eps_num``."""
    validate_params(p)
    return _euler_sigma(p, grid, noise.dW, resolve_eps_num(p, eps_num))


def simulate_sigma_eps_path(p, grid, noise, eps):
    """Same recursion as ``simulate_sigma_path`` with a user-chosen regularization level."""
    validate_params(p)
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    return _euler_sigma(p, grid, noise.dW, eps)


def simulate_ou_bound(p, grid, noise, u0=None):
    """Euler scheme for du = (1 - gamma)(C - kappa u) dt + theta (1 - gamma) dW."""
    validate_params(p)
    g = p.gamma
    dt = grid.dt
    C = constant_C(p)
    dW = noise.dW
    out = np.empty(dW.shape[:-1] + (grid.n_steps + 1,))
    out[..., 0] = p.sigma0 if u0 is None else u0
    for k in range(grid.n_steps):
        u = out[..., k]
        out[..., k + 1] = u + (1.0 - g) * (C - p.kappa * u) * dt + p.theta * (1.0 - g) * dW[..., k]
    return out


def sigma_to_nu(p, sigma, floor):
    """Map sigma to nu, flooring sigma at ``floor`` first. Returns (nu, number of floored entries)."""
    clamped = sigma < floor
    nu = np.maximum(sigma, floor) ** (1.0 / (1.0 - p.gamma))
    return nu, int(np.count_nonzero(clamped))


def simulate_asset_path(p, grid, noise, nu, x=None, r=None):
    """Log-price Euler scheme X_{k+1} = X_k + (r - nu_k / 2) dt + sqrt(nu_k) dB_k, X_0 = log x.

    ``x`` and ``r`` override the model values; the finite-difference estimators use this
    to reprice on the same variance path.
    """
    nu = np.asarray(nu, dtype=float)
    if np.any(nu < 0):
        raise NegativeVariance("variance path has negative entries; clamp before simulating")
    x = p.x if x is None else x
    r = p.r if r is None else r
    dt = grid.dt
    v = nu[..., :-1]
    steps = np.empty(nu.shape)
    steps[..., 0] = np.log(x)
    steps[..., 1:] = (r - 0.5 * v) * dt + np.sqrt(v) * noise.dB
    X = np.cumsum(steps, axis=-1)
    return X, np.exp(X)


def simulate_paths(p, grid, noise, eps_num=None, eps=None, with_ou=False):
    """Full trajectory set on one noise grid; ``eps`` adds the regularized path, ``with_ou`` the OU bound."""
    validate_params(p)
    floor = resolve_eps_num(p, eps_num)
    sigma = _euler_sigma(p, grid, noise.dW, floor)
    nu, clamps = sigma_to_nu(p, sigma, floor)
    X, S = simulate_asset_path(p, grid, noise, nu)
    return PathSet(
        sigma=sigma,
        nu=nu,
        X=X,
        S=S,
        sigma_eps=None if eps is None else simulate_sigma_eps_path(p, grid, noise, eps),
        u=simulate_ou_bound(p, grid, noise) if with_ou else None,
        clamp_count=clamps,
        floor=floor,
    )


def simulate_nu_full_truncation(p, grid, noise):
    """Cross-check scheme: Euler directly on nu with nu+ = max(nu, 0) inside both coefficients."""
    validate_params(p)
    dt = grid.dt
    dW = noise.dW
    out = np.empty(dW.shape[:-1] + (grid.n_steps + 1,))
    out[..., 0] = p.nu0
    for k in range(grid.n_steps):
        v = np.maximum(out[..., k], 0.0)
        out[..., k + 1] = out[..., k] + p.kappa * (p.mu - v) * dt + p.theta * v**p.gamma * dW[..., k]
    return out


def format_float(value):
    """Shortest round-trip decimal form of a double (at most 17 significant digits)."""
    return repr(float(value))


def write_path_csv(stream, paths, grid, row=None):
    """Write one path as ``k,t,sigma,nu,X,S[,sigma_eps,u]``; ``row`` selects it from a batch."""

    def pick(a):
        return None if a is None else (a if row is None else a[row])

    columns = [("sigma", pick(paths.sigma)), ("nu", pick(paths.nu)), ("X", pick(paths.X)), ("S", pick(paths.S))]
    for name, arr in (("sigma_eps", pick(paths.sigma_eps)), ("u", pick(paths.u))):
        if arr is not None:
            columns.append((name, arr))
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k", "t"] + [name for name, _ in columns])
    for k, t in enumerate(grid.times):
        writer.writerow([k, format_float(t)] + [format_float(arr[k]) for _, arr in columns])
