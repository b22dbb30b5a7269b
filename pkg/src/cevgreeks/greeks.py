"""Monte Carlo price, Delta and Rho: Malliavin-weight estimators and finite-difference baselines.

With I = int_0^T nu_t^(-1/2) dW_hat_t / sqrt(1 - rho^2) the per-path contributions are

    price  e^{-rT} f(S_T)
    delta  e^{-rT} f(S_T) I / (x T)
    rho    e^{-rT} f(S_T) (I - T)

so no derivative of the payoff is ever taken. The finite-difference estimators reprice
on the same increments (common random numbers) with x or r bumped.

Paths are processed in fixed-size batches. Per-path contributions are written into one
array in path-index order and reduced once at the end, so the thread count never changes
a result.
"""

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import validate_params
from .oracles import bs_limit_greeks
from .paths import generate_noise_batch, sigma_to_nu, simulate_asset_path, simulate_sigma_path, resolve_eps_num

BATCH_SIZE = 4096
PAYOFF_KINDS = ("call", "put", "digital-call", "constant")
GREEKS = ("price", "delta", "rho")
METHODS = ("mc", "malliavin", "fd-central", "analytic-oracle")


@dataclass(frozen=True)
class Payoff:
    kind: str
    strike: float = 0.0

    def __post_init__(self):
        if self.kind not in PAYOFF_KINDS:
            raise ValueError(f"unknown payoff kind {self.kind!r}; expected one of {PAYOFF_KINDS}")
        if not self.strike >= 0:
            raise ValueError(f"strike must be non-negative, got {self.strike!r}")

    def __call__(self, S):
        S = np.asarray(S, dtype=float)
        if self.kind == "call":
            return np.maximum(S - self.strike, 0.0)
        if self.kind == "put":
            return np.maximum(self.strike - S, 0.0)
        if self.kind == "digital-call":
            return (S >= self.strike).astype(float)
        return np.ones_like(S)


@dataclass(frozen=True)
class GreekEstimate:
    greek: str
    method: str
    estimate: float
    std_error: float
    n_paths: int
    n_steps: int
    master_seed: int
    wall_ms: int
    payoff: Payoff = None


@dataclass(frozen=True)
class Request:
    greek: str
    method: str
    payoff: Payoff


def resolve_threads(threads):
    if threads in (None, "auto"):
        return os.cpu_count() or 1
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def default_bumps(p):
    """Central-difference bump sizes: 1% of spot for Delta, 1e-4 absolute for Rho."""
    return 1e-2 * p.x, 1e-4


def _batch_contributions(p, grid, master_seed, start, count, requests, antithetic, eps_num, h_x, h_r):
    noise = generate_noise_batch(master_seed, range(start, start + count), grid, p.rho, antithetic=antithetic)
    sigma = simulate_sigma_path(p, grid, noise, eps_num)
    nu, _ = sigma_to_nu(p, sigma, eps_num)
    T = p.T
    disc = np.exp(-p.r * T)
    methods = {(q.greek, q.method) for q in requests}
    S_T = simulate_asset_path(p, grid, noise, nu)[1][..., -1]
    out = {}
    if any(m == "malliavin" for _, m in methods):
        weight = np.sum(noise.dW_hat / np.sqrt(nu[..., :-1]), axis=-1) / np.sqrt(1.0 - p.rho**2)
    if ("delta", "fd-central") in methods:
        S_up = simulate_asset_path(p, grid, noise, nu, x=p.x + h_x)[1][..., -1]
        S_dn = simulate_asset_path(p, grid, noise, nu, x=p.x - h_x)[1][..., -1]
    if ("rho", "fd-central") in methods:
        Sr_up = simulate_asset_path(p, grid, noise, nu, r=p.r + h_r)[1][..., -1]
        Sr_dn = simulate_asset_path(p, grid, noise, nu, r=p.r - h_r)[1][..., -1]
    for q in requests:
        f = q.payoff
        if q.method == "mc":
            val = disc * f(S_T)
        elif (q.greek, q.method) == ("delta", "malliavin"):
            val = disc * f(S_T) * weight / (p.x * T)
        elif (q.greek, q.method) == ("rho", "malliavin"):
            val = disc * f(S_T) * (weight - T)
        elif (q.greek, q.method) == ("delta", "fd-central"):
            val = (disc * f(S_up) - disc * f(S_dn)) / (2.0 * h_x)
        elif (q.greek, q.method) == ("rho", "fd-central"):
            val = (np.exp(-(p.r + h_r) * T) * f(Sr_up) - np.exp(-(p.r - h_r) * T) * f(Sr_dn)) / (2.0 * h_r)
        else:
            raise ValueError(f"unsupported request {q}")
        out[q] = val
    return out


def _summarize(values, antithetic):
    if antithetic:
        values = 0.5 * (values[0::2] + values[1::2])
    if np.all(values == values[0]):
        return float(values[0]), 0.0
    if values.size < 2:
        return float(values[0]), float("inf")
    return float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(values.size))


def estimate_many(
    p,
    requests,
    n_paths,
    grid,
    master_seed,
    threads=1,
    antithetic=False,
    eps_num=None,
    bump_h_x=None,
    bump_h_r=None,
):
    """Evaluate several (greek, method, payoff) requests on one shared set of paths.

    Returns a list of GreekEstimate in the order of ``requests``.
    """
    validate_params(p)
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if antithetic and n_paths % 2:
        raise ValueError("antithetic sampling needs an even number of paths")
    for q in requests:
        if q.greek not in GREEKS or q.method not in METHODS:
            raise ValueError(f"unsupported request {q}")
    eps_num = resolve_eps_num(p, eps_num)
    h_x, h_r = default_bumps(p)
    h_x = h_x if bump_h_x is None else bump_h_x
    h_r = h_r if bump_h_r is None else bump_h_r
    if not (h_x > 0 and h_r > 0):
        raise ValueError("finite-difference bumps must be positive")
    if h_x >= p.x:
        raise ValueError("bump_h_x must be smaller than the spot")

    t0 = time.perf_counter()
    results = {}
    simulated = [q for q in requests if q.method != "analytic-oracle"]
    if simulated:
        batches = [(s, min(BATCH_SIZE, n_paths - s)) for s in range(0, n_paths, BATCH_SIZE)]

        def work(batch):
            return _batch_contributions(p, grid, master_seed, *batch, simulated, antithetic, eps_num, h_x, h_r)

        workers = resolve_threads(threads)
        if workers == 1:
            parts = [work(b) for b in batches]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(work, batches))
        for q in simulated:
            results[q] = _summarize(np.concatenate([part[q] for part in parts]), antithetic)
    wall_ms = int(round(1000.0 * (time.perf_counter() - t0)))

    estimates = []
    for q in requests:
        if q.method == "analytic-oracle":
            value = bs_limit_greeks(p, q.payoff)[GREEKS.index(q.greek)]
            est, se, n = float(value), 0.0, 0
        else:
            (est, se), n = results[q], n_paths
        estimates.append(GreekEstimate(q.greek, q.method, est, se, n, grid.n_steps, master_seed, wall_ms, q.payoff))
    return estimates


def _single(greek, method, p, payoff, n_paths, grid, seed, **kwargs):
    return estimate_many(p, [Request(greek, method, payoff)], n_paths, grid, seed, **kwargs)[0]


def price(p, payoff, n_paths, grid, seed, **kwargs):
    """Discounted expected payoff E[e^{-rT} f(S_T)]."""
    return _single("price", "mc", p, payoff, n_paths, grid, seed, **kwargs)


def delta_malliavin(p, payoff, n_paths, grid, seed, **kwargs):
    return _single("delta", "malliavin", p, payoff, n_paths, grid, seed, **kwargs)


def rho_malliavin(p, payoff, n_paths, grid, seed, **kwargs):
    return _single("rho", "malliavin", p, payoff, n_paths, grid, seed, **kwargs)


def delta_fd(p, payoff, n_paths, grid, seed, bump_h=None, **kwargs):
    return _single("delta", "fd-central", p, payoff, n_paths, grid, seed, bump_h_x=bump_h, **kwargs)


def rho_fd(p, payoff, n_paths, grid, seed, bump_h=None, **kwargs):
    return _single("rho", "fd-central", p, payoff, n_paths, grid, seed, bump_h_r=bump_h, **kwargs)


def weight_moment_diagnostic(p, grid, seed, n_paths, q=2.5, eps_num=None):
    """Sample mean of int_0^T |1 / (x sqrt(1 - rho^2) sqrt(nu_t))|^q dt.

    Finite values for some q > 2 are what the Delta weight needs to be well defined.
    """
    validate_params(p)
    eps_num = resolve_eps_num(p, eps_num)
    total = []
    for start in range(0, n_paths, BATCH_SIZE):
        count = min(BATCH_SIZE, n_paths - start)
        noise = generate_noise_batch(seed, range(start, start + count), grid, p.rho)
        nu, _ = sigma_to_nu(p, simulate_sigma_path(p, grid, noise, eps_num), eps_num)
        integrand = np.abs(1.0 / (p.x * np.sqrt(1.0 - p.rho**2) * np.sqrt(nu[..., :-1]))) ** q
        total.append(np.sum(integrand, axis=-1) * grid.dt)
    return float(np.mean(np.concatenate(total)))
