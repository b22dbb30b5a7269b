"""Batch studies behind the command-line runner: regularization convergence and derivative checks."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .greeks import BATCH_SIZE, resolve_threads
from .malliavin import BROWNIANS, QUANTITIES, terminal_profile
from .model import validate_params
from .oracles import bump_directional_derivatives
from .paths import (
    SeedSpec,
    generate_noise,
    generate_noise_batch,
    resolve_eps_num,
    simulate_ou_bound,
    simulate_paths,
    simulate_sigma_eps_path,
    simulate_sigma_path,
)


@dataclass(frozen=True)
class ApproxStudyRow:
    eps: float
    l2_error: float
    l2_std_error: float
    max_order_violation: float
    mean_order_violation: float
    n_paths: int
    n_steps: int


@dataclass(frozen=True)
class ApproxStudy:
    rows: list
    path_min: float


@dataclass(frozen=True)
class DerivativeCheckRow:
    path_index: int
    quantity: str
    brownian: str
    r_index: int
    riemann_value: float
    bump_value: float
    rel_error: float


def _map(fn, items, threads):
    workers = resolve_threads(threads)
    if workers == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def order_violation(u, sigma_eps, sigma):
    """Per-path maximum of how far u <= sigma_eps <= sigma is broken (0 when it holds)."""
    gap = np.maximum(u - sigma_eps, sigma_eps - sigma)
    return np.maximum(gap, 0.0).max(axis=-1)


def approx_study(p, grid, master_seed, n_paths, eps_list, eps_num=None, threads=1):
    """L2 distance E[(sigma^eps_T - sigma_T)^2] and sandwich violations for each eps, on shared noise."""
    validate_params(p)
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise ValueError("eps_list must not be empty")
    floor = resolve_eps_num(p, eps_num)
    batches = [(s, min(BATCH_SIZE, n_paths - s)) for s in range(0, n_paths, BATCH_SIZE)]

    def work(batch):
        start, count = batch
        noise = generate_noise_batch(master_seed, range(start, start + count), grid, p.rho)
        sigma = simulate_sigma_path(p, grid, noise, floor)
        u = simulate_ou_bound(p, grid, noise)
        sq, viol = [], []
        for eps in eps_list:
            se = simulate_sigma_eps_path(p, grid, noise, eps)
            sq.append((se[:, -1] - sigma[:, -1]) ** 2)
            viol.append(order_violation(u, se, sigma))
        return np.array(sq), np.array(viol), sigma.min()

    parts = _map(work, batches, threads)
    sq = np.concatenate([a for a, _, _ in parts], axis=1)
    viol = np.concatenate([b for _, b, _ in parts], axis=1)
    rows = []
    for i, eps in enumerate(eps_list):
        err = sq[i]
        se = float(np.std(err, ddof=1) / np.sqrt(err.size)) if err.size > 1 else 0.0
        rows.append(
            ApproxStudyRow(
                eps=eps,
                l2_error=float(np.mean(err)),
                l2_std_error=se,
                max_order_violation=float(viol[i].max()),
                mean_order_violation=float(viol[i].mean()),
                n_paths=n_paths,
                n_steps=grid.n_steps,
            )
        )
    return ApproxStudy(rows=rows, path_min=float(min(m for _, _, m in parts)))


def sample_r_indices(grid, count, master_seed):
    """``count`` distinct differentiation indices in [0, n_steps), sorted; fixed by the seed."""
    rng = np.random.default_rng(master_seed)
    count = min(count, grid.n_steps)
    return np.sort(rng.choice(grid.n_steps, size=count, replace=False))


def derivative_check(p, grid, master_seed, path_indices, checks, r_indices, delta_bump=1e-5, eps_num=None, threads=1):
    """Compare Riemann-integrated closed-form derivatives with Cameron-Martin bumps.

    ``checks`` is a sequence of (quantity, brownian) pairs. The relative error is
    |riemann - bump| / |bump|, or the absolute error when the bump value is zero.
    """
    validate_params(p)
    for quantity, brownian in checks:
        if quantity not in QUANTITIES or brownian not in BROWNIANS:
            raise ValueError(f"unsupported derivative check {quantity}/{brownian}")
    r_indices = [int(r) for r in r_indices]
    floor = resolve_eps_num(p, eps_num)

    def work(path_index):
        seed = SeedSpec(master_seed, int(path_index))
        noise = generate_noise(seed, grid, p.rho)
        paths = simulate_paths(p, grid, noise, eps_num=floor)
        rows = []
        for quantity, brownian in checks:
            bumps = bump_directional_derivatives(p, grid, seed, brownian, r_indices, delta_bump, quantity, floor)
            profile = terminal_profile(paths, p, grid, noise, quantity, brownian)
            for r, bump in zip(r_indices, bumps):
                riemann = float(np.sum(profile[r:]) * grid.dt)
                diff = abs(riemann - bump)
                rel = diff / abs(bump) if bump != 0 else diff
                rows.append(DerivativeCheckRow(int(path_index), quantity, brownian, r, riemann, float(bump), float(rel)))
        return rows

    return [row for rows in _map(work, list(path_indices), threads) for row in rows]
