# The closed-form Malliavin derivative integrated over [t_r, T] should match the
# response of sigma_T to a small Cameron-Martin shift of the Brownian increments.
import numpy as np

from cevgreeks import DEFAULT_PARAMS, SeedSpec, TimeGrid, d_sigma, generate_noise, simulate_paths
from cevgreeks.malliavin import integrated_terminal_derivative
from cevgreeks.oracles import bump_directional_derivatives

p = DEFAULT_PARAMS
grid = TimeGrid(1.0, 2048)
seed = SeedSpec(master_seed=3, path_index=0)
noise = generate_noise(seed, grid, p.rho)
paths = simulate_paths(p, grid, noise)

# D_r sigma_t starts at (1 - gamma) theta and decays
ds = d_sigma(paths, p, grid, r_index=512)
print("D_r sigma at r, r + 100 steps, T:", ds[512], ds[612], ds[-1])

r_indices = [0, 512, 1024, 1800]
for quantity, brownian in [("sigma_T", "W"), ("S_T", "W"), ("X_T", "W_hat")]:
    bumps = bump_directional_derivatives(p, grid, seed, brownian, r_indices, 1e-5, quantity)
    sums = np.array([integrated_terminal_derivative(paths, p, grid, noise, quantity, brownian, r) for r in r_indices])
    print(f"{quantity}/{brownian}: relative gaps", np.round(np.abs(sums - bumps) / np.abs(bumps), 6))
