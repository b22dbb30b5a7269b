# Simulate a few variance and asset paths and look at the pieces the engine keeps.
import io

import numpy as np

from cevgreeks import DEFAULT_PARAMS, TimeGrid, constant_C, generate_noise_batch, simulate_paths
from cevgreeks.paths import write_path_csv

p = DEFAULT_PARAMS
grid = TimeGrid(p.T, 252)

# noise for paths 0..9 of master seed 1; each row depends only on (seed, index)
noise = generate_noise_batch(1, range(10), grid, p.rho)
paths = simulate_paths(p, grid, noise, eps=0.05 * p.sigma0, with_ou=True)

print("sigma_0           ", p.sigma0)
print("terminal nu       ", np.round(paths.nu[:, -1], 5))
print("terminal S        ", np.round(paths.S[:, -1], 2))
print("floored entries   ", paths.clamp_count)

# the OU process u sits below the regularized path, which sits below sigma
gap_low = (paths.u - paths.sigma_eps).max()
gap_high = (paths.sigma_eps - paths.sigma).max()
print("max(u - sigma_eps)", gap_low)
print("max(sigma_eps - sigma)", gap_high)
print("OU drift constant C", constant_C(p))

# first path as CSV, header plus four rows
buf = io.StringIO()
write_path_csv(buf, paths, grid, row=0)
print("\n".join(buf.getvalue().splitlines()[:5]))
