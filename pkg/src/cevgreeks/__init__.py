"""Monte Carlo simulation and Malliavin-weight Greeks for the CEV-type Heston model."""

from .approx import ApproxConfig, lipschitz_certificate, phi, phi_eps_price, phi_prime, psi, psi_prime
from .greeks import (
    GreekEstimate,
    Payoff,
    Request,
    delta_fd,
    delta_malliavin,
    estimate_many,
    price,
    rho_fd,
    rho_malliavin,
)
from .malliavin import DegeneratePath, DerivativePath, d_nu, d_S, d_sigma, d_X, derivative_path
from .model import (
    DEFAULT_PARAMS,
    DriftBounds,
    ModelParams,
    ParamOutOfRange,
    constant_C,
    constant_xi,
    drift_bounds,
    eps_zero,
    validate_params,
)
from .oracles import BsReference, bs_limit_reference, bump_directional_derivative, effective_variance
from .paths import (
    NegativeVariance,
    NoiseGrid,
    PathSet,
    SeedSpec,
    TimeGrid,
    generate_noise,
    generate_noise_batch,
    simulate_asset_path,
    simulate_ou_bound,
    simulate_paths,
    simulate_sigma_eps_path,
    simulate_sigma_path,
)

__version__ = "0.1.0"
