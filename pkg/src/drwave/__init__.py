"""Spherical Fourier analysis and dispersive propagators on Damek-Ricci
spaces: spherical functions by three cross-validating routes, the
c-function and Plancherel density, the radial transform pair with
Sobolev norms, Table-driven dispersive phases with their maximal
functions, dyadic oscillatory-sum checks, and the scaling experiments
that exhibit the 1/4 regularity threshold.
"""

from .dispersive import (
    PhaseKind,
    default_t_grid,
    littlewood_paley_split,
    maximal_function,
    phase,
    phase_derivs,
    propagate,
    verify_phase_asymptotics,
)
from .experiments import (
    ExperimentReport,
    case1_family,
    case1_run,
    case2_family,
    case2_run,
    implied_p_bound,
    transference_check,
)
from .oscillatory import (
    BumpWindow,
    dyadic_sum_check,
    sample_claim_triples,
    van_der_corput_check,
    window_integral,
)
from .profiles import RadialProfile, SpectralProfile
from .space import SpaceParams, density, log_density_derivative, new_space
from .special import (
    bessel_j,
    c_function,
    ln_gamma_complex,
    plancherel_density,
    script_j,
)
from .spherical import (
    gamma_coeffs,
    phi,
    phi_bessel,
    phi_hc,
    phi_matrix,
    phi_ode_oracle,
)
from .transform import (
    calibrate_inversion_constant,
    euclidean_correspondence,
    euclidean_correspondence_inverse,
    sft_forward,
    sft_inverse,
    sobolev_comparison_check,
    sobolev_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BumpWindow",
    "ExperimentReport",
    "PhaseKind",
    "RadialProfile",
    "SpaceParams",
    "SpectralProfile",
    "bessel_j",
    "c_function",
    "calibrate_inversion_constant",
    "case1_family",
    "case1_run",
    "case2_family",
    "case2_run",
    "default_t_grid",
    "density",
    "dyadic_sum_check",
    "euclidean_correspondence",
    "euclidean_correspondence_inverse",
    "gamma_coeffs",
    "implied_p_bound",
    "littlewood_paley_split",
    "ln_gamma_complex",
    "log_density_derivative",
    "maximal_function",
    "new_space",
    "phase",
    "phase_derivs",
    "phi",
    "phi_bessel",
    "phi_hc",
    "phi_matrix",
    "phi_ode_oracle",
    "plancherel_density",
    "propagate",
    "sample_claim_triples",
    "script_j",
    "sft_forward",
    "sft_inverse",
    "sobolev_comparison_check",
    "sobolev_norm",
    "transference_check",
    "van_der_corput_check",
    "verify_phase_asymptotics",
    "window_integral",
]
