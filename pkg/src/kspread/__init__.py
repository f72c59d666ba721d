"""Measurement statistics of the Krylov-chain spreading operator.

The pipeline runs lanczos -> spread_profile -> statistics: build the Krylov
basis of (H, psi0), evolve exactly through the spectral decomposition, and
read off moments, distributions, characteristic/generating functions, entropy
and echo of the chain position.  Closed forms for su(2)/su(1,1) Hamiltonians,
GUE ensemble averages with their continuum limit, and finite-time change
bounds complete the library; the `kspread` command exposes everything as
deterministic CSV/JSON (optionally with rendered figures).
"""

from .bounds import (
    BoundReport,
    entropy_change_bound,
    f_function,
    gsc_change_bound,
    modified_cost_bound,
    two_level_ratio,
    two_level_sc,
)
from .continuum import (
    ContinuumModel,
    averaged_gsc_numeric,
    c2_piecewise,
    chain_poly,
    j_kernel,
    p_kernel,
    sine_kernel,
)
from .lanczos import KrylovDecomposition, lanczos, spreading_operator
from .lie import (
    Su2Params,
    Su11Params,
    su2_amplitude,
    su2_c2,
    su2_echo,
    su2_generating,
    su2_hamiltonian,
    su2_lanczos,
    su2_pdf_halfspin,
    su2_probabilities,
    su2_sc,
    su2_variance,
    su11_amplitude,
    su11_c2,
    su11_cutoff,
    su11_generating,
    su11_hamiltonian,
    su11_lanczos,
    su11_probabilities,
    su11_sc,
    su11_transformed_coeffs,
    su11_variance,
)
from .linalg import (
    HermitianOperator,
    NumericalError,
    SpectralDecomposition,
    ValidationError,
    eigendecompose,
    evolve,
    evolve_grid,
    operator_norm,
)
from .rmt import (
    EnsembleReport,
    EnsembleSpec,
    ensemble_gsc,
    ensemble_lanczos_stats,
    sample_gue,
    semicircle_cdf,
    semicircle_density,
)
from .statistics import (
    SpreadDistribution,
    SpreadProfile,
    charfun,
    charfun_series,
    cost_in_basis,
    entropy_curve,
    fubini_speed_check,
    generating,
    generating_derivative,
    gsc,
    gsc_energy_basis,
    long_time_average,
    long_time_variance,
    pdf,
    spread_entropy,
    spread_profile,
    u_loschmidt,
    variance,
    variance_curve,
)
from .systems import System, SystemFormatError, load_system, parse_system

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ContinuumModel",
    "EnsembleReport",
    "EnsembleSpec",
    "HermitianOperator",
    "KrylovDecomposition",
    "NumericalError",
    "SpectralDecomposition",
    "SpreadDistribution",
    "SpreadProfile",
    "Su2Params",
    "Su11Params",
    "System",
    "SystemFormatError",
    "ValidationError",
    "averaged_gsc_numeric",
    "c2_piecewise",
    "chain_poly",
    "charfun",
    "charfun_series",
    "cost_in_basis",
    "eigendecompose",
    "ensemble_gsc",
    "ensemble_lanczos_stats",
    "entropy_change_bound",
    "entropy_curve",
    "evolve",
    "evolve_grid",
    "f_function",
    "fubini_speed_check",
    "generating",
    "generating_derivative",
    "gsc",
    "gsc_change_bound",
    "gsc_energy_basis",
    "j_kernel",
    "lanczos",
    "load_system",
    "long_time_average",
    "long_time_variance",
    "modified_cost_bound",
    "operator_norm",
    "p_kernel",
    "parse_system",
    "pdf",
    "sample_gue",
    "semicircle_cdf",
    "semicircle_density",
    "sine_kernel",
    "spread_entropy",
    "spread_profile",
    "spreading_operator",
    "su2_amplitude",
    "su2_c2",
    "su2_echo",
    "su2_generating",
    "su2_hamiltonian",
    "su2_lanczos",
    "su2_pdf_halfspin",
    "su2_probabilities",
    "su2_sc",
    "su2_variance",
    "su11_amplitude",
    "su11_c2",
    "su11_cutoff",
    "su11_generating",
    "su11_hamiltonian",
    "su11_lanczos",
    "su11_probabilities",
    "su11_sc",
    "su11_transformed_coeffs",
    "su11_variance",
    "two_level_ratio",
    "two_level_sc",
    "u_loschmidt",
    "variance",
    "variance_curve",
]
