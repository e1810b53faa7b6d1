"""Discrete Schur-constant multivariate equilibrium distribution models."""

from .core_dist import (
    DiscreteDistribution,
    Explicit,
    Geometric,
    MonotonicityReport,
    Poisson,
    check_n_monotone,
    forward_difference,
    truncate,
)
from .equilibrium import (
    CoefficientTriangle,
    EquilibriumChain,
    bivariate_eq_stats,
    coefficient_triangle,
    delta_inverse_coeffs,
    equilibrium_moment,
    nth_equilibrium,
    stationary_excess,
)
from .errors import (
    IntegrityError,
    NonConvergentError,
    SchurModelError,
    UnsupportedDimensionError,
    ZeroMeanError,
    ZeroVarianceError,
)
from .schur_model import (
    RhoMethod,
    RhoResult,
    SchurModel,
    build_model,
    correlation,
    joint_pmf,
    joint_survival,
    marginal_pmf,
    marginal_pmf_recursive,
    poisson_rho,
    poisson_rho_conjecture,
    sample,
    sum_pmf,
)

__version__ = "0.1.0"
