"""Sparse regression, screening and diagnostics for wide datasets.

The package groups four pieces that are usually wanted together when n is
small and d is large: folded-concave penalized least squares with several
solvers, marginal screening, diagnostics for spurious correlation and
endogeneity, and distance-preserving dimension reduction. A command-line
front end (`hdlab`) reproduces the canned experiments.
"""

from .data import (
    Dataset,
    LinearModelSpec,
    TwoClassGaussianSpec,
    gen_iid_gaussian,
    gen_linear,
    gen_spiked,
    gen_two_class,
    is_standardized,
    read_csv,
    sample_corr,
    standardize,
    write_csv,
)
from .diagnostics import (
    EndogeneityReport,
    OveridReport,
    SpuriousCorrelationReport,
    VarianceEstimate,
    endogeneity_diagnostic,
    greedy_spurious_support,
    ks_distance,
    max_multiple_corr,
    max_spurious_corr,
    overid_check,
    rcv_variance,
    residual_variance,
    spurious_experiment,
)
from .dimred import (
    DistortionReport,
    Projection,
    distortion,
    pairwise_distances,
    pca,
    random_projection,
    reconstruction_error,
    timing_trend,
)
from .errors import (
    ConfigurationError,
    DegenerateColumnError,
    InfeasibleError,
    NotStandardizedError,
    SelectionTooLargeError,
    SingularityError,
    SizeLimitError,
    SolverError,
    StepSizeError,
    UnboundedError,
    UndefinedCorrelationError,
    UndefinedMetricError,
    ValidationError,
)
from .penalties import (
    FAMILIES,
    PenaltySpec,
    parse_penalty,
    penalty_derivative,
    penalty_value,
    prox,
)
from .report import ExperimentReport
from .screening import (
    ScreeningResult,
    default_top_k,
    embed_coefficients,
    marginal_coefficients,
    sis_select,
)
from .solvers import (
    BEST_SUBSET_MAX_D,
    FitResult,
    HighConfidenceSetSpec,
    best_subset_l0,
    coord_descent_l1,
    coord_descent_weighted_l1,
    cross_validate,
    dantzig_selector,
    default_gamma_n,
    hcs_membership,
    ista,
    kkt_violation,
    l0_objective,
    largest_gram_eigenvalue,
    lla,
    ols_refit,
    penalized_objective,
)

__version__ = "0.1.0"

__all__ = [
    "BEST_SUBSET_MAX_D",
    "ConfigurationError",
    "Dataset",
    "DegenerateColumnError",
    "DistortionReport",
    "EndogeneityReport",
    "ExperimentReport",
    "FAMILIES",
    "FitResult",
    "HighConfidenceSetSpec",
    "InfeasibleError",
    "LinearModelSpec",
    "NotStandardizedError",
    "OveridReport",
    "PenaltySpec",
    "Projection",
    "ScreeningResult",
    "SelectionTooLargeError",
    "SingularityError",
    "SizeLimitError",
    "SolverError",
    "SpuriousCorrelationReport",
    "StepSizeError",
    "TwoClassGaussianSpec",
    "UnboundedError",
    "UndefinedCorrelationError",
    "UndefinedMetricError",
    "ValidationError",
    "VarianceEstimate",
    "best_subset_l0",
    "coord_descent_l1",
    "coord_descent_weighted_l1",
    "cross_validate",
    "dantzig_selector",
    "default_gamma_n",
    "default_top_k",
    "distortion",
    "embed_coefficients",
    "endogeneity_diagnostic",
    "gen_iid_gaussian",
    "gen_linear",
    "gen_spiked",
    "gen_two_class",
    "greedy_spurious_support",
    "hcs_membership",
    "is_standardized",
    "ista",
    "kkt_violation",
    "ks_distance",
    "l0_objective",
    "largest_gram_eigenvalue",
    "lla",
    "marginal_coefficients",
    "max_multiple_corr",
    "max_spurious_corr",
    "ols_refit",
    "overid_check",
    "pairwise_distances",
    "parse_penalty",
    "pca",
    "penalized_objective",
    "penalty_derivative",
    "penalty_value",
    "prox",
    "random_projection",
    "rcv_variance",
    "read_csv",
    "reconstruction_error",
    "residual_variance",
    "sample_corr",
    "sis_select",
    "spurious_experiment",
    "standardize",
    "timing_trend",
    "write_csv",
]
