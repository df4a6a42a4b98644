"""Hermite-series pricing of arithmetic Asian options under polynomial jump-diffusions."""

from .benchmarks import (
    ErrorBoundInputs,
    GaussianLaw,
    accuracy_gamma,
    error_constant,
    gaussian_call,
    ou_asian_law,
    scale_floor,
    std_normal,
)
from .correlators import (
    CompressedPropagator,
    CorrelatorEngine,
    CorrelatorQuery,
    correlator,
    correlator_tower_oracle,
)
from .generator import (
    GeneratorMatrix,
    LevyMoments,
    ModelSpec,
    NigParams,
    NumericalError,
    generator_matrix,
    levy_moments,
    matrix_exponential,
    moment,
    moment_vector,
)
from .hermite import (
    ChangeOfBasis,
    GhpBasis,
    PayoffExpansion,
    change_of_basis,
    ghp_eval,
    ghp_norm_sq,
    hermite_eval,
    payoff_coefficients,
    payoff_l2_error,
    payoff_series_eval,
)
from .kronecker import (
    DuplicatingMatrix,
    EliminatingMatrix,
    MthSelector,
    duplicating,
    eliminating,
    kron,
    kron_power_apply,
    mth_selectors,
    vec,
    vec_inverse,
    vecl,
)
from .montecarlo import McConfig, McEstimate, mc_price, simulate_paths
from .pricing import (
    MultiIndexTerm,
    PriceReport,
    PriceRequest,
    StoppingDecision,
    asian_price,
    average_std,
    default_drift,
    delta,
    european_price,
    multinomial_expand,
    stopping_criterion,
    theta,
)

__version__ = "0.1.0"

__all__ = [
    "ChangeOfBasis",
    "CompressedPropagator",
    "CorrelatorEngine",
    "CorrelatorQuery",
    "DuplicatingMatrix",
    "EliminatingMatrix",
    "ErrorBoundInputs",
    "GaussianLaw",
    "GeneratorMatrix",
    "GhpBasis",
    "LevyMoments",
    "McConfig",
    "McEstimate",
    "ModelSpec",
    "MthSelector",
    "MultiIndexTerm",
    "NigParams",
    "NumericalError",
    "PayoffExpansion",
    "PriceReport",
    "PriceRequest",
    "StoppingDecision",
    "accuracy_gamma",
    "asian_price",
    "average_std",
    "change_of_basis",
    "correlator",
    "correlator_tower_oracle",
    "default_drift",
    "delta",
    "duplicating",
    "eliminating",
    "error_constant",
    "european_price",
    "gaussian_call",
    "generator_matrix",
    "ghp_eval",
    "ghp_norm_sq",
    "hermite_eval",
    "kron",
    "kron_power_apply",
    "levy_moments",
    "matrix_exponential",
    "mc_price",
    "moment",
    "moment_vector",
    "mth_selectors",
    "multinomial_expand",
    "ou_asian_law",
    "payoff_coefficients",
    "payoff_l2_error",
    "payoff_series_eval",
    "scale_floor",
    "simulate_paths",
    "std_normal",
    "stopping_criterion",
    "theta",
    "vec",
    "vec_inverse",
    "vecl",
]
