"""Quasilinear SDEs driven by fractional Brownian motion, integrated in the
Wick-Ito-Skorohod sense, for every Hurst parameter in (0, 1).

The package samples fBm exactly (circulant embedding with a Cholesky
oracle), provides four endpoint/path schemes built on an exact
geometric-fBm backbone, and ships the Monte-Carlo machinery to estimate
strong convergence rates against coupled fine-grid references.
"""

__version__ = "0.1.0"

from .errors import ConfigError, EmbeddingError, NumericOverflowError, WisSdeError
from .fbm import (
    FbmPath,
    SeedSpec,
    TimeGrid,
    fbm_covariance,
    fbm_covariance_matrix,
    fgn_autocovariance,
    gaussian_stream,
    sample_fbm_path,
    sample_fbm_path_cholesky,
    sample_fbm_paths,
    sample_fbm_paths_cholesky,
    subsample_path,
    translated_fbm,
    truncate_path,
)
from .wis import (
    DriftFunction,
    SdeProblem,
    gfbm_exact,
    tilde_j,
    tilde_j_inverse_at_anchor,
    wick_exp_gaussian,
)
from .solvers import (
    EndpointResult,
    PathResult,
    SolverKind,
    solve_endpoint,
    solve_endpoint_values,
    solve_path,
    step_expfreeze,
    step_gbmem,
    step_rosenbrock,
)
from .drifts import REGISTRY, drift_names, get_drift
from .experiments import (
    ConvergenceConfig,
    RateFit,
    RmseTable,
    SweepReport,
    SweepRow,
    conjectured_rate,
    convergence_study,
    estimate_error_constant,
    estimate_rmse,
    fit_rate,
    rate_vs_h_sweep,
    theoretical_rate,
)

__all__ = [
    "__version__",
    "WisSdeError",
    "ConfigError",
    "NumericOverflowError",
    "EmbeddingError",
    "TimeGrid",
    "FbmPath",
    "SeedSpec",
    "fbm_covariance",
    "fbm_covariance_matrix",
    "fgn_autocovariance",
    "gaussian_stream",
    "sample_fbm_path",
    "sample_fbm_paths",
    "sample_fbm_path_cholesky",
    "sample_fbm_paths_cholesky",
    "subsample_path",
    "truncate_path",
    "translated_fbm",
    "DriftFunction",
    "SdeProblem",
    "gfbm_exact",
    "tilde_j",
    "tilde_j_inverse_at_anchor",
    "wick_exp_gaussian",
    "SolverKind",
    "EndpointResult",
    "PathResult",
    "solve_endpoint",
    "solve_endpoint_values",
    "solve_path",
    "step_gbmem",
    "step_expfreeze",
    "step_rosenbrock",
    "REGISTRY",
    "drift_names",
    "get_drift",
    "ConvergenceConfig",
    "RmseTable",
    "RateFit",
    "SweepRow",
    "SweepReport",
    "estimate_rmse",
    "fit_rate",
    "convergence_study",
    "rate_vs_h_sweep",
    "estimate_error_constant",
    "theoretical_rate",
    "conjectured_rate",
]
