"""Coverage analysis for 3-D cellular networks.

Analytic activity, link-state, and coverage-bound formulas for Poisson
access-point deployments, a deterministic parallel Monte-Carlo simulator
to validate them, and a sweep runner that writes reproducible CSVs.
"""

from ._version import VERSION as __version__
from .acceptance import CriterionResult, list_criteria, run_acceptance, run_criterion
from .analytic import (
    DEFAULT_QUADRATURE,
    BALL_VOLUME_FACTOR,
    CoverageBounds,
    DensityConfig,
    QuadratureSettings,
    activity_probability,
    ball_volume,
    coverage_bounds,
    integrate_semi_infinite,
    interference_laplace,
    link_los_prob,
    link_los_prob_quadrature,
    mean_interference_beyond,
    nth_nearest_cdf,
    nth_nearest_pdf,
)
from .channel import (
    ChannelParams,
    LinkState,
    LosModel,
    approx_los_prob,
    exact_los_prob,
    fading_laplace,
    los_probability,
    path_loss,
    sample_fading,
)
from .errors import ConfigurationError, DegenerateGeometryError, NumericalError
from .geometry import (
    NearestResult,
    NetworkRealization,
    Point3,
    PppRealization,
    SimGeometry,
    default_guard_margin,
    mean_nearest_distance,
    nearest_indices,
    radius_for_expected_count,
    realize_network,
    sample_ppp_ball,
    uniform_ball_points,
)
from .runner import (
    ExperimentConfig,
    SweepResult,
    config_hash,
    load_config,
    run_fig1,
    run_fig2,
    run_fig3,
)
from .simulate import (
    ASSOCIATION_RULES,
    ActivityEstimate,
    CoverageEstimate,
    LinkLosEstimate,
    compute_sir,
    coverage_curve,
    db_to_linear,
    empirical_activity_probability,
    empirical_link_los_prob,
    empirical_link_los_probs,
    proportion_ci_halfwidth,
    simulate_coverage,
)
from .specfun import (
    binomial,
    gamma,
    log_factorial,
    lower_incomplete_gamma,
    regularized_lower_gamma,
)

__all__ = [
    "__version__",
    "ASSOCIATION_RULES",
    "BALL_VOLUME_FACTOR",
    "DEFAULT_QUADRATURE",
    "ActivityEstimate",
    "ChannelParams",
    "ConfigurationError",
    "CoverageBounds",
    "CoverageEstimate",
    "CriterionResult",
    "DegenerateGeometryError",
    "DensityConfig",
    "ExperimentConfig",
    "LinkLosEstimate",
    "LinkState",
    "LosModel",
    "NearestResult",
    "NetworkRealization",
    "NumericalError",
    "Point3",
    "PppRealization",
    "QuadratureSettings",
    "SimGeometry",
    "SweepResult",
    "activity_probability",
    "approx_los_prob",
    "ball_volume",
    "binomial",
    "compute_sir",
    "config_hash",
    "coverage_bounds",
    "coverage_curve",
    "db_to_linear",
    "default_guard_margin",
    "empirical_activity_probability",
    "empirical_link_los_prob",
    "empirical_link_los_probs",
    "exact_los_prob",
    "fading_laplace",
    "gamma",
    "integrate_semi_infinite",
    "interference_laplace",
    "link_los_prob",
    "link_los_prob_quadrature",
    "list_criteria",
    "load_config",
    "log_factorial",
    "los_probability",
    "lower_incomplete_gamma",
    "mean_interference_beyond",
    "mean_nearest_distance",
    "nearest_indices",
    "nth_nearest_cdf",
    "nth_nearest_pdf",
    "path_loss",
    "proportion_ci_halfwidth",
    "radius_for_expected_count",
    "realize_network",
    "regularized_lower_gamma",
    "run_acceptance",
    "run_criterion",
    "run_fig1",
    "run_fig2",
    "run_fig3",
    "sample_fading",
    "sample_ppp_ball",
    "simulate_coverage",
    "uniform_ball_points",
]
