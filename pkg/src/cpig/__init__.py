"""Cumulative past information generating function and related measures."""

from .bounds import BoundReport, bound_suite, cpe_bound, entropy_bound, hardy_bound
from .distributions import (
    Distribution,
    EmpiricalStep,
    Exponential,
    MonotoneTransform,
    PiecewiseLinearCdf,
    Power,
    SupportInterval,
    Uniform,
    cdf_eval,
    empirical_cdf_spec,
    load_piecewise_cdf,
    load_sample,
    make_piecewise_cdf,
    narrow_uniform_cdf,
    pdf_eval,
    quantile,
    random_piecewise_cdf,
    sample,
)
from .divergence import (
    MixtureCdf,
    MixWeights,
    cpig_divergence,
    cpte,
    fcpe,
    generalized_log,
    jcpig,
    jcpig_mixture_decomposition,
    jcpte,
    jfcpe,
)
from .errors import (
    CpigError,
    Divergent,
    DomainError,
    EmptySample,
    InvalidKnots,
    MaxDepth,
    NoDensity,
    NonMonotone,
    RatioSingularity,
    SeriesDivergenceWarning,
    UnboundedSupport,
    UnsupportedModel,
)
from .estimation import (
    CltReport,
    EstimatorMoments,
    MonteCarloMoments,
    clt_experiment,
    empirical_cpig,
    estimator_moments_exponential,
    estimator_moments_uniform,
    simulate_estimator_moments,
)
from .measures import (
    MeasureResult,
    cigf,
    cpe,
    cpig,
    cpig_order_statistic,
    cpig_series_partial,
    cpig_theta_derivative,
    cpig_transformed,
    cre,
    crig,
    cumulative_extropy,
    gcpe,
    gcre,
    gmd,
    order_stat_cpig_ratio,
    order_stat_mean,
    rcpig,
    shannon_entropy,
)
from .numerics import QuadratureResult, finite_difference, integrate_adaptive
from .orders import (
    OrderReport,
    convolution_bound_report,
    convolve_cdfs,
    cpig_order_check,
    dispersive_order_check,
    fold_convolve,
    stochastic_order_check,
    transformed_cpig_order_check,
)

__version__ = "0.1.0"
