"""Numerical laboratory for spectral regularization with inner-product
kernels on spheres: exact eigenvalue computation, filter-based estimators,
rate algebra, matrix-free risk oracles, and a scaling-experiment harness."""

from .filters import (
    FAMILIES,
    FilterAxiomReport,
    FilterSpec,
    check_filter_axioms,
    phi_lambda,
    psi_lambda,
    qualification,
)
from .kernels import (
    CoefficientReport,
    InnerProductKernel,
    cross_kernel,
    custom_kernel,
    gram_matrix,
    kernel_by_name,
    ntk_kernel,
    power_series_coefficients,
    power_series_kernel,
    rbf_kernel,
)
from .oracle import (
    TargetCoefficients,
    m1_sampled,
    m2,
    n1,
    n2,
    oracle_sweep,
    risk_slope_fit,
    source_coefficients,
    theoretical_risk,
)
from .rates import (
    MinimaxLowerValue,
    RateQuery,
    RateResult,
    balanced_lambda_exponent,
    krr_rate_exponent,
    minimax_exponent,
    minimax_lower_value,
    phase_index,
    plateau_intervals,
    rate_curve,
    saturation_gap,
    spectral_rate_exponent,
)
from .regression import (
    Dataset,
    EigenCache,
    FittedEstimator,
    RiskReport,
    eigendecompose_gram,
    excess_risk_mc,
    fit_gf_euler_oracle,
    fit_krr_direct,
    fit_spectral,
    predict,
    risk_decomposition,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    TuningSpec,
    build_target,
    config_from_dict,
    cross_validate_krr,
    derive_seed,
    fit_rate_loglog,
    run_rate_experiment,
    run_saturation_experiment,
    select_gf_time,
)
from .spectra import SpectrumModel, idealized_spectrum
from .sphere import (
    PointCloud,
    QuadratureError,
    funk_hecke_spectrum,
    gegenbauer,
    harmonic_multiplicity,
    mercer_reconstruct,
    sample_uniform,
    surface_area_ratio,
)
from .targets import GegenbauerDegree, KernelSections, Zero, eval_target

__version__ = "0.1.0"

__all__ = [
    "FAMILIES",
    "CoefficientReport",
    "Dataset",
    "EigenCache",
    "ExperimentConfig",
    "ExperimentResult",
    "FilterAxiomReport",
    "FilterSpec",
    "FittedEstimator",
    "GegenbauerDegree",
    "InnerProductKernel",
    "KernelSections",
    "MinimaxLowerValue",
    "PointCloud",
    "QuadratureError",
    "RateQuery",
    "RateResult",
    "RiskReport",
    "SpectrumModel",
    "TargetCoefficients",
    "TuningSpec",
    "Zero",
    "balanced_lambda_exponent",
    "build_target",
    "check_filter_axioms",
    "config_from_dict",
    "cross_kernel",
    "cross_validate_krr",
    "custom_kernel",
    "derive_seed",
    "eigendecompose_gram",
    "eval_target",
    "excess_risk_mc",
    "fit_gf_euler_oracle",
    "fit_krr_direct",
    "fit_rate_loglog",
    "fit_spectral",
    "funk_hecke_spectrum",
    "gegenbauer",
    "gram_matrix",
    "harmonic_multiplicity",
    "idealized_spectrum",
    "kernel_by_name",
    "krr_rate_exponent",
    "m1_sampled",
    "m2",
    "mercer_reconstruct",
    "minimax_exponent",
    "minimax_lower_value",
    "n1",
    "n2",
    "ntk_kernel",
    "oracle_sweep",
    "phase_index",
    "phi_lambda",
    "plateau_intervals",
    "power_series_coefficients",
    "power_series_kernel",
    "predict",
    "psi_lambda",
    "qualification",
    "rate_curve",
    "rbf_kernel",
    "risk_decomposition",
    "risk_slope_fit",
    "run_rate_experiment",
    "run_saturation_experiment",
    "sample_uniform",
    "saturation_gap",
    "select_gf_time",
    "source_coefficients",
    "spectral_rate_exponent",
    "surface_area_ratio",
    "theoretical_risk",
]
