"""squint: squeezed-state interferometry with binned homodyne detection.

Simulation and estimation toolkit for single-port homodyne phase
measurement in a squeezed-state interferometer: exact Gaussian outcome
models, two- and three-bin data processing, Fisher-information bounds,
seeded Monte Carlo sampling, and three phase estimators, plus a CLI
that sweeps parameters and emits CSV/JSON tables (and optional PNG
renderings).
"""

__version__ = "0.1.0"

from .binning import (
    BinningScheme,
    OutcomeDerivs,
    OutcomeProbs,
    PhaseSensitivity,
    best_binary_sensitivity,
    binary_cfi,
    binary_sensitivity,
    center_bin_fwhm,
    crb_multi,
    default_binary_eigenvalues,
    improvement_db,
    multi_cfi,
    multi_sensitivity,
    outcome_derivs,
    outcome_probs,
    per_outcome_cfi,
    scaled_bin_edges,
    scaled_signal,
)
from .errors import ConfigError, NumericalFailure
from .estimation import (
    CalibrationTable,
    EstimateResult,
    EvaluationSummary,
    InversionResult,
    composite_estimate,
    evaluate_replicas,
    invert_outcome,
    log_likelihood,
    mle,
)
from .model import (
    InputState,
    ModelParams,
    cfi_max,
    continuous_cfi,
    crb_min,
    crb_min_approx,
    derive_params,
    input_state,
    mean_signal,
    noise_ratio,
    noise_ratio_deriv,
    quadrature_pdf,
)
from .oracles import (
    FockState,
    PhaseSpacePoint,
    build_fock_state,
    marginal_pdf_numeric,
    output_transform,
    qfi_fock,
    suggested_cutoff,
    wigner_input,
)
from .sampler import (
    CountRecord,
    OutcomeStats,
    ReplicaSet,
    empirical_stats,
    run_counts,
    run_replicas,
    sample_quadrature,
)
from .sweeps import (
    ExperimentConfig,
    PowerLawFit,
    SweepTable,
    fit_power_law,
    reproduce,
    scan,
)

__all__ = [
    "__version__",
    "BinningScheme",
    "CalibrationTable",
    "ConfigError",
    "CountRecord",
    "EstimateResult",
    "EvaluationSummary",
    "ExperimentConfig",
    "FockState",
    "InputState",
    "InversionResult",
    "ModelParams",
    "NumericalFailure",
    "OutcomeDerivs",
    "OutcomeProbs",
    "OutcomeStats",
    "PhaseSensitivity",
    "PhaseSpacePoint",
    "PowerLawFit",
    "ReplicaSet",
    "SweepTable",
    "best_binary_sensitivity",
    "binary_cfi",
    "binary_sensitivity",
    "build_fock_state",
    "center_bin_fwhm",
    "cfi_max",
    "composite_estimate",
    "continuous_cfi",
    "crb_min",
    "crb_min_approx",
    "crb_multi",
    "default_binary_eigenvalues",
    "derive_params",
    "empirical_stats",
    "evaluate_replicas",
    "fit_power_law",
    "improvement_db",
    "input_state",
    "invert_outcome",
    "log_likelihood",
    "marginal_pdf_numeric",
    "mean_signal",
    "mle",
    "multi_cfi",
    "multi_sensitivity",
    "noise_ratio",
    "noise_ratio_deriv",
    "outcome_derivs",
    "outcome_probs",
    "output_transform",
    "per_outcome_cfi",
    "qfi_fock",
    "quadrature_pdf",
    "reproduce",
    "run_counts",
    "run_replicas",
    "sample_quadrature",
    "scaled_bin_edges",
    "scaled_signal",
    "scan",
    "suggested_cutoff",
    "wigner_input",
]
