"""Differentially private releases of curve-valued statistics.

Estimates a mean curve by penalized RKHS smoothing, bounds its sensitivity in
the Cameron-Martin norm of a chosen Gaussian-process noise, and releases the
estimate (or functionals of it) with calibrated noise.  Includes a
Karhunen-Loeve simulator, an empirical privacy auditor, and CV/PCV
hyperparameter selection.
"""

from .calibration import (
    CalibrationResult,
    GS_METHODS,
    PrivacyBudget,
    PrivacyRefusalError,
    calibrate,
    gs_closed_bound,
    gs_exact_bound,
    gs_sup_maximizer,
    noise_scale,
    projection_quadratic_form,
)
from .kernels import (
    Curve,
    Grid,
    KERNEL_FAMILIES,
    KernelSpec,
    gram_matrix,
    grid_from_points,
    kernel_eval,
    uniform_grid,
)
from .mechanism import (
    AuditReport,
    ReleaseMeta,
    SanitizedRelease,
    TransformedRelease,
    density_log_ratio,
    derivative,
    dp_audit,
    l2_norm,
    postprocess,
    release_function,
    release_projections,
    sample_noise,
    sup_norm,
)
from .rng import derive_seed, make_rng
from .selection import (
    SelectionGrid,
    cv_score,
    cv_select,
    fold_partition,
    pcv_score,
    pcv_select,
)
from .simulate import MEAN_NAMES, SimConfig, default_mean, kl_simulate
from .smoothing import (
    SampleSet,
    SmootherConfig,
    penalized_mean,
    penalized_mean_direct,
    shrinkage_factors,
)
from .spectral import (
    CompatibilityReport,
    DegenerateKernelError,
    SpectralBasis,
    cm_norm_sq,
    coefficients,
    compatibility_check,
    decompose,
    k_gram,
    kernel_basis,
    point_eval_functional,
    reconstruct,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "CalibrationResult",
    "CompatibilityReport",
    "Curve",
    "DegenerateKernelError",
    "GS_METHODS",
    "Grid",
    "KERNEL_FAMILIES",
    "KernelSpec",
    "MEAN_NAMES",
    "PrivacyBudget",
    "PrivacyRefusalError",
    "ReleaseMeta",
    "SampleSet",
    "SanitizedRelease",
    "SelectionGrid",
    "SimConfig",
    "SmootherConfig",
    "SpectralBasis",
    "TransformedRelease",
    "calibrate",
    "cm_norm_sq",
    "coefficients",
    "compatibility_check",
    "cv_score",
    "cv_select",
    "decompose",
    "default_mean",
    "density_log_ratio",
    "derivative",
    "derive_seed",
    "dp_audit",
    "fold_partition",
    "gram_matrix",
    "grid_from_points",
    "gs_closed_bound",
    "gs_exact_bound",
    "gs_sup_maximizer",
    "k_gram",
    "kernel_basis",
    "kernel_eval",
    "kl_simulate",
    "l2_norm",
    "make_rng",
    "noise_scale",
    "pcv_score",
    "pcv_select",
    "penalized_mean",
    "penalized_mean_direct",
    "point_eval_functional",
    "postprocess",
    "projection_quadratic_form",
    "reconstruct",
    "release_function",
    "release_projections",
    "sample_noise",
    "shrinkage_factors",
    "sup_norm",
    "uniform_grid",
]
