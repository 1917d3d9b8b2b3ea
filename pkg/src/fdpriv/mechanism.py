"""The Gaussian mechanism for curves: noise sampling, releases, and the auditor.

Noise is a mean-zero Gaussian process expanded in the basis,
sigma * sum_j sqrt(lambda_j) xi_j v_j with iid standard normal xi_j, so a
release is the smoothed estimate plus one draw of that process.  The auditor
replays the privacy argument numerically: under the distribution induced by
one dataset, the log density ratio against an adjacent dataset may exceed
epsilon with probability at most delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Callable

import numpy as np

from .calibration import CalibrationResult, PrivacyBudget, PrivacyRefusalError, noise_scale
from .kernels import Curve
from .spectral import (
    RELEASE_COMPAT_TOL,
    SpectralBasis,
    coefficients,
    compatibility_check,
)
from .rng import make_rng

_AUDIT_MIN_SAMPLES = 10_000
_AUDIT_CHUNK = 1 << 16


@dataclass(frozen=True)
class ReleaseMeta:
    """Provenance carried by every sanitized release.

    timestamp defaults to empty so that identical configurations produce
    byte-identical output files; callers that want a wall-clock stamp must
    supply one explicitly.
    """

    kernel_family: str
    rho: float
    phi: float
    eta: float
    tau: float
    n: int
    epsilon: float
    delta: float
    delta_sq: float
    sigma_sq: float
    method: str
    seed: int
    timestamp: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SanitizedRelease:
    """A privatized curve (or vector of functional values) plus its provenance."""

    meta: ReleaseMeta
    curve: Curve | None = None
    projections: np.ndarray | None = None


@dataclass(frozen=True)
class TransformedRelease:
    """Result of post-processing a release; inherits the privacy metadata."""

    value: object
    meta: ReleaseMeta


@dataclass(frozen=True)
class AuditReport:
    """Empirical check of the (epsilon, delta) tail bound by Monte Carlo."""

    n_samples: int
    epsilon: float
    delta: float
    empirical_violation_rate: float
    mc_stderr: float
    passed: bool
    undercalibrated: bool


def sample_noise(basis: SpectralBasis, sigma_sq: float, seed: int) -> Curve:
    """One draw of the scaled Gaussian process, deterministic in the seed."""
    if sigma_sq < 0.0:
        raise ValueError("sigma_sq must be non-negative")
    xi = make_rng(seed).standard_normal(basis.m)
    coeffs = math.sqrt(sigma_sq) * np.sqrt(basis.eigenvalues) * xi
    return Curve(basis.matrix @ coeffs, basis.grid)


def _release_meta(
    basis: SpectralBasis, calib: CalibrationResult, seed: int, timestamp: str
) -> ReleaseMeta:
    family = basis.spec.family if basis.spec is not None else "custom"
    rho = basis.spec.rho if basis.spec is not None else float("nan")
    return ReleaseMeta(
        kernel_family=family,
        rho=rho,
        phi=calib.phi,
        eta=calib.eta,
        tau=calib.tau,
        n=calib.n,
        epsilon=calib.epsilon,
        delta=calib.delta,
        delta_sq=calib.delta_sq,
        sigma_sq=calib.sigma_sq,
        method=calib.method,
        seed=int(seed),
        timestamp=timestamp,
    )


def release_function(
    mu_hat: Curve,
    basis: SpectralBasis,
    calib: CalibrationResult,
    seed: int,
    timestamp: str = "",
) -> SanitizedRelease:
    """Full-function release mu_hat + noise.

    Refuses summaries that do not lie in the basis span: no noise scale can
    privatize those, so emitting anything would be a false guarantee.
    """
    report = compatibility_check(mu_hat, basis, rel_tol=RELEASE_COMPAT_TOL)
    if not report.compatible:
        raise PrivacyRefusalError(
            "summary is incompatible with the noise: fraction "
            f"{report.residual_fraction:.3e} of its energy lies outside the "
            "basis span, so no noise scale achieves differential privacy"
        )
    noise = sample_noise(basis, calib.sigma_sq, seed)
    released = Curve(mu_hat.values + noise.values, basis.grid)
    return SanitizedRelease(_release_meta(basis, calib, seed, timestamp), curve=released)


def release_projections(
    mu_hat: Curve,
    functionals: np.ndarray,
    basis: SpectralBasis,
    calib: CalibrationResult,
    seed: int,
    timestamp: str = "",
) -> SanitizedRelease:
    """Release a batch of linear functionals evaluated on one shared noisy curve.

    Sharing a single draw across functionals gives the jointly Gaussian law
    with covariance sigma_sq * K (K the functionals' dual Gram matrix) and
    keeps projection releases consistent with a full-function release under
    the same seed.
    """
    f = np.atleast_2d(np.asarray(functionals, dtype=float))
    if f.shape[1] != basis.m:
        raise ValueError(f"functionals must have {basis.m} coefficients")
    if not np.all(np.isfinite(f)):
        raise ValueError("functional has non-finite coefficients on the spectrum")
    full = release_function(mu_hat, basis, calib, seed, timestamp)
    values = f @ coefficients(full.curve, basis)
    return SanitizedRelease(full.meta, projections=values)


def postprocess(release: SanitizedRelease, transform: Callable) -> TransformedRelease:
    """Apply a deterministic transform of the released curve only.

    The transform receives the sanitized curve and nothing else, so whatever
    it computes inherits the release's privacy guarantee unchanged.
    """
    if release.curve is None:
        raise ValueError("postprocess needs a full-function release")
    return TransformedRelease(transform(release.curve), release.meta)


def l2_norm(curve: Curve) -> float:
    """Weighted L2 norm of a curve (postprocess built-in)."""
    return curve.norm()


def sup_norm(curve: Curve) -> float:
    """Largest absolute value on the grid (postprocess built-in)."""
    return float(np.max(np.abs(curve.values)))


def derivative(curve: Curve) -> Curve:
    """Finite-difference derivative: centered inside, one-sided at the ends."""
    return Curve(np.gradient(curve.values, curve.grid.points), curve.grid)


def density_log_ratio(
    x: Curve,
    theta_d: Curve,
    theta_dp: Curve,
    basis: SpectralBasis,
    sigma_sq: float,
    eta: float = 1.0,
) -> float:
    """Log density ratio at x between releases centered at theta_d and theta_dp.

    In coefficients:  -(1/(2 sigma_sq)) * (|theta_d|^2 - |theta_dp|^2
    - 2 (T_d - T_dp)(x))  with T_theta(x) = sum_j theta_j x_j / lambda_j^eta
    and the norms taken in the same Cameron-Martin geometry.
    """
    if sigma_sq <= 0.0:
        raise ValueError("sigma_sq must be positive")
    for name, theta in (("theta_d", theta_d), ("theta_dp", theta_dp)):
        if not compatibility_check(theta, basis, eta=eta).compatible:
            raise PrivacyRefusalError(f"{name} is incompatible with the noise basis")
    lam_eta = basis.eigenvalues**eta
    cd = coefficients(theta_d, basis)
    cdp = coefficients(theta_dp, basis)
    cx = coefficients(x, basis)
    norm_d = float(np.sum(cd**2 / lam_eta))
    norm_dp = float(np.sum(cdp**2 / lam_eta))
    t_diff = float(np.sum((cd - cdp) * cx / lam_eta))
    return -(norm_d - norm_dp - 2.0 * t_diff) / (2.0 * sigma_sq)


def dp_audit(
    theta_d: Curve,
    theta_dp: Curve,
    basis: SpectralBasis,
    budget: PrivacyBudget,
    sigma_sq: float,
    n_samples: int = 100_000,
    seed: int = 0,
    swap: bool = False,
) -> AuditReport:
    """Monte-Carlo audit of the privacy tail bound for one adjacent pair.

    Draws releases centered at theta_d, estimates how often the log density
    ratio against theta_dp exceeds epsilon, and passes when that rate stays
    within delta plus three Monte-Carlo standard errors.  A sigma_sq below
    the calibrated minimum for this pair is flagged as undercalibrated (the
    audit still runs and is expected to fail).  Set swap=True to audit the
    opposite direction.
    """
    if n_samples < _AUDIT_MIN_SAMPLES:
        raise ValueError(f"audit needs at least {_AUDIT_MIN_SAMPLES} samples")
    if sigma_sq <= 0.0:
        raise ValueError("sigma_sq must be positive")
    if swap:
        theta_d, theta_dp = theta_dp, theta_d
    for name, theta in (("theta_d", theta_d), ("theta_dp", theta_dp)):
        if not compatibility_check(theta, basis).compatible:
            raise PrivacyRefusalError(f"{name} is incompatible with the noise basis")

    lam = basis.eigenvalues
    cd = coefficients(theta_d, basis)
    cdp = coefficients(theta_dp, basis)
    pair_delta_sq = float(np.sum((cd - cdp) ** 2 / lam))
    minimum = noise_scale(budget, pair_delta_sq)
    undercalibrated = sigma_sq < minimum * (1.0 - 1e-12)

    # log ratio is affine in the sampled coefficients: const + slope . c_x
    slope = (cd - cdp) / lam / sigma_sq
    const = -(np.sum(cd**2 / lam) - np.sum(cdp**2 / lam)) / (2.0 * sigma_sq)
    scale = math.sqrt(sigma_sq) * np.sqrt(lam)
    rng = make_rng(seed)
    violations = 0
    remaining = int(n_samples)
    while remaining > 0:
        block = min(remaining, _AUDIT_CHUNK)
        xi = rng.standard_normal((block, lam.size))
        log_ratio = const + (cd + scale * xi) @ slope
        violations += int(np.count_nonzero(log_ratio > budget.epsilon))
        remaining -= block
    rate = violations / n_samples
    stderr = math.sqrt(rate * (1.0 - rate) / n_samples)
    return AuditReport(
        n_samples=int(n_samples),
        epsilon=budget.epsilon,
        delta=budget.delta,
        empirical_violation_rate=rate,
        mc_stderr=stderr,
        passed=rate <= budget.delta + 3.0 * stderr,
        undercalibrated=undercalibrated,
    )
