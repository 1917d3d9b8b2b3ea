"""Global-sensitivity bounds for the penalized mean and Gaussian noise calibration.

For a dataset of N curves with L2 norms bounded by tau, the penalized mean
with penalty (phi, eta) changes by at most

    delta_sq = (4 tau^2 / N^2) * sup_j lambda_j^(2 eta - 1) / (lambda_j^eta + phi)^2

in squared Cameron-Martin norm when one record changes.  The supremum over
the actual spectrum gives the tight, grid-aware bound; maximizing over all
lambda > 0 gives the grid-free closed form.  The Gaussian mechanism then
needs noise variance  sigma_sq = 2 log(2/delta) / epsilon^2 * delta_sq.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import SpectralBasis

GS_METHODS = ("exact_spectral", "closed_form")


class PrivacyRefusalError(ValueError):
    """A requested release cannot be given a privacy guarantee, so it is refused."""


@dataclass(frozen=True)
class PrivacyBudget:
    """(epsilon, delta) privacy budget.

    epsilon is capped at 1 because the Gaussian-mechanism guarantee this
    package calibrates against is only established for epsilon <= 1; budgets
    beyond that are refused rather than silently weakened.
    """

    epsilon: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError("epsilon must be positive")
        if self.epsilon > 1.0:
            raise PrivacyRefusalError(
                "epsilon must be at most 1: the Gaussian mechanism used here "
                "carries no guarantee beyond epsilon = 1"
            )
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must lie strictly between 0 and 1")


@dataclass(frozen=True)
class CalibrationResult:
    """Sensitivity bound, noise variance, and the inputs they were derived from."""

    delta_sq: float
    sigma_sq: float
    method: str
    phi: float
    eta: float
    tau: float
    n: int
    epsilon: float
    delta: float


def _validate_gs_args(phi: float, eta: float, tau: float, n: int) -> None:
    if not (math.isfinite(phi) and phi > 0.0):
        raise ValueError("phi must be positive")
    if not (math.isfinite(eta) and eta >= 1.0):
        raise ValueError("eta must be at least 1")
    if not (math.isfinite(tau) and tau >= 0.0):
        raise ValueError("tau must be non-negative")
    if n < 1:
        raise ValueError("sample size must be at least 1")


def gs_exact_bound(
    basis: SpectralBasis, phi: float, eta: float, tau: float, n: int
) -> float:
    """Sensitivity bound with the supremum taken over the retained spectrum."""
    _validate_gs_args(phi, eta, tau, n)
    lam = basis.eigenvalues
    if lam.size == 0:
        raise ValueError("empty spectrum")
    ratios = lam ** (2.0 * eta - 1.0) / (lam**eta + phi) ** 2
    return 4.0 * tau**2 / n**2 * float(np.max(ratios))


def gs_closed_bound(phi: float, eta: float, tau: float, n: int) -> float:
    """Grid-free sensitivity bound: the supremum taken over all lambda > 0.

    Equals tau^2 / (N^2 phi^(1/eta)) * (2 eta - 1)^(2 - 1/eta) / eta^2, which
    collapses to tau^2 / (N^2 phi) at eta = 1 and never exceeds
    4 tau^2 / (N^2 phi^(1/eta)).
    """
    _validate_gs_args(phi, eta, tau, n)
    return (
        tau**2
        / (n**2 * phi ** (1.0 / eta))
        * (2.0 * eta - 1.0) ** (2.0 - 1.0 / eta)
        / eta**2
    )


def gs_sup_maximizer(phi: float, eta: float) -> float:
    """Argmax of f(x) = x^(2 eta - 1) / (x^eta + phi)^2 over x > 0.

    The maximum sits at x* = (phi (2 eta - 1))^(1/eta); plugging it into f
    reproduces the closed-form bound.
    """
    _validate_gs_args(phi, eta, 0.0, 1)
    return (phi * (2.0 * eta - 1.0)) ** (1.0 / eta)


def noise_scale(budget: PrivacyBudget, delta_sq: float) -> float:
    """Minimal compliant noise variance 2 log(2/delta) / epsilon^2 * delta_sq."""
    if delta_sq < 0.0:
        raise ValueError("delta_sq must be non-negative")
    return 2.0 * math.log(2.0 / budget.delta) / budget.epsilon**2 * delta_sq


def calibrate(
    basis: SpectralBasis,
    phi: float,
    eta: float,
    tau: float,
    n: int,
    budget: PrivacyBudget,
    method: str = "exact_spectral",
) -> CalibrationResult:
    """Derive the sensitivity bound and noise variance for a release.

    method selects the spectrum-aware bound (tighter, so less noise) or the
    grid-free closed form.  The noise variance is always the minimal one
    compliant with the budget.
    """
    if budget.epsilon > 1.0:
        raise PrivacyRefusalError("epsilon must be at most 1")
    if method not in GS_METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {GS_METHODS}")
    if method == "exact_spectral":
        delta_sq = gs_exact_bound(basis, phi, eta, tau, n)
    else:
        delta_sq = gs_closed_bound(phi, eta, tau, n)
    return CalibrationResult(
        delta_sq=delta_sq,
        sigma_sq=noise_scale(budget, delta_sq),
        method=method,
        phi=float(phi),
        eta=float(eta),
        tau=float(tau),
        n=int(n),
        epsilon=budget.epsilon,
        delta=budget.delta,
    )


def projection_quadratic_form(
    functionals: np.ndarray, delta_coeffs: np.ndarray, basis: SpectralBasis
) -> float:
    """Quadratic form (nu - nu')^T K^+ (nu - nu') for a batch of functionals.

    nu - nu' are the functional values of the coefficient difference
    delta_coeffs, and K is the functionals' dual-space Gram matrix.  The form
    never exceeds the squared Cameron-Martin norm of the difference, which is
    why a finite batch of functional releases costs no more noise than the
    full function.  Singular values of K below 1e-10 of the largest are
    treated as zero in the pseudoinverse.
    """
    from .spectral import k_gram

    f = np.atleast_2d(np.asarray(functionals, dtype=float))
    delta_coeffs = np.asarray(delta_coeffs, dtype=float)
    if delta_coeffs.shape != (basis.m,):
        raise ValueError(f"expected {basis.m} coefficients")
    gram = k_gram(f, basis)
    diff = f @ delta_coeffs
    return float(diff @ np.linalg.pinv(gram, rcond=1e-10) @ diff)
