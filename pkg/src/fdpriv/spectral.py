"""Eigendecomposition of discretized covariance operators and the norms built on it.

The covariance operator acts on the weighted-L2 space of the grid as
(C x)(t_i) = sum_k w_k G(t_i, t_k) x(t_k).  Its eigenpairs come from the
equivalent symmetric problem  W^{1/2} G W^{1/2} u = lambda u  with
eigenfunctions v = W^{-1/2} u, orthonormal under the grid weights.  The
squared norm  sum_j c_j^2 / lambda_j^eta  of a coefficient vector is the
quantity that controls how much Gaussian noise a release needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .kernels import Curve, Grid, KernelSpec, gram_matrix

DEFAULT_TRUNCATION_TOL = 1e-12

#: Relative residual-energy tolerance at which releases treat a curve as
#: lying inside the basis span.
RELEASE_COMPAT_TOL = 1e-10


class DegenerateKernelError(ValueError):
    """The covariance matrix has no numerically positive spectrum."""


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Retained eigenpairs of a discretized covariance operator.

    eigenvalues are strictly positive and non-increasing; eigenfunctions are
    curves orthonormal in the weighted L2 inner product.  Instances may come
    from :func:`decompose` or be handcrafted for small experiments, in which
    case ``spec`` is None.
    """

    eigenvalues: np.ndarray
    eigenfunctions: tuple[Curve, ...]
    grid: Grid
    spec: KernelSpec | None = None

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("need at least one eigenvalue")
        if np.any(lam <= 0.0) or not np.all(np.isfinite(lam)):
            raise ValueError("eigenvalues must be positive and finite")
        if np.any(np.diff(lam) > 0.0):
            raise ValueError("eigenvalues must be non-increasing")
        if lam.size > self.grid.size:
            raise ValueError("more eigenpairs than grid points")
        if len(self.eigenfunctions) != lam.size:
            raise ValueError("eigenvalue/eigenfunction count mismatch")
        matrix = np.column_stack([c.values for c in self.eigenfunctions])
        for c in self.eigenfunctions:
            if not c.grid.matches(self.grid):
                raise ValueError("eigenfunctions must live on the basis grid")
        overlap = matrix.T @ (self.grid.weights[:, None] * matrix)
        if np.max(np.abs(overlap - np.eye(lam.size))) > 1e-8:
            raise ValueError("eigenfunctions are not orthonormal under the grid weights")
        lam.setflags(write=False)
        matrix.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "_matrix", matrix)

    @property
    def m(self) -> int:
        """Number of retained modes."""
        return self.eigenvalues.size

    @property
    def matrix(self) -> np.ndarray:
        """(grid size, m) array whose columns are the eigenfunction values."""
        return self._matrix


def decompose(
    gram: np.ndarray,
    grid: Grid,
    tol: float = DEFAULT_TRUNCATION_TOL,
    spec: KernelSpec | None = None,
) -> SpectralBasis:
    """Eigendecompose a covariance matrix on a grid.

    Solves W^{1/2} G W^{1/2} u = lambda u and keeps every mode with
    lambda > tol * lambda_max (a relative rule, so rescaling G rescales the
    spectrum without changing what is retained).  Eigenvector signs are fixed
    by making the first non-negligible component positive, which keeps the
    output deterministic across linear-algebra backends.

    Raises
    ------
    DegenerateKernelError
        If no eigenvalue is numerically positive.
    """
    gram = np.asarray(gram, dtype=float)
    if gram.shape != (grid.size, grid.size):
        raise ValueError("gram matrix does not match the grid size")
    if not (0.0 < tol < 1.0):
        raise ValueError("truncation tol must lie in (0, 1)")
    gram = 0.5 * (gram + gram.T)
    sqrt_w = np.sqrt(grid.weights)
    sym = sqrt_w[:, None] * gram * sqrt_w[None, :]
    evals, evecs = scipy.linalg.eigh(sym)
    lam_max = evals[-1]
    if not (lam_max > 0.0):
        raise DegenerateKernelError("degenerate kernel: no positive eigenvalues")
    kept = np.nonzero(evals > tol * lam_max)[0][::-1]  # descending order
    if kept.size == 0:
        raise DegenerateKernelError("degenerate kernel: spectrum below truncation threshold")
    lam = evals[kept]
    funcs = evecs[:, kept] / sqrt_w[:, None]
    for j in range(funcs.shape[1]):
        col = funcs[:, j]
        lead = np.nonzero(np.abs(col) > 1e-12 * np.max(np.abs(col)))[0][0]
        if col[lead] < 0.0:
            funcs[:, j] = -col
    eigenfunctions = tuple(Curve(funcs[:, j], grid) for j in range(funcs.shape[1]))
    return SpectralBasis(lam, eigenfunctions, grid, spec)


def kernel_basis(
    spec: KernelSpec, grid: Grid, tol: float = DEFAULT_TRUNCATION_TOL
) -> SpectralBasis:
    """Gram matrix + decomposition in one step, recording the kernel spec."""
    return decompose(gram_matrix(spec, grid), grid, tol, spec=spec)


def coefficients(x: Curve, basis: SpectralBasis) -> np.ndarray:
    """Coefficients <x, v_j> of a curve in the basis, via weighted dot products."""
    if not x.grid.matches(basis.grid):
        raise ValueError("curve grid does not match the basis grid")
    return (basis.grid.weights * x.values) @ basis.matrix


def reconstruct(coeffs: np.ndarray, basis: SpectralBasis) -> Curve:
    """Curve sum_j c_j v_j from a coefficient vector."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.m,):
        raise ValueError(f"expected {basis.m} coefficients, got {coeffs.shape}")
    return Curve(basis.matrix @ coeffs, basis.grid)


def cm_norm_sq(coeffs: np.ndarray, basis: SpectralBasis, eta: float = 1.0) -> float:
    """Squared Cameron-Martin norm sum_j c_j^2 / lambda_j^eta.

    This is the norm under which the global sensitivity of a release is
    measured; eta >= 1 selects the power of the covariance used as penalty.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.m,):
        raise ValueError(f"expected {basis.m} coefficients, got {coeffs.shape}")
    if eta < 1.0:
        raise ValueError("eta must be at least 1")
    return float(np.sum(coeffs**2 / basis.eigenvalues**eta))


@dataclass(frozen=True)
class CompatibilityReport:
    """Outcome of a span check: the verdict plus what it was based on.

    residual_fraction is the share of the curve's squared L2 norm lying
    outside the retained span; cm_norm_sq is the Cameron-Martin energy of the
    projected part.
    """

    compatible: bool
    residual_fraction: float
    cm_norm_sq: float

    def __bool__(self) -> bool:
        return self.compatible


def compatibility_check(
    x: Curve,
    basis: SpectralBasis,
    eta: float = 1.0,
    rel_tol: float = RELEASE_COMPAT_TOL,
) -> CompatibilityReport:
    """Check whether a curve lies in the basis span, up to a relative tolerance.

    A summary failing this check cannot be privatized by noise drawn from this
    basis at any scale, so release operations refuse it outright.  The check
    itself never raises; it reports.
    """
    c = coefficients(x, basis)
    residual = x.values - basis.matrix @ c
    residual_energy = float(np.sum(basis.grid.weights * residual**2))
    total_energy = float(np.sum(basis.grid.weights * x.values**2))
    fraction = residual_energy / total_energy if total_energy > 0.0 else 0.0
    compatible = residual_energy <= rel_tol * total_energy
    return CompatibilityReport(compatible, fraction, cm_norm_sq(c, basis, eta))


def k_gram(functionals: np.ndarray, basis: SpectralBasis) -> np.ndarray:
    """Gram matrix of linear functionals in the dual (covariance) inner product.

    A functional is a length-m coefficient vector f acting as
    f(x) = sum_j f_j <x, v_j>; the dual inner product is
    <f, g> = sum_j lambda_j f_j g_j.
    """
    f = np.atleast_2d(np.asarray(functionals, dtype=float))
    if f.shape[1] != basis.m:
        raise ValueError(f"functionals must have {basis.m} coefficients")
    if not np.all(np.isfinite(f)):
        raise ValueError("functional coefficients must be finite")
    return (f * basis.eigenvalues) @ f.T


def point_eval_functional(basis: SpectralBasis, t: float) -> np.ndarray:
    """Coefficient vector of the point-evaluation functional at a grid point."""
    idx = np.nonzero(np.isclose(basis.grid.points, t, rtol=0.0, atol=1e-12))[0]
    if idx.size == 0:
        raise ValueError(f"t={t} is not a grid point; point evaluations need one")
    return basis.matrix[idx[0], :].copy()
