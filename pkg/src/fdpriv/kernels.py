"""Grids on [0, 1], curves living on them, and Matern-family covariance kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Canonical kernel names, ordered from smoothest to roughest sample paths.
KERNEL_FAMILIES = ("gaussian", "matern52", "matern32", "exponential")

_SQRT3 = math.sqrt(3.0)
_SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True, eq=False)
class Grid:
    """Discretization of [0, 1] with quadrature weights.

    The weighted dot product sum(w_k * x_k * y_k) is the discrete L2 inner
    product every other module works in.  Weights must be strictly positive;
    points strictly increasing inside [0, 1].
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if points.ndim != 1 or points.size < 2:
            raise ValueError("grid needs at least two points")
        if weights.shape != points.shape:
            raise ValueError("points and weights must have the same length")
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(weights))):
            raise ValueError("grid entries must be finite")
        if np.any(np.diff(points) <= 0.0):
            raise ValueError("grid points must be strictly increasing")
        if points[0] < 0.0 or points[-1] > 1.0:
            raise ValueError("grid points must lie in [0, 1]")
        if np.any(weights <= 0.0):
            raise ValueError("quadrature weights must be positive")
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.points.size

    def matches(self, other: "Grid") -> bool:
        """True when both grids discretize the same abscissae."""
        return self is other or (
            np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )


def uniform_grid(m: int) -> Grid:
    """Equispaced m-point grid on [0, 1] with uniform weights 1/m."""
    if m < 2:
        raise ValueError("uniform grid needs at least two points")
    return Grid(np.linspace(0.0, 1.0, m), np.full(m, 1.0 / m))


def grid_from_points(points) -> Grid:
    """Build a grid from bare abscissae, choosing quadrature weights.

    Equispaced points get uniform weights 1/m; anything else gets trapezoid
    weights.  This is how grids read back from CSV recover their weights.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 1 or points.size < 2:
        raise ValueError("need at least two grid points")
    gaps = np.diff(points)
    if np.any(gaps <= 0):
        raise ValueError("grid points must be strictly increasing")
    if np.allclose(gaps, gaps[0], rtol=1e-9, atol=1e-12):
        weights = np.full(points.size, 1.0 / points.size)
    else:
        weights = np.empty(points.size)
        weights[0] = 0.5 * gaps[0]
        weights[-1] = 0.5 * gaps[-1]
        weights[1:-1] = 0.5 * (gaps[:-1] + gaps[1:])
    return Grid(points, weights)


@dataclass(frozen=True, eq=False)
class Curve:
    """A function sampled on a grid: one value per grid point, all finite."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise ValueError(
                f"curve has {values.size} values for a {self.grid.size}-point grid"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("curve values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def inner(self, other: "Curve") -> float:
        """Weighted L2 inner product with another curve on the same grid."""
        if not self.grid.matches(other.grid):
            raise ValueError("curves live on different grids")
        return float(np.sum(self.grid.weights * self.values * other.values))

    def norm(self) -> float:
        """Weighted L2 norm sqrt(sum(w_k * x_k^2))."""
        return math.sqrt(float(np.sum(self.grid.weights * self.values**2)))


@dataclass(frozen=True)
class KernelSpec:
    """A Matern-family covariance kernel: family name plus range parameter rho."""

    family: str
    rho: float

    def __post_init__(self):
        family = str(self.family).strip().lower()
        if family not in KERNEL_FAMILIES:
            raise ValueError(
                f"unknown kernel family {self.family!r}; choose from {KERNEL_FAMILIES}"
            )
        rho = float(self.rho)
        if not math.isfinite(rho) or rho <= 0.0:
            raise ValueError("kernel range parameter rho must be positive and finite")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "rho", rho)


def _eval_distance(family: str, d, rho: float):
    """Kernel value as a function of |t - s|; works elementwise on arrays."""
    if family == "gaussian":
        return np.exp(-(d**2) / rho)
    if family == "matern52":
        r = d / rho
        return (1.0 + _SQRT5 * r + 5.0 * d**2 / (3.0 * rho**2)) * np.exp(-_SQRT5 * r)
    if family == "matern32":
        r = d / rho
        return (1.0 + _SQRT3 * r) * np.exp(-_SQRT3 * r)
    if family == "exponential":
        return np.exp(-d / rho)
    raise ValueError(f"unknown kernel family {family!r}")


def kernel_eval(spec: KernelSpec, t: float, s: float) -> float:
    """Evaluate the covariance kernel C(t, s).

    All four families are stationary in d = |t - s| and normalized so that
    the value lies in (0, 1], reaching 1 exactly when t == s.
    """
    t = float(t)
    s = float(s)
    if not (math.isfinite(t) and math.isfinite(s)):
        raise ValueError("kernel arguments must be finite")
    if t == s:
        return 1.0
    return float(_eval_distance(spec.family, abs(t - s), spec.rho))


def gram_matrix(spec: KernelSpec, grid: Grid) -> np.ndarray:
    """Kernel matrix G[i, j] = C(t_i, t_j) over the grid points.

    Exactly symmetric (|t-s| is), unit diagonal, and positive semi-definite
    up to round-off for every family.
    """
    t = grid.points
    d = np.abs(t[:, None] - t[None, :])
    gram = _eval_distance(spec.family, d, spec.rho)
    np.fill_diagonal(gram, 1.0)
    return gram
