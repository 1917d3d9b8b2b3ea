import math

import numpy as np
import pytest

from fdpriv import (
    Curve,
    DegenerateKernelError,
    KernelSpec,
    SpectralBasis,
    cm_norm_sq,
    coefficients,
    compatibility_check,
    decompose,
    gram_matrix,
    grid_from_points,
    k_gram,
    point_eval_functional,
    reconstruct,
    uniform_grid,
)

from conftest import toy_basis, two_point_basis


def jacobi_eigenvalues(sym: np.ndarray) -> np.ndarray:
    """Brute-force eigenvalue oracle: cyclic Jacobi rotations on a symmetric matrix."""
    a = np.array(sym, dtype=float)
    n = a.shape[0]
    scale = np.abs(a).max() or 1.0
    for _ in range(100):
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))[::-1]


def test_decompose_identity_gram_two_points():
    grid = uniform_grid(2)
    basis = decompose(np.eye(2), grid)
    assert np.allclose(basis.eigenvalues, [0.5, 0.5], rtol=0, atol=1e-15)
    assert basis.m == 2
    # degenerate eigenvalue: compare the span projector, not the vectors
    projector = basis.matrix @ basis.matrix.T @ np.diag(grid.weights)
    assert np.allclose(projector, np.eye(2), atol=1e-12)


def test_decompose_rank_one_gram():
    grid = uniform_grid(2)
    basis = decompose(np.ones((2, 2)), grid)
    assert basis.m == 1
    assert basis.eigenvalues[0] == pytest.approx(1.0, rel=1e-14)
    assert np.allclose(basis.matrix[:, 0], [1.0, 1.0], atol=1e-12)


def test_decompose_default_setup_mode_count(default_basis):
    # 100-point grid, gaussian kernel with rho=0.001: most of the spectrum is
    # numerically alive
    assert 30 <= default_basis.m <= 100


def test_decompose_matches_jacobi_oracle():
    rng = np.random.default_rng(5)
    for trial in range(10):
        m = int(rng.integers(3, 11))
        pts = np.sort(rng.uniform(0, 1, m))
        while np.any(np.diff(pts) <= 0):
            pts = np.sort(rng.uniform(0, 1, m))
        grid = grid_from_points(pts)
        gram = gram_matrix(KernelSpec("matern32", 0.3), grid)
        basis = decompose(gram, grid, tol=1e-12)
        sqrt_w = np.sqrt(grid.weights)
        oracle = jacobi_eigenvalues(sqrt_w[:, None] * gram * sqrt_w[None, :])
        assert np.allclose(
            basis.eigenvalues, oracle[: basis.m], rtol=1e-8, atol=1e-14
        )


def test_decompose_reconstructs_gram_at_full_rank(default_basis):
    gram = gram_matrix(KernelSpec("gaussian", 0.001), default_basis.grid)
    recon = default_basis.matrix @ (
        default_basis.eigenvalues[:, None] * default_basis.matrix.T
    )
    assert np.abs(recon - gram).max() <= 1e-6


def test_decompose_eigenfunctions_orthonormal(default_basis):
    overlap = default_basis.matrix.T @ (
        default_basis.grid.weights[:, None] * default_basis.matrix
    )
    assert np.abs(overlap - np.eye(default_basis.m)).max() <= 1e-8


def test_decompose_rejects_degenerate():
    grid = uniform_grid(3)
    with pytest.raises(DegenerateKernelError):
        decompose(np.zeros((3, 3)), grid)


def test_decompose_sign_convention():
    grid = uniform_grid(5)
    gram = gram_matrix(KernelSpec("gaussian", 0.1), grid)
    basis = decompose(gram, grid)
    for j in range(basis.m):
        col = basis.matrix[:, j]
        lead = np.nonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0][0]
        assert col[lead] > 0


def test_basis_construction_rejects_bad_inputs():
    grid = uniform_grid(2)
    good = (Curve(np.array([1.0, 1.0]), grid), Curve(np.array([1.0, -1.0]), grid))
    with pytest.raises(ValueError):  # not orthonormal under the weights
        SpectralBasis(np.array([0.5, 0.25]), (good[0], good[0]), grid)
    with pytest.raises(ValueError):  # increasing eigenvalues
        SpectralBasis(np.array([0.25, 0.5]), good, grid)
    with pytest.raises(ValueError):  # non-positive eigenvalue
        SpectralBasis(np.array([0.5, 0.0]), good, grid)
    with pytest.raises(ValueError):  # count mismatch
        SpectralBasis(np.array([0.5]), good, grid)


def test_coefficients_orthonormality():
    basis = toy_basis()
    c = coefficients(basis.eigenfunctions[0], basis)
    expected = np.zeros(basis.m)
    expected[0] = 1.0
    assert np.allclose(c, expected, atol=1e-12)
    zero = Curve(np.zeros(basis.grid.size), basis.grid)
    assert np.all(coefficients(zero, basis) == 0.0)


def test_coefficients_linear_combination():
    basis = toy_basis()
    combo = Curve(
        2.0 * basis.matrix[:, 0] + 3.0 * basis.matrix[:, 1], basis.grid
    )
    got = coefficients(combo, basis)
    # independent oracle: direct weighted dot products
    w = basis.grid.weights
    direct = np.array(
        [np.sum(w * combo.values * basis.matrix[:, j]) for j in range(basis.m)]
    )
    assert np.allclose(got, direct, atol=1e-14)
    assert np.allclose(got, [2.0, 3.0, 0.0, 0.0, 0.0], atol=1e-12)


def test_coefficients_grid_mismatch_rejected():
    basis = toy_basis()
    other = Curve(np.zeros(10), uniform_grid(10))
    with pytest.raises(ValueError):
        coefficients(other, basis)


def test_reconstruct_round_trip():
    basis = toy_basis()
    v2 = basis.eigenfunctions[1]
    back = reconstruct(coefficients(v2, basis), basis)
    assert np.abs(back.values - v2.values).max() <= 1e-10
    assert np.all(reconstruct(np.zeros(basis.m), basis).values == 0.0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        c = rng.normal(size=basis.m)
        assert np.allclose(coefficients(reconstruct(c, basis), basis), c, atol=1e-8)
    with pytest.raises(ValueError):
        reconstruct(np.zeros(basis.m + 1), basis)


def test_cm_norm_sq_examples():
    basis = two_point_basis(0.5, 0.25)
    e1 = np.array([1.0, 0.0])
    assert cm_norm_sq(e1, basis, eta=1.0) == pytest.approx(1.0 / 0.5, rel=1e-14)
    assert cm_norm_sq(np.zeros(2), basis) == 0.0
    # lambda = (0.5, 0.25), eta = 2: 1/0.25 + 1/0.0625 = 20
    assert cm_norm_sq(np.array([1.0, 1.0]), basis, eta=2.0) == pytest.approx(
        20.0, rel=1e-14
    )
    with pytest.raises(ValueError):
        cm_norm_sq(e1, basis, eta=0.5)


def test_cm_norm_sq_quadratic_form_properties():
    basis = toy_basis()
    rng = np.random.default_rng(11)
    for _ in range(50):
        c = rng.normal(size=basis.m)
        d = rng.normal(size=basis.m)
        a = rng.uniform(0.1, 5.0)
        eta = rng.choice([1.0, 1.5, 2.0])
        assert cm_norm_sq(a * c, basis, eta) == pytest.approx(
            a**2 * cm_norm_sq(c, basis, eta), rel=1e-12
        )
        lhs = cm_norm_sq(c + d, basis, eta) + cm_norm_sq(c - d, basis, eta)
        rhs = 2.0 * cm_norm_sq(c, basis, eta) + 2.0 * cm_norm_sq(d, basis, eta)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_cm_norm_reproducing_identity():
    # h = C(g) has coefficients lambda_j g_j and |h|^2 = sum lambda_j g_j^2
    basis = toy_basis()
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = rng.normal(size=basis.m)
        h_coeffs = basis.eigenvalues * g
        assert cm_norm_sq(h_coeffs, basis, eta=1.0) == pytest.approx(
            float(np.sum(basis.eigenvalues * g**2)), rel=1e-12
        )


def test_compatibility_check_in_span():
    basis = toy_basis()
    report = compatibility_check(basis.eigenfunctions[0], basis)
    assert report.compatible and bool(report)
    assert report.residual_fraction <= 1e-20
    zero = Curve(np.zeros(basis.grid.size), basis.grid)
    assert compatibility_check(zero, basis).compatible


def test_compatibility_check_detects_off_span():
    basis = toy_basis()  # 5 modes on a 40-point grid
    rng = np.random.default_rng(21)
    raw = rng.normal(size=basis.grid.size)
    proj = basis.matrix @ coefficients(Curve(raw, basis.grid), basis)
    residual = Curve(raw - proj, basis.grid)
    report = compatibility_check(residual, basis)
    assert not report.compatible
    assert report.residual_fraction > 0.99


def test_k_gram_and_point_eval():
    basis = toy_basis()
    f1 = point_eval_functional(basis, basis.grid.points[3])
    assert np.array_equal(f1, basis.matrix[3, :])
    gram = k_gram(np.stack([f1, f1]), basis)
    expected = float(np.sum(basis.eigenvalues * f1**2))
    assert np.allclose(gram, expected, rtol=1e-12)
    with pytest.raises(ValueError):
        point_eval_functional(basis, 0.1234567)  # not a grid point
    with pytest.raises(ValueError):
        k_gram(np.full((1, basis.m), np.inf), basis)
