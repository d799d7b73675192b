import numpy as np
import pytest

from ppdecomp import (DimensionMismatch, InvalidInput, compact_svd,
                      orthonormalize, principal_spectrum, subspace_distance)
from conftest import angled_pair, qr_basis


def test_compact_svd_diagonal():
    svd = compact_svd(np.diag([3.0, 1.0]))
    assert np.allclose(svd.values, [3.0, 1.0])


def test_compact_svd_rank_one_outer_product():
    rng = np.random.default_rng(1)
    a = rng.standard_normal(6)
    b = rng.standard_normal(4)
    svd = compact_svd(np.outer(a, b))
    assert svd.values.shape == (1,)
    assert svd.values[0] == pytest.approx(np.linalg.norm(a) * np.linalg.norm(b), rel=1e-12)


def test_compact_svd_values_match_gram_eigenvalues():
    # Oracle: squared singular values are the eigenvalues of A^T A from an
    # independent symmetric eigensolver.
    rng = np.random.default_rng(2)
    a = rng.standard_normal((4, 3))
    svd = compact_svd(a)
    eigs = np.sort(np.linalg.eigvalsh(a.T @ a))[::-1]
    assert np.allclose(svd.values**2, eigs[: svd.values.size], rtol=1e-8)


@pytest.mark.parametrize("shape", [(5, 3), (20, 20), (120, 200), (200, 200)])
def test_compact_svd_reconstruction(shape):
    rng = np.random.default_rng(sum(shape))
    a = rng.standard_normal(shape)
    svd = compact_svd(a)
    recon = (svd.left * svd.values) @ svd.right.T
    assert np.max(np.abs(a - recon)) <= 1e-8 * svd.values[0]
    assert np.all(np.diff(svd.values) <= 0)


def test_compact_svd_zero_matrix_is_rank_zero():
    svd = compact_svd(np.zeros((4, 3)))
    assert svd.values.size == 0
    assert svd.left.shape == (4, 0)


def test_compact_svd_rejects_nonfinite():
    with pytest.raises(InvalidInput):
        compact_svd(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_orthonormalize_identity():
    basis = orthonormalize(np.eye(3))
    assert basis.shape == (3, 3)
    assert np.allclose(basis.T @ basis, np.eye(3), atol=1e-12)


def test_orthonormalize_collinear_columns():
    v = np.array([[1.0], [2.0], [0.5]])
    basis = orthonormalize(np.hstack([v, 2 * v]))
    assert basis.shape == (3, 1)


def test_orthonormalize_spans_input():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((5, 3))
    basis = orthonormalize(a)
    assert np.max(np.abs(basis @ (basis.T @ a) - a)) <= 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_orthonormal_columns_invariant(seed):
    rng = np.random.default_rng(seed)
    basis = orthonormalize(rng.standard_normal((30, 7)))
    assert np.max(np.abs(basis.T @ basis - np.eye(basis.shape[1]))) <= 1e-8


def test_principal_spectrum_identical_subspaces():
    u = qr_basis(10, 4, np.random.default_rng(4))
    assert np.allclose(principal_spectrum(u, u), 1.0, atol=1e-10)


def test_principal_spectrum_orthogonal_subspaces():
    q = qr_basis(12, 6, np.random.default_rng(5))
    assert np.allclose(principal_spectrum(q[:, :3], q[:, 3:]), 0.0, atol=1e-10)


def test_principal_spectrum_planted_angle():
    u1, u2 = angled_pair(20, 4, 3, 60.0, np.random.default_rng(6))
    vals = principal_spectrum(u1, u2)
    assert vals.shape == (3,)
    assert np.allclose(vals, 0.5, atol=1e-8)


def test_principal_spectrum_symmetry_and_rotation_invariance():
    rng = np.random.default_rng(7)
    u1 = qr_basis(15, 4, rng)
    u2 = qr_basis(15, 6, rng)
    fwd = principal_spectrum(u1, u2)
    assert np.allclose(fwd, principal_spectrum(u2, u1), atol=1e-10)
    q = qr_basis(4, 4, rng)
    assert np.allclose(fwd, principal_spectrum(u1 @ q, u2), atol=1e-8)


def test_principal_spectrum_empty_for_rank_zero():
    u = qr_basis(8, 3, np.random.default_rng(8))
    assert principal_spectrum(u, np.zeros((8, 0))).size == 0


def test_principal_spectrum_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        principal_spectrum(np.eye(4), np.eye(5))


def test_subspace_distance_identical():
    u = qr_basis(9, 3, np.random.default_rng(9))
    assert subspace_distance(u, u) == pytest.approx(0.0, abs=1e-10)


def test_subspace_distance_planted_angle():
    u1, u2 = angled_pair(20, 3, 3, 30.0, np.random.default_rng(10))
    assert subspace_distance(u1, u2) == pytest.approx(0.5, abs=1e-8)


def test_subspace_distance_rank_mismatch_is_one():
    q = qr_basis(10, 5, np.random.default_rng(11))
    assert subspace_distance(q[:, :2], q[:, :3]) == 1.0
