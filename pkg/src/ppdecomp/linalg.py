"""Dense subspace primitives: compact SVD, orthonormal bases, principal angles.

Conventions used throughout the package:

* a matrix is a 2-D ``float64`` array with finite entries;
* a subspace of R^n is represented by an ``(n, r)`` array with orthonormal
  columns (``r = 0`` encodes the trivial subspace ``{0}``);
* spectra of products of projections are always computed from the cross-Gram
  ``U1.T @ U2`` of the bases, never from ``n x n`` projector matrices.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import DimensionMismatch, InvalidInput

DEFAULT_DROP_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-10


class CompactSvd(NamedTuple):
    """Compact SVD ``A = left @ diag(values) @ right.T`` with zero values dropped."""

    left: np.ndarray
    values: np.ndarray
    right: np.ndarray


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float array, raising InvalidInput otherwise."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise InvalidInput(f"{name} must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInput(f"{name} must have at least one row and column, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return a


def compact_svd(a, drop_tol: float = DEFAULT_DROP_TOL) -> CompactSvd:
    """Compact SVD of ``a``; singular values <= ``drop_tol * sigma_1`` are dropped."""
    a = as_matrix(a)
    if drop_tol < 0:
        raise InvalidInput("drop_tol must be >= 0")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    keep = s > drop_tol * (s[0] if s.size else 0.0)
    r = int(np.count_nonzero(keep))
    return CompactSvd(u[:, :r], s[:r], vt[:r].T)


def orthonormalize(a, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of col(a); numerical rank set by ``sigma_i > rank_tol * sigma_1``."""
    a = as_matrix(a)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], 0))
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], 0))
    r = int(np.count_nonzero(s > rank_tol * s[0]))
    return u[:, :r]


def _check_basis_pair(u1, u2):
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    if u1.ndim != 2 or u2.ndim != 2:
        raise InvalidInput("bases must be 2-D arrays")
    if u1.shape[0] != u2.shape[0]:
        raise DimensionMismatch(
            f"ambient dimensions differ: {u1.shape[0]} vs {u2.shape[0]}"
        )
    return u1, u2


def principal_spectrum(u1, u2) -> np.ndarray:
    """Cosines of the principal angles between col(u1) and col(u2), descending.

    Equal to the non-zero singular values of the product of the two
    projections, computed as the singular values of the cross-Gram
    ``u1.T @ u2`` and clamped into [0, 1]. Empty if either basis has rank 0.
    """
    u1, u2 = _check_basis_pair(u1, u2)
    if u1.shape[1] == 0 or u2.shape[1] == 0:
        return np.zeros(0)
    s = np.linalg.svd(u1.T @ u2, compute_uv=False)
    return np.clip(s, 0.0, 1.0)


def subspace_distance(u1, u2) -> float:
    """Spectral norm of the projector difference, i.e. sin of the largest principal angle.

    Subspaces of different rank are at distance 1 (some direction of the larger
    one is orthogonal to the whole smaller one). Computed from the residual
    (I - P1) u2 rather than from sqrt(1 - cos^2), which loses half the
    significant digits near zero distance.
    """
    u1, u2 = _check_basis_pair(u1, u2)
    if u1.shape[1] != u2.shape[1]:
        return 1.0
    if u1.shape[1] == 0:
        return 0.0
    r12 = np.linalg.svd(u2 - u1 @ (u1.T @ u2), compute_uv=False)[0]
    r21 = np.linalg.svd(u1 - u2 @ (u2.T @ u1), compute_uv=False)[0]
    return float(min(max(r12, r21), 1.0))


def spectral_norm(a) -> float:
    """Largest singular value; 0 for an empty matrix."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def haar_basis(n: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthonormal (n, r) frame from a QR of a Gaussian matrix."""
    if r > n:
        raise InvalidInput(f"rank {r} exceeds ambient dimension {n}")
    if r == 0:
        return np.zeros((n, 0))
    g = rng.standard_normal((n, r))
    q, rr = np.linalg.qr(g)
    # Fix the QR sign ambiguity so the frame is exactly Haar distributed.
    return q * np.sign(np.diag(rr))


def reduced_coords(*bases: np.ndarray):
    """Coordinates of several same-ambient bases in an orthonormal basis of their joint span.

    Returns ``(w, coords)`` where ``w`` is (n, m) orthonormal and
    ``coords[k] = w.T @ bases[k]``. Any operator built from the input
    projections has identical non-zero spectrum in these m-dimensional
    coordinates, which keeps all spectral-norm evaluations O(m^3).
    """
    n = bases[0].shape[0]
    for b in bases:
        if b.shape[0] != n:
            raise DimensionMismatch("bases must share the ambient dimension")
    stacked = np.hstack(bases) if bases else np.zeros((n, 0))
    if stacked.shape[1] == 0:
        w = np.zeros((n, 0))
    else:
        w = orthonormalize(stacked)
    return w, [w.T @ b for b in bases]
