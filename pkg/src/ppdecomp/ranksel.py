"""Marginal signal-rank selection by optimal hard thresholding of singular values.

The rule keeps singular values above ``omega(beta) * median(singular values)``
with ``omega(beta) = 0.56 beta^3 - 0.95 beta^2 + 1.82 beta + 1.43`` and
``beta = min(n, p) / max(n, p)``. The same median, divided by the median
singular value of a unit-variance pure-noise matrix of the same shape
(obtained from the Marchenko-Pastur law), yields the noise-level estimate
``sigma_hat`` consumed by the bootstrap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidInput
from .linalg import as_matrix


@dataclass(frozen=True)
class RankSelection:
    """Outcome of the hard-threshold rank rule for one data matrix."""

    rank: int
    threshold: float      # on the singular-value scale of the data
    sigma_hat: float      # estimated noise standard deviation
    beta: float           # aspect ratio min(n,p)/max(n,p)
    mp_median: float      # median singular value of a unit-variance noise matrix


def gd_coefficient(beta: float) -> float:
    """omega(beta), the cubic approximation of the optimal threshold coefficient."""
    return 0.56 * beta**3 - 0.95 * beta**2 + 1.82 * beta + 1.43


def _mp_support(beta: float):
    return (1.0 - np.sqrt(beta)) ** 2, (1.0 + np.sqrt(beta)) ** 2


def _mp_cdf_factory(beta: float, nodes: int):
    """CDF of the Marchenko-Pastur eigenvalue law with ratio ``beta`` <= 1.

    Uses the substitution x = a + (b - a) (1 - cos t) / 2, which removes the
    square-root endpoint behaviour (and the 1/x pole when a = 0), then fixed
    Gauss-Legendre quadrature in t.
    """
    a, b = _mp_support(beta)
    half = 0.5 * (b - a)
    t_nodes, t_weights = np.polynomial.legendre.leggauss(nodes)

    def cdf(x: float) -> float:
        if x <= a:
            return 0.0
        if x >= b:
            return 1.0
        t_up = np.arccos(np.clip(1.0 - (x - a) / half, -1.0, 1.0))
        t = 0.5 * t_up * (t_nodes + 1.0)
        w = 0.5 * t_up * t_weights
        xt = a + half * (1.0 - np.cos(t))
        integrand = half**2 * np.sin(t) ** 2 / (2.0 * np.pi * beta * xt)
        return float(np.sum(w * integrand))

    return cdf


def marchenko_pastur_median(beta: float, nodes: int = 400) -> float:
    """Median of the Marchenko-Pastur eigenvalue distribution, beta in (0, 1].

    Found by bisecting the quadrature CDF to 1/2 within 1e-9.
    """
    if not 0.0 < beta <= 1.0:
        raise InvalidInput(f"beta must lie in (0, 1], got {beta}")
    cdf = _mp_cdf_factory(beta, nodes)
    lo, hi = _mp_support(beta)
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if cdf(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def mp_median_sv(n: int, p: int, nodes: int = 400) -> float:
    """Median singular value of an n x p matrix of i.i.d. unit-variance noise.

    Computed as sqrt(max(n, p) * m_beta) with m_beta the Marchenko-Pastur
    median at beta = min(n, p) / max(n, p).
    """
    if n < 1 or p < 1:
        raise InvalidInput("n and p must be >= 1")
    beta = min(n, p) / max(n, p)
    return float(np.sqrt(max(n, p) * marchenko_pastur_median(beta, nodes=nodes)))


def estimate_noise_sigma(singular_values, n: int, p: int) -> float:
    """Noise standard deviation estimate median(sv) / mp_median_sv(n, p).

    ``singular_values`` must be the full spectrum of the data matrix, i.e.
    min(n, p) values.
    """
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        raise InvalidInput("empty spectrum")
    if s.size != min(n, p):
        raise InvalidInput(
            f"expected the full spectrum of min(n, p) = {min(n, p)} values, got {s.size}"
        )
    return float(np.median(s) / mp_median_sv(n, p))


def _selection_from_spectrum(s: np.ndarray, n: int, p: int) -> RankSelection:
    beta = min(n, p) / max(n, p)
    mp_sv = mp_median_sv(n, p)
    y_med = float(np.median(s))
    sigma_hat = y_med / mp_sv
    threshold = gd_coefficient(beta) * y_med
    # Numerical-rank floor: on noise-free data the median is 0 and the
    # threshold with it; round-off singular values must not count.
    floor = 1e-12 * (s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(s > max(threshold, floor)))
    return RankSelection(rank=rank, threshold=threshold, sigma_hat=sigma_hat,
                         beta=beta, mp_median=mp_sv)


def select_rank(y) -> RankSelection:
    """Apply the hard-threshold rank rule to a data matrix.

    The rule is orientation-invariant: the aspect ratio is always taken with
    the smaller dimension on top, and the spectrum does not depend on
    transposition.
    """
    y = as_matrix(y)
    n, p = y.shape
    s = np.linalg.svd(y, compute_uv=False)
    return _selection_from_spectrum(s, n, p)


class Truncation(NamedTuple):
    """Rank-r truncated SVD of a data matrix."""

    x_hat: np.ndarray     # best rank-r approximation in Frobenius norm
    basis: np.ndarray     # (n, r) leading left singular vectors
    values: np.ndarray    # r leading singular values, descending
    right: np.ndarray     # (p, r) leading right singular vectors


def _truncation_from_svd(u, s, vt, rank: int) -> Truncation:
    basis = u[:, :rank]
    values = s[:rank].copy()
    right = vt[:rank].T
    x_hat = (basis * values) @ right.T
    return Truncation(x_hat, basis, values, right)


def truncate(y, rank: int) -> Truncation:
    """Best rank-``rank`` approximation of ``y`` (Eckart-Young)."""
    y = as_matrix(y)
    n, p = y.shape
    if rank < 0 or rank > min(n, p):
        raise InvalidInput(f"rank must lie in [0, {min(n, p)}], got {rank}")
    if rank == 0:
        return Truncation(np.zeros_like(y), np.zeros((n, 0)), np.zeros(0), np.zeros((p, 0)))
    u, s, vt = np.linalg.svd(y, full_matrices=False)
    return _truncation_from_svd(u, s, vt, rank)
