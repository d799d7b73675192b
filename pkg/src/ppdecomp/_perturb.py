"""Spectral-norm perturbation quantities for a pair of subspace estimates.

The two error terms bounding the spectrum of the estimated projection
product M_hat = P_hat1 P_hat2 against the true product M = P1 P2 are

    epsilon_1 = || P1 (M_hat - M) P2 ||_2      (downward shift of the top cluster)
    epsilon_2 = || M_hat - M ||_2              (upward shift of the noise cluster)

Written as operator differences these are insensitive to the sign convention
chosen for the individual perturbations P_k - P_hat_k, and they are exactly
the quantities for which the cluster-interval bounds hold. All evaluations
happen in an orthonormal basis of the joint span of the four input bases.
"""

from __future__ import annotations

import numpy as np

from .linalg import reduced_coords, spectral_norm


def epsilon_pair(u1, u2, u1_hat, u2_hat) -> tuple[float, float]:
    """(epsilon_1, epsilon_2) for true bases (u1, u2) and estimates (u1_hat, u2_hat)."""
    _, (c1, c2, d1, d2) = reduced_coords(u1, u2, u1_hat, u2_hat)
    if c1.shape[0] == 0:
        return 0.0, 0.0
    p1 = c1 @ c1.T
    p2 = c2 @ c2.T
    r = (d1 @ d1.T) @ (d2 @ d2.T) - p1 @ p2
    eps2 = spectral_norm(r)
    eps1 = spectral_norm(p1 @ r @ p2)
    return eps1, eps2
