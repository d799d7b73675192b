"""Spectrum of the product of two independent Haar random projections.

For projections of ranks r1, r2 in R^n with aspect ratios q_k = r_k / n, the
squared singular values lambda of the product follow, as n grows, a law with
continuous density

    f(lambda) = sqrt((lambda_plus - lambda)(lambda - lambda_minus))
                / (2 pi lambda (1 - lambda))

supported on [lambda_minus, lambda_plus] with

    lambda_{+/-} = q1 + q2 - 2 q1 q2 +/- 2 sqrt(q1 q2 (1 - q1)(1 - q2)),

plus point masses A0 = 1 - min(q1, q2) at 0 and A1 = max(q1 + q2 - 1, 0)
at 1. The square root of the upper edge is the noise-filtering threshold on
the singular-value scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInput
from .linalg import haar_basis
from ._rng import derive_rng


@dataclass(frozen=True)
class NoiseSpectrumLaw:
    """Asymptotic law of squared singular values of a random projection product."""

    q1: float
    q2: float
    lambda_minus: float
    lambda_plus: float
    mass_at_zero: float
    mass_at_one: float


def noise_law(q1: float, q2: float) -> NoiseSpectrumLaw:
    """Populate the law for rank-to-dimension ratios q1, q2 in [0, 1]."""
    if not (0.0 <= q1 <= 1.0 and 0.0 <= q2 <= 1.0):
        raise InvalidInput(f"q1, q2 must lie in [0, 1], got ({q1}, {q2})")
    mid = q1 + q2 - 2.0 * q1 * q2
    spread = 2.0 * np.sqrt(max(0.0, q1 * q2 * (1.0 - q1) * (1.0 - q2)))
    lam_minus = min(max(mid - spread, 0.0), 1.0)
    lam_plus = min(max(mid + spread, 0.0), 1.0)
    return NoiseSpectrumLaw(
        q1=float(q1),
        q2=float(q2),
        lambda_minus=float(lam_minus),
        lambda_plus=float(lam_plus),
        mass_at_zero=1.0 - min(q1, q2),
        mass_at_one=max(q1 + q2 - 1.0, 0.0),
    )


def continuous_mass(law: NoiseSpectrumLaw) -> float:
    """Total weight of the continuous part: 1 - A0 - A1."""
    return 1.0 - law.mass_at_zero - law.mass_at_one


def noise_density(law: NoiseSpectrumLaw, lam: float) -> float:
    """Continuous density f(lambda); 0 outside the open support."""
    if lam <= law.lambda_minus or lam >= law.lambda_plus:
        return 0.0
    if lam <= 0.0 or lam >= 1.0:
        return 0.0
    num = np.sqrt((law.lambda_plus - lam) * (lam - law.lambda_minus))
    return float(num / (2.0 * np.pi * lam * (1.0 - lam)))


def noise_cdf(law: NoiseSpectrumLaw, lam: float, nodes: int = 200,
              normalized: bool = True) -> float:
    """Integral of the continuous density from the lower edge up to ``lam``.

    With ``normalized=True`` the result is divided by the continuous mass so
    it forms a proper CDF of the non-atomic part (used for KS comparisons
    against sampled spectra). The same endpoint-taming substitution as the
    Marchenko-Pastur quadrature is used.
    """
    a, b = law.lambda_minus, law.lambda_plus
    mass = continuous_mass(law)
    if b - a <= 0.0 or mass <= 0.0:
        return 0.0
    if lam <= a:
        return 0.0
    if lam >= b:
        lam = b
    half = 0.5 * (b - a)
    t_nodes, t_weights = np.polynomial.legendre.leggauss(nodes)
    t_up = np.arccos(np.clip(1.0 - (lam - a) / half, -1.0, 1.0))
    t = 0.5 * t_up * (t_nodes + 1.0)
    w = 0.5 * t_up * t_weights
    xt = a + half * (1.0 - np.cos(t))
    integrand = half**2 * np.sin(t) ** 2 / (2.0 * np.pi * xt * (1.0 - xt))
    total = float(np.sum(w * integrand))
    return total / mass if normalized else total


def singular_value_threshold(law: NoiseSpectrumLaw) -> float:
    """sqrt(lambda_plus), the noise-filtering threshold on the singular-value scale.

    When either ratio is 0 there are no noise directions and the threshold
    vanishes (the continuous part of the law carries no mass).
    """
    if min(law.q1, law.q2) == 0.0:
        return 0.0
    return float(np.sqrt(law.lambda_plus))


def density_sv_scale(law: NoiseSpectrumLaw, s) -> np.ndarray:
    """Density g(s) = 2 s f(s^2) on the singular-value axis."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.zeros_like(s)
    for i, si in enumerate(s):
        out[i] = 2.0 * si * noise_density(law, si * si)
    return out


def sample_noise_spectrum(n: int, r1: int, r2: int, seed: int) -> np.ndarray:
    """Squared singular values of U1.T @ U2 for independent Haar bases, descending."""
    if r1 > n or r2 > n:
        raise InvalidInput(f"ranks ({r1}, {r2}) must not exceed n = {n}")
    rng = derive_rng(seed)
    u1 = haar_basis(n, r1, rng)
    u2 = haar_basis(n, r2, rng)
    if min(r1, r2) == 0:
        return np.zeros(0)
    s = np.linalg.svd(u1.T @ u2, compute_uv=False)
    return np.clip(s, 0.0, 1.0) ** 2
