"""
Spectrum of the product of two random projections
=================================================

Compares the analytical law of the squared singular values of a random
projection product against sampled spectra, for a few rank-to-dimension
ratios. The square root of the upper support edge is the noise threshold the
decomposition uses to filter chance alignments.

    python demos/noise_spectrum_law.py
"""

import numpy as np

import ppdecomp as ppd

##############################################################################
# Support edges and point masses as the ratios grow
# --------------------------------------------------

print("q1    q2    lambda-   lambda+   sqrt(l+)  A0     A1")
for q1, q2 in [(0.05, 0.05), (0.1, 0.2), (0.2, 0.3), (0.4, 0.4), (0.5, 0.5),
               (0.7, 0.6)]:
    law = ppd.noise_law(q1, q2)
    print(f"{q1:<5} {q2:<5} {law.lambda_minus:<9.5f} {law.lambda_plus:<9.5f} "
          f"{ppd.singular_value_threshold(law):<9.5f} {law.mass_at_zero:<6.3f} "
          f"{law.mass_at_one:.3f}")

##############################################################################
# Sampled spectra versus the law at n = 100
# ------------------------------------------
# The top sampled value should hug the analytical edge, and the empirical
# distribution of the continuous part should match the integrated density.

n, r1, r2 = 100, 30, 40
law = ppd.noise_law(r1 / n, r2 / n)
samples = np.concatenate([ppd.sample_noise_spectrum(n, r1, r2, seed=s)
                          for s in range(40)])
print(f"\nn={n}, ranks ({r1}, {r2}):")
print(f"  analytical edge lambda+ = {law.lambda_plus:.4f}")
print(f"  largest sampled value   = {samples.max():.4f}")

grid = np.linspace(law.lambda_minus, law.lambda_plus, 9)[1:-1]
print("  lambda   law CDF   empirical CDF")
for lam in grid:
    theo = ppd.noise_cdf(law, lam)
    emp = np.mean(samples <= lam)
    print(f"  {lam:.3f}    {theo:.3f}     {emp:.3f}")
