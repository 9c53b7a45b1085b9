"""Resonance of lambda(n) e(alpha n^beta): where the sums peak and how they grow with X.

For beta = 1/2 the single-form sum resonates at alpha = 2 sqrt(q), and the
growth exponent there is visibly larger than off resonance.

    python demos/resonance_exponents.py
"""
import numpy as np

from cuspmoments.coeffs import eigenforms
from cuspmoments.resonance import ResonanceParams, exponent_fit, resonance_scan, resonance_sum_single

X_MAX = 2**15
delta = eigenforms(12, 2 * X_MAX)[0]

alphas = np.round(np.arange(1.0, 4.0, 0.01), 10)
rows = resonance_scan(delta, None, 0.5, alphas, X_MAX // 2)
# the median is tiny away from resonance, so many small bumps pass the 5x-median test; keep the top three
top = sorted((r for r in rows if r.peak), key=lambda r: -r.magnitude)[:3]
print("largest peaks at X = 2^14:", sorted((round(r.alpha, 2), round(r.magnitude, 1)) for r in top))
print("expected near 2 sqrt(q):", [round(2 * q**0.5, 3) for q in (1, 2, 3)])

Xs = [2.0**j for j in range(10, 16)]
for alpha in (2.0, 2 * 2**0.5, 2.7):
    sums = [resonance_sum_single(delta, ResonanceParams(alpha, 0.5, X)) for X in Xs]
    fit = exponent_fit(Xs, sums)
    print(f"alpha={alpha:.4f}: |S| ~ X^{fit.slope:.3f} (stderr {fit.stderr:.3f})")
