"""Walk through the level-one cusp forms: coefficients, Hecke relations, harmonic weights.

    python demos/hecke_and_petersson.py
"""
import math

import numpy as np

from cuspmoments.coeffs import cusp_dimension, eigenforms
from cuspmoments.petersson import geometric_side, harmonic_weights, sym_square_L1, verify_petersson

# Ramanujan's tau: the first coefficients of Delta are exact integers
delta = eigenforms(12, 1000)[0]
print("tau(1..10) =", [int(delta.a[n]) for n in range(1, 11)])

# normalized eigenvalues satisfy lambda(m) lambda(n) = sum_{d | (m,n)} lambda(mn/d^2)
lam = delta.lam
m, n = 6, 10
lhs = lam[m] * lam[n]
rhs = sum(lam[m * n // (d * d)] for d in range(1, math.gcd(m, n) + 1) if math.gcd(m, n) % d == 0)
print(f"lambda(6) lambda(10) = {lhs:.15f}, Hecke side = {rhs:.15f}")

primes = np.array([p for p in range(2, 1000) if all(p % q for q in range(2, int(p**0.5) + 1))])
print(f"max |lambda(p)| over p < 1000: {np.max(np.abs(lam[primes])):.6f} (Deligne: <= 2)")

# dimensions jump at k = 24, where two Galois-conjugate forms appear
for k in (12, 16, 24, 28):
    print(f"k={k}: dim S_k = {cusp_dimension(k)}")
f24 = eigenforms(24, 50)
print("weight 24 eigenvalues of T_2:", [round(float(f.a[2]), 6) for f in f24])

# the geometric side at (1, 1) gives omega_f, and with it L(1, Sym^2 f)
for k in (12, 16, 18, 20, 22, 26):
    om = harmonic_weights(k).omega[0]
    print(f"k={k}: Delta_k(1,1) = {geometric_side(1, 1, k):.12f}, omega = {om:.12f}, "
          f"L(1, Sym^2 f) = {sym_square_L1(k):.10f}")

# and predicts every other (m, n) to near machine precision
print(f"max Petersson residual for k=12, m,n <= 20: {verify_petersson(12, 20, fit_cap=1):.2e}")
