"""Bessel window sums W, their stationary-phase main term, and the second derivative test.

    python demos/oscillatory_integrals.py
"""
from cuspmoments.oscillatory import (PhaseContext, d11_preset, quadratic_preset, v_from_w, v_sum,
                                     w_main_term, w_pair)

K, L = 40, 10
# V as a sum over weights agrees with its integral form
for x in (60.0, 600.0):
    print(f"x={x}: V direct {v_sum(K, L, x):.12f}, from W {v_from_w(K, L, x):.12f}")

# above x ~ K the integral is governed by one stationary point
for x in (2000.0, 20000.0):
    W, _ = w_pair(K, L, x)
    M = w_main_term(K, L, 1, x)
    print(f"x={x:7.0f}: W = {W:.6e}, main term {M:.6e}, x|W - main|/L^2 = {abs(W - M) * x / L**2:.4f}")

# the second derivative test on a model phase, then on the D11 integrand
for N in (10, 10.5, 100.5, 1000.5):
    r = quadratic_preset(N)
    print(f"N(u^2+v^2), N={N}: |I| = {r.measured:.3e}, bound {r.bound:.3e}, ratio {r.ratio:.3f}")
ctx = PhaseContext(u=100.0, v=100.0, c1=1, c2=1, d=1, eta1=1, eta2=1, K1=40, K2=40, m=-3, n=-1,
                   alpha=1.0, beta=1.0, L1=10, L2=10)
rep = d11_preset(ctx, 100.0)
print(f"J at X=100: {rep.measured:.4e}, bound {rep.bound:.4e}, kappa {rep.kappa:.2e}, ratio {rep.ratio:.3f}")
