"""Petersson's trace formula: geometric side, harmonic weights and L(1, Sym^2 f).

The geometric side is

    delta(m, n) + 2 pi i^k sum_c S(m, n; c)/c J_{k-1}(4 pi sqrt(mn)/c)

with the c-sum cut where a rigorous tail bound (|S| <= c and the first-term
Bessel bound) drops below 10^-A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import Accumulator
from .arith import kloosterman_matrix
from .bessel import bessel_j, kb_c_cap
from .coeffs import cusp_dimension, eigenforms
from .errors import ConditioningError, DomainError

DEFAULT_ACCURACY = 14
COND_LIMIT = 1e12


def _check_weight(k: int):
    if k % 2 or k < 2:
        raise DomainError(f"weight must be even and positive, got {k}")


def kloosterman_bessel_sums(ms, ns, ks, A: float = DEFAULT_ACCURACY, c_cap: int | None = None):
    """sum_c S(m, n; c)/c J_{k-1}(4 pi sqrt(mn)/c) for every m in ms, n in ns, k in ks.

    Returns a dict k -> array of shape (len(ms), len(ns)).  Kloosterman sums
    are computed once per c and shared by all weights.  ``c_cap`` overrides
    the tail-bound cutoff (used to check truncation stability).
    """
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    ks = [int(k) for k in ks]
    for k in ks:
        _check_weight(k)
    if np.any(ms < 1) or np.any(ns < 1):
        raise DomainError("m and n must be positive")
    root = np.sqrt(ms[:, None].astype(float) * ns[None, :])
    amax = 4 * math.pi * float(root.max()) if root.size else 0.0
    caps = {k: (c_cap if c_cap is not None else kb_c_cap(k - 1, amax, A)) for k in ks}
    acc = {k: Accumulator(root.shape) for k in ks}
    for c in range(1, max(caps.values(), default=0) + 1):
        S = kloosterman_matrix(ms, ns, c) / c
        x = 4 * math.pi * root / c
        for k in ks:
            if c <= caps[k]:
                acc[k].add(S * bessel_j(k - 1, x))
    return {k: acc[k].value for k in ks}


def geometric_matrix(ms, ns, k: int, A: float = DEFAULT_ACCURACY, c_cap: int | None = None):
    """Geometric side for all pairs (m, n) in ms x ns."""
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    P = kloosterman_bessel_sums(ms, ns, [k], A, c_cap)[k]
    delta = (ms[:, None] == ns[None, :]).astype(float)
    return delta + 2 * math.pi * (-1) ** (k // 2) * P


def geometric_side(m: int, n: int, k: int, A: float = DEFAULT_ACCURACY) -> float:
    """delta(m,n) + 2 pi i^k sum_c S(m,n;c)/c J_{k-1}(4 pi sqrt(mn)/c), truncated at tail < 10^-A."""
    if m < 1 or n < 1:
        raise DomainError("m and n must be positive")
    return float(geometric_matrix([m], [n], k, A)[0, 0])


@dataclass
class HarmonicWeight:
    weight: int
    omega: np.ndarray
    residual: float
    labels: tuple = ()


def _pairs(P: int):
    return [(m, n) for m in range(1, P + 1) for n in range(m, P + 1)]


def harmonic_weights(k: int, pair_cap: int = 1, A: float = DEFAULT_ACCURACY,
                     forms=None) -> HarmonicWeight:
    """Least-squares omega_f from sum_f omega_f lambda_f(m) lambda_f(n) = geometric side, m <= n <= P."""
    d = cusp_dimension(k)
    if d < 1:
        raise DomainError(f"no cusp forms of weight {k}")
    forms = forms if forms is not None else eigenforms(k, max(pair_cap, 2))
    pairs = _pairs(pair_cap)
    idx = np.arange(1, pair_cap + 1)
    G = geometric_matrix(idx, idx, k, A)
    rhs = np.array([G[m - 1, n - 1] for m, n in pairs])
    M = np.array([[f.lam[m] * f.lam[n] for f in forms] for m, n in pairs])
    if M.shape[0] < M.shape[1]:
        raise ConditioningError(f"{M.shape[0]} equations for {M.shape[1]} weights")
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ConditioningError(f"harmonic weight system has condition number {cond:.3g}")
    omega, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    res = float(np.max(np.abs(M @ omega - rhs)))
    return HarmonicWeight(k, omega, res, tuple(f.label for f in forms))


def sym_square_L1(k: int, index: int = 0, pair_cap: int | None = None,
                  A: float = DEFAULT_ACCURACY) -> float:
    """L(1, Sym^2 f) = 2 pi^2 / ((k - 1) omega_f)."""
    P = pair_cap if pair_cap is not None else max(1, cusp_dimension(k))
    hw = harmonic_weights(k, P, A)
    return 2 * math.pi**2 / ((k - 1) * float(hw.omega[index]))


def petersson_table(k: int, mn_cap: int, fit_cap: int | None = None,
                    A: float = DEFAULT_ACCURACY):
    """Rows (m, n, spectral, geometric, |difference|) for 1 <= m, n <= mn_cap.

    The weights are fitted on pairs m <= n <= fit_cap only (default: the
    smallest cap giving at least as many equations as eigenforms).
    """
    d = cusp_dimension(k)
    if d < 1:
        raise DomainError(f"no cusp forms of weight {k}")
    if fit_cap is None:
        fit_cap = 1
        while len(_pairs(fit_cap)) < d:
            fit_cap += 1
    forms = eigenforms(k, max(mn_cap, fit_cap, 2))
    hw = harmonic_weights(k, fit_cap, A, forms=forms)
    idx = np.arange(1, mn_cap + 1)
    G = geometric_matrix(idx, idx, k, A)
    lam = np.array([f.lam[1:mn_cap + 1] for f in forms])
    spec = np.einsum("f,fm,fn->mn", hw.omega, lam, lam)
    rows = []
    for m in range(1, mn_cap + 1):
        for n in range(1, mn_cap + 1):
            s, g = spec[m - 1, n - 1], G[m - 1, n - 1]
            rows.append((m, n, float(s), float(g), abs(float(s - g))))
    return rows, hw


def verify_petersson(k: int, mn_cap: int, fit_cap: int | None = None,
                     A: float = DEFAULT_ACCURACY, m_min: int = 1) -> float:
    """max over m_min <= m, n <= mn_cap of |sum_f omega_f lambda_f(m) lambda_f(n) - geometric side|."""
    rows, _ = petersson_table(k, mn_cap, fit_cap, A)
    return max(r[4] for r in rows if r[0] >= m_min and r[1] >= m_min)
