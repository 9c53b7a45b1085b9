"""The smoothed double square moment, spectrally and through Petersson's formula.

Spectral side:

    K1 K2 sum_{k1, k2 even} g0((k1-K1)/L1) g0((k2-K2)/L2)
          sum_f sum_g omega_f omega_g |S_X(f, g; alpha, beta)|^2

Geometric side: insert Petersson's formula for each weight and expand into
the diagonal-diagonal term D00, the two mixed terms D01 / D10 and the
Kloosterman-Kloosterman term D11.  D11 is evaluated as

    K1 K2 sum_{m,n} conj(v_m) B1(m,n) B2(m,n) v_n,   v_n = e(alpha n^beta) phi(n/X),
    Bj(m,n) = 2 pi sum_k g0((k-Kj)/Lj) i^k sum_c S(m,n;c)/c J_{k-1}(4 pi sqrt(mn)/c),

which is the quadruple (m, n, c1, c2) sum regrouped so that each c-sum is
done once per weight.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from ._numerics import csum, e
from .coeffs import cusp_dimension, eigenforms
from .errors import CapacityError, DomainError, RegimeError
from .petersson import harmonic_weights, kloosterman_bessel_sums
from .resonance import support_range
from .weights import g0, phi

DEFAULT_EPS = 0.1
DEFAULT_ACCURACY = 14
MAX_DIM = 2


@dataclass(frozen=True)
class MomentWindow:
    K1: float
    L1: float
    K2: float
    L2: float
    X: float
    alpha: float
    beta: float
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        for name in ("K1", "L1", "K2", "L2", "X"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not 0 < self.beta <= 1:
            raise DomainError("beta must lie in (0, 1]")
        if self.alpha == 0:
            raise DomainError("alpha must be nonzero")

    def weights(self, j: int):
        """Even weights k with g0((k - K)/L) > 0 and their g0 values."""
        K, L = (self.K1, self.L1) if j == 1 else (self.K2, self.L2)
        lo = math.floor(K - L) - 1
        hi = math.ceil(K + L) + 1
        ks = [k for k in range(max(lo, 2), hi + 1) if k % 2 == 0]
        out = [(k, float(g0((k - K) / L))) for k in ks]
        return [(k, w) for k, w in out if w > 0]


@dataclass
class MomentBreakdown:
    D00: complex
    D01: complex
    D10: complex
    D11: complex
    spectral: float | None = None
    seconds: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def total(self) -> complex:
        return self.D00 + self.D01 + self.D10 + self.D11

    @property
    def residual(self) -> float | None:
        if self.spectral is None:
            return None
        return abs(self.spectral - self.total)

    @property
    def relative_residual(self) -> float | None:
        if self.spectral is None:
            return None
        return self.residual / abs(self.spectral) if self.spectral else self.residual

    def as_dict(self):
        d = {}
        for name in ("D00", "D01", "D10", "D11"):
            v = getattr(self, name)
            d[name] = {"re": v.real, "im": v.imag}
        d["total"] = {"re": self.total.real, "im": self.total.imag}
        d["spectral"] = self.spectral
        d["residual"] = self.residual
        d["relative_residual"] = self.relative_residual
        d["seconds"] = self.seconds
        d.update(self.meta)
        return d


def _forms_and_weights(k: int, N: int, max_dim: int):
    d = cusp_dimension(k)
    if d == 0:
        return [], np.zeros(0)
    if d > max_dim:
        raise CapacityError(f"weight {k} has dimension {d} > cap {max_dim}")
    forms = eigenforms(k, max(N, 2 * d))
    P = 1
    while P * (P + 1) // 2 < d:
        P += 1
    hw = harmonic_weights(k, P, forms=forms)
    return forms, hw.omega


def moment_spectral(w: MomentWindow, max_dim: int = MAX_DIM) -> float:
    """K1 K2 sum g0 g0 sum_f sum_g omega_f omega_g |S_X(f, g)|^2."""
    n = support_range(w.X)
    if n.size == 0:
        return 0.0
    ks1, ks2 = w.weights(1), w.weights(2)
    N = int(n[-1])
    v = e(w.alpha * n.astype(float) ** w.beta) * phi(n / w.X)
    cache = {}
    for k, _ in ks1 + ks2:
        if k not in cache:
            cache[k] = _forms_and_weights(k, N, max_dim)
    terms = []
    for k1, g1 in ks1:
        F, om1 = cache[k1]
        for k2, g2 in ks2:
            G, om2 = cache[k2]
            for f, of in zip(F, om1):
                for g, og in zip(G, om2):
                    S = csum(f.lam[n] * g.lam[n] * v)
                    terms.append(g1 * g2 * of * og * abs(S) ** 2)
    return w.K1 * w.K2 * math.fsum(terms)


def _bessel_kernels(w: MomentWindow, n: np.ndarray, A: float):
    ks1, ks2 = w.weights(1), w.weights(2)
    allk = sorted({k for k, _ in ks1 + ks2})
    if any(k < 4 for k in allk):
        raise DomainError("weight windows must stay at k >= 4 for Petersson's formula")
    P = kloosterman_bessel_sums(n, n, allk, A) if allk else {}

    def kernel(ks):
        B = np.zeros((n.size, n.size))
        for k, gk in ks:
            B = B + gk * (-1) ** (k // 2) * P[k]
        return 2 * math.pi * B

    return ks1, ks2, kernel(ks1), kernel(ks2)


def moment_geometric(w: MomentWindow, A: float = DEFAULT_ACCURACY,
                     with_spectral: bool = False, max_dim: int = MAX_DIM) -> MomentBreakdown:
    """D00, D01, D10, D11 by direct summation; optionally also the spectral side."""
    t0 = time.perf_counter()
    n = support_range(w.X)
    if n.size == 0 or not w.weights(1) or not w.weights(2):
        br = MomentBreakdown(0j, 0j, 0j, 0j)
        if with_spectral:
            br.spectral = 0.0
        br.seconds = time.perf_counter() - t0
        return br
    ks1, ks2, B1, B2 = _bessel_kernels(w, n, A)
    G1 = math.fsum(g for _, g in ks1)
    G2 = math.fsum(g for _, g in ks2)
    ph2 = phi(n / w.X) ** 2
    KK = w.K1 * w.K2
    D00 = KK * G1 * G2 * csum(ph2)
    D01 = KK * G1 * csum(ph2 * np.diag(B2))
    D10 = KK * G2 * csum(ph2 * np.diag(B1))
    v = e(w.alpha * n.astype(float) ** w.beta) * phi(n / w.X)
    D11 = KK * csum(np.conj(v)[:, None] * (B1 * B2) * v[None, :])
    br = MomentBreakdown(complex(D00), complex(D01), complex(D10), complex(D11))
    br.meta = {"weights1": [k for k, _ in ks1], "weights2": [k for k, _ in ks2]}
    if with_spectral:
        br.spectral = moment_spectral(w, max_dim)
    br.seconds = time.perf_counter() - t0
    return br


# Bound shapes of the main theorem.  Each entry: hypotheses (name, predicate)
# and the right-hand side as a function of the window.
def _thm_regimes():
    def standing(w):
        ok = True
        for K, L in ((w.K1, w.L1), (w.K2, w.L2)):
            ok = ok and K**w.eps <= L <= K ** (1 - w.eps)
        return ok

    def X(w, p):
        return w.X ** p

    return {
        "large_windows": (
            [("K_j^eps <= L_j <= K_j^(1-eps)", standing),
             ("0 < beta < 1 or beta = 1", lambda w: True),
             ("K1 L1 >= X^(1+eps)", lambda w: w.K1 * w.L1 >= X(w, 1 + w.eps)),
             ("K2 >= X^(1/2+eps)", lambda w: w.K2 >= X(w, 0.5 + w.eps))],
            lambda w: w.K1 * w.L1 * w.K2 * w.L2 * X(w, 1 + w.eps)),
        "large_first_small_second": (
            [("K_j^eps <= L_j <= K_j^(1-eps)", standing),
             ("K1 L1 >= X^(1+eps)", lambda w: w.K1 * w.L1 >= X(w, 1 + w.eps)),
             ("K2 <= X^(1/2)", lambda w: w.K2 <= X(w, 0.5))],
            lambda w: (w.K1 * w.L1 * w.K2 * w.L2 * X(w, 1 + w.eps)
                       + w.K1 * w.L1 * w.L2 / w.K2 * X(w, 1.5 + w.eps))),
        "equal_centers": (
            [("K_j^eps <= L_j <= K_j^(1-eps)", standing),
             ("0 < beta < 1", lambda w: w.beta < 1),
             ("K1 L1, K2 L2 <= X^(1+eps)",
              lambda w: max(w.K1 * w.L1, w.K2 * w.L2) <= X(w, 1 + w.eps)),
             ("K1 = K2", lambda w: w.K1 == w.K2),
             ("K1^2 L1 L2 >= X^(1+beta+eps)",
              lambda w: w.K1**2 * w.L1 * w.L2 >= X(w, 1 + w.beta + w.eps))],
            lambda w: w.K1**2 * w.L1 * w.L2 * X(w, 1 + w.eps) + X(w, 3 + w.eps) / w.K1),
        "equal_centers_linear_phase": (
            [("K_j^eps <= L_j <= K_j^(1-eps)", standing),
             ("beta = 1", lambda w: w.beta == 1),
             ("K1 L1, K2 L2 <= X^(1-eps)",
              lambda w: max(w.K1 * w.L1, w.K2 * w.L2) <= X(w, 1 - w.eps)),
             ("K1 = K2", lambda w: w.K1 == w.K2)],
            lambda w: min(w.L1, w.L2) * w.K1 * X(w, 2 + w.eps) + X(w, 3 + w.eps) / w.K1),
    }


THEOREM_REGIMES = tuple(_thm_regimes())


def check_regime(w: MomentWindow, which: str) -> None:
    regimes = _thm_regimes()
    if which not in regimes:
        raise DomainError(f"unknown regime {which!r}; choose from {', '.join(regimes)}")
    for name, pred in regimes[which][0]:
        if not pred(w):
            raise RegimeError(f"regime {which!r}: hypothesis {name} fails at "
                              f"K1={w.K1}, L1={w.L1}, K2={w.K2}, L2={w.L2}, X={w.X}")


def theorem_bound_report(w: MomentWindow, which: str, Xs=None, A: float = DEFAULT_ACCURACY):
    """Rows (X, measured moment, bound right-hand side, ratio) over a grid of X.

    The measured value is the geometric total D00 + D01 + D10 + D11, which
    equals the spectral side and needs no eigenforms.  Every X is checked
    against the regime hypotheses first.
    """
    Xs = [w.X] if Xs is None else list(Xs)
    rows = []
    for X in Xs:
        wx = replace(w, X=float(X))
        check_regime(wx, which)
        total = moment_geometric(wx, A).total.real
        rhs = _thm_regimes()[which][1](wx)
        rows.append((float(X), total, rhs, total / rhs))
    return rows
