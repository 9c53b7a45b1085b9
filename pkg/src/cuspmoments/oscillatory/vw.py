"""The Bessel window sum V and its oscillatory-integral form W.

    V_{K,L}(x)  = sum_{k even} i^k g0((k - K)/L) J_{k-1}(x)
    W_{K,L}(ex) = int g0_hat(t) e(-(K-1) t/L - (e x/2 pi) cos(2 pi t/L)) dt,   e = +-1

Jacobi-Anger gives W(ex) = sum_n (-i e)^n J_n(x) g0((n - K + 1)/L) exactly,
and from it V(x) = (W(x) - W(-x)) / 2i.  The stated relation with W(x) and
W(-x) exchanged equals -V; ``v_from_w_stated`` keeps it for comparison.

Stationary phase at t0 = gamma = (e L/2 pi) arcsin((K-1)/x) gives the main term

    e(e/8) L g0_hat(gamma) / (sqrt(2 pi) (x^2 - (K-1)^2)^(1/4))
        * e(-(e/2 pi) sqrt(x^2 - (K-1)^2) - (e (K-1)/2 pi) arcsin((K-1)/x)).
"""
from __future__ import annotations

import math

import numpy as np

from .._numerics import _leggauss, e
from ..bessel import bessel_j
from ..errors import AccuracyError, DomainError
from ..weights import default_transform, g0

W_TOL = 1e-10
# panel width in cycles of the fastest oscillation
CYCLES_PER_PANEL = 3.0
ORDER_HI = 24
ORDER_LO = 16
MAX_REFINE = 3
_CHUNK = 1 << 20

_ranges = {}


def _check_window(K, L):
    if not L > 0:
        raise DomainError("L must be positive")
    if not math.isfinite(K):
        raise DomainError("K must be finite")


def integration_radius(tol: float = W_TOL) -> float:
    """T with int_{|t| > T} |g0_hat| < tol / 10, read off the cached transform."""
    if tol not in _ranges:
        tr = default_transform()
        grid = np.arange(0.0, tr.y_max, tr.step)
        v = np.abs(tr(grid))
        # tail mass from the right by the trapezoid rule, doubled for both sides
        tail = 2 * np.concatenate([np.cumsum((0.5 * (v[1:] + v[:-1]) * tr.step)[::-1])[::-1], [0.0]])
        ok = np.nonzero(tail < tol / 10)[0]
        _ranges[tol] = float(grid[ok[0]]) if ok.size else tr.y_max
    return _ranges[tol]


def _w_both(K, L, x, order, width, T):
    """(W(x), W(-x)) by composite Gauss-Legendre on panels of the given width."""
    gx, gw = _leggauss(order)
    npan = max(1, int(math.ceil(2 * T / width)))
    h = 2 * T / npan
    tr = default_transform()
    plus = []
    minus = []
    per = max(1, _CHUNK // order)
    for s in range(0, npan, per):
        left = -T + h * np.arange(s, min(s + per, npan))
        t = ((left + 0.5 * h)[:, None] + 0.5 * h * gx[None, :]).ravel()
        w = np.tile(0.5 * h * gw, left.size)
        base = w * tr(t) * e(-(K - 1) * t / L)
        osc = e(-(x / (2 * math.pi)) * np.cos(2 * math.pi * t / L))
        plus.append(np.sum(base * osc))
        minus.append(np.sum(base * np.conj(osc)))
    return complex(sum(plus)), complex(sum(minus))


def w_pair(K: float, L: float, x: float, tol: float = W_TOL):
    """(W_{K,L}(x), W_{K,L}(-x)) sharing nodes and transform values."""
    _check_window(K, L)
    if x < 0 or not math.isfinite(x):
        raise DomainError("x must be finite and non-negative")
    T = integration_radius(tol)
    fmax = (abs(K - 1) + x) / L + 1.0
    width = min(1.0, CYCLES_PER_PANEL / fmax)
    for _ in range(MAX_REFINE + 1):
        hi = _w_both(K, L, x, ORDER_HI, width, T)
        lo = _w_both(K, L, x, ORDER_LO, width, T)
        err = max(abs(hi[0] - lo[0]), abs(hi[1] - lo[1]))
        if err <= tol:
            return hi
        width *= 0.5
    raise AccuracyError(f"W quadrature did not reach {tol:g} at K={K}, L={L}, x={x} (estimate {err:.3g})")


def w_integral(K: float, L: float, eta: int, x: float, tol: float = W_TOL) -> complex:
    """W_{K,L}(eta x) by panel quadrature over |t| <= integration_radius(tol)."""
    if eta not in (1, -1):
        raise DomainError("eta must be +1 or -1")
    p, m = w_pair(K, L, x, tol)
    return p if eta == 1 else m


def _j_any(n: int, x: float) -> float:
    # J_{-n} = (-1)^n J_n
    return bessel_j(abs(n), x) * (-1 if n < 0 and n % 2 else 1)


def v_sum(K: float, L: float, x: float) -> complex:
    """sum over even k with |k - K| < L of i^k g0((k - K)/L) J_{k-1}(x)."""
    _check_window(K, L)
    if x < 0:
        raise DomainError("x must be non-negative")
    lo = math.floor(K - L)
    hi = math.ceil(K + L)
    total = 0j
    for k in range(lo - lo % 2, hi + 1, 2):
        gk = g0((k - K) / L)
        if gk == 0:
            continue
        total += (1j) ** (k % 4) * gk * _j_any(k - 1, x)
    return total


def w_jacobi_anger(K: float, L: float, eta: int, x: float) -> complex:
    """W(eta x) = sum_n (-i eta)^n J_n(x) g0((n - K + 1)/L), a finite sum."""
    _check_window(K, L)
    if eta not in (1, -1):
        raise DomainError("eta must be +1 or -1")
    lo = math.floor(K - 1 - L)
    hi = math.ceil(K - 1 + L)
    total = 0j
    for n in range(lo, hi + 1):
        gn = g0((n - K + 1) / L)
        if gn == 0:
            continue
        total += (-1j * eta) ** (n % 4) * gn * _j_any(n, x)
    return total


def v_from_w(K: float, L: float, x: float, tol: float = W_TOL) -> complex:
    """(W(x) - W(-x)) / 2i, equal to v_sum."""
    p, m = w_pair(K, L, x, tol)
    return (p - m) / 2j


def v_from_w_stated(K: float, L: float, x: float, tol: float = W_TOL) -> complex:
    """(W(-x) - W(x)) / 2i, the relation with the opposite sign (equals -V)."""
    p, m = w_pair(K, L, x, tol)
    return (m - p) / 2j


def w_main_term(K: float, L: float, eta: int, x: float) -> complex:
    """Leading stationary-phase term of W(eta x); needs x > K - 1."""
    _check_window(K, L)
    if eta not in (1, -1):
        raise DomainError("eta must be +1 or -1")
    if not x > K - 1 or x <= 0:
        raise DomainError(f"main term needs x > K - 1, got x={x}, K={K}")
    r = math.sqrt((x - (K - 1)) * (x + (K - 1)))
    asn = math.asin((K - 1) / x)
    gamma = eta * L * asn / (2 * math.pi)
    amp = L * default_transform()(gamma) / (math.sqrt(2 * math.pi) * math.sqrt(r))
    ph = eta / 8 - eta * r / (2 * math.pi) - eta * (K - 1) * asn / (2 * math.pi)
    return complex(amp * e(ph))


def w_main_term_stated(K: float, L: float, eta: int, x: float) -> complex:
    """The main term with amplitude 1/(eta pi)^(1/2) and phase -(eta/2) sqrt(x^2 - (K-1)^2), for comparison."""
    _check_window(K, L)
    if not x > K - 1 or x <= 0:
        raise DomainError(f"main term needs x > K - 1, got x={x}, K={K}")
    r = math.sqrt((x - (K - 1)) * (x + (K - 1)))
    asn = math.asin((K - 1) / x)
    gamma = eta * L * asn / (2 * math.pi)
    amp = L * default_transform()(gamma) / (np.sqrt(complex(eta)) * math.sqrt(math.pi) * math.sqrt(r))
    ph = 1 / 8 - eta * r / 2 - eta * (K - 1) * asn / (2 * math.pi)
    return complex(amp * e(ph))
