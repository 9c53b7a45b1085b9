"""Bessel functions J_nu(x) of integer order for large orders and arguments.

Three regimes:

* ascending power series, summed relative to its first term, for small x or
  for x well below the order (where the series does not cancel);
* Miller's backward recurrence normalized by J_0 + 2 sum J_2k = 1 in between;
* Hankel's large-argument expansion for x >= 10 nu^2 + 1000.

``bessel_j_oracle`` evaluates Bessel's integral by composite Gauss-Legendre
and shares no code with the above.
"""
from __future__ import annotations

import math

import numpy as np

from ._numerics import _leggauss
from .errors import AccuracyError, CapacityError, DomainError

MAX_ORDER = 5000
# Miller start orders beyond this are refused (cost is linear in the order)
MAX_START_ORDER = 2_000_000
FLUSH = 1e-300
SERIES_X = 12.0
# series is also used while (x/2)^2 <= SERIES_RATIO * (nu + 1); larger ratios cancel
SERIES_RATIO = 4.0
HANKEL_A = 10.0
HANKEL_B = 1000.0

_RESCALE_EXP = 800
_RESCALE_AT = 2.0**_RESCALE_EXP


def regime(nu: int, x: float) -> str:
    """Which evaluation method ``bessel_j`` uses at (nu, x)."""
    if x <= SERIES_X or (x <= nu / 3 and x * x / 4 <= SERIES_RATIO * (nu + 1)):
        return "series"
    if x >= HANKEL_A * nu * nu + HANKEL_B:
        return "hankel"
    return "miller"


def _check(nu, x):
    if int(nu) != nu or nu < 0:
        raise DomainError(f"order must be a non-negative integer, got {nu}")
    if nu > MAX_ORDER:
        raise CapacityError(f"order {nu} exceeds cap {MAX_ORDER}")
    if np.any(np.isnan(x)):
        raise DomainError("NaN argument")
    if np.any(np.asarray(x) < 0):
        raise DomainError("argument must be non-negative")


def _flush(v):
    return np.where(np.abs(v) < FLUSH, np.copysign(0.0, v), v)


def _series(nu: int, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    if not np.all(pos):
        out[~pos] = 1.0 if nu == 0 else 0.0
    if not np.any(pos):
        return out
    xp = x[pos]
    z = -(xp * 0.5) ** 2
    term = np.ones_like(xp)
    total = np.ones_like(xp)
    k = 0
    while True:
        k += 1
        term = term * z / (k * (k + nu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)) and k > 2:
            break
        if k > 500:
            break
    with np.errstate(divide="ignore"):
        logfirst = nu * np.log(xp * 0.5) - math.lgamma(nu + 1)
    out[pos] = total * np.exp(logfirst)
    return out


def _start_order(nu: int, x: float) -> int:
    m = max(nu, x)
    n = int(m + 30 + 12 * m ** (1 / 3)) + 2
    return n + (n & 1)


def _miller(nu: int, x: np.ndarray) -> np.ndarray:
    """Backward recurrence for a batch of arguments sharing one start order."""
    N = _start_order(nu, float(np.max(x)))
    if N > MAX_START_ORDER:
        raise CapacityError(f"recurrence start order {N} exceeds cap")
    jp1 = np.zeros_like(x)
    jn = np.full_like(x, 1e-300)
    norm = np.zeros_like(x)
    shifts = np.zeros(x.shape, dtype=np.int64)
    rec = np.zeros_like(x)
    rec_shift = np.zeros(x.shape, dtype=np.int64)
    inv_x = 2.0 / x
    n = N
    # invariant: jn holds order n, jp1 order n + 1
    while True:
        if n == nu:
            rec = jn.copy()
            rec_shift = shifts.copy()
        if n % 2 == 0:
            norm += jn if n == 0 else 2.0 * jn
        if n == 0:
            break
        jm1 = n * inv_x * jn - jp1
        jp1, jn = jn, jm1
        n -= 1
        big = np.abs(jn) > _RESCALE_AT
        if np.any(big):
            jn = np.where(big, np.ldexp(jn, -_RESCALE_EXP), jn)
            jp1 = np.where(big, np.ldexp(jp1, -_RESCALE_EXP), jp1)
            norm = np.where(big, np.ldexp(norm, -_RESCALE_EXP), norm)
            shifts += big
    rm, re_ = np.frexp(rec)
    nm, ne = np.frexp(norm)
    expo = re_ - ne - _RESCALE_EXP * (shifts - rec_shift)
    expo = np.maximum(expo, -1100)
    return np.ldexp(rm / nm, expo)


def _miller_scalar(nu: int, x: float) -> float:
    N = _start_order(nu, x)
    if N > MAX_START_ORDER:
        raise CapacityError(f"recurrence start order {N} exceeds cap")
    jp1, jn = 0.0, 1e-300
    norm = 0.0
    shifts = 0
    rec, rec_shift = 0.0, 0
    inv_x = 2.0 / x
    n = N
    while True:
        if n == nu:
            rec, rec_shift = jn, shifts
        if n % 2 == 0:
            norm += jn if n == 0 else 2.0 * jn
        if n == 0:
            break
        jp1, jn = jn, n * inv_x * jn - jp1
        n -= 1
        if abs(jn) > _RESCALE_AT:
            jn = math.ldexp(jn, -_RESCALE_EXP)
            jp1 = math.ldexp(jp1, -_RESCALE_EXP)
            norm = math.ldexp(norm, -_RESCALE_EXP)
            shifts += 1
    rm, re_ = math.frexp(rec)
    nm, ne = math.frexp(norm)
    expo = max(re_ - ne - _RESCALE_EXP * (shifts - rec_shift), -1100)
    return math.ldexp(rm / nm, expo)


def _hankel(nu: int, x: np.ndarray) -> np.ndarray:
    mu = 4.0 * nu * nu
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    term = np.ones_like(x)
    k = 0
    prev = np.full_like(x, np.inf)
    while k < 60:
        k += 1
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        if np.all(mag < 1e-17) or np.all(mag > prev):
            break
        prev = mag
        # a_k / x^k enters P (k even) or Q (k odd) with sign (-1)^floor(k/2)
        sgn = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            Q = Q + sgn * term
        else:
            P = P + sgn * term
    # chi = x - (2 nu + 1) pi / 4, the shift reduced exactly mod 2 pi
    phase = ((2 * nu + 1) % 8) * (math.pi / 4)
    c, s = np.cos(x), np.sin(x)
    cp, sp = math.cos(phase), math.sin(phase)
    cos_chi = c * cp + s * sp
    sin_chi = s * cp - c * sp
    return np.sqrt(2.0 / (math.pi * x)) * (P * cos_chi - Q * sin_chi)


def bessel_j(nu: int, x):
    """J_nu(x) for integer nu >= 0 and x >= 0; ``x`` may be a scalar or an array."""
    nu = int(nu) if int(nu) == nu else nu
    _check(nu, x)
    if np.isscalar(x) or np.ndim(x) == 0:
        xf = float(x)
        r = regime(nu, xf)
        if r == "miller":
            val = _miller_scalar(nu, xf)
        elif r == "series":
            val = float(_series(nu, np.array([xf]))[0])
        else:
            val = float(_hankel(nu, np.array([xf]))[0])
        return math.copysign(0.0, val) if abs(val) < FLUSH else val
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty_like(flat)
    ser = (flat <= SERIES_X) | ((flat <= nu / 3) & (flat * flat / 4 <= SERIES_RATIO * (nu + 1)))
    han = ~ser & (flat >= HANKEL_A * nu * nu + HANKEL_B)
    mil = ~ser & ~han
    if np.any(ser):
        out[ser] = _series(nu, flat[ser])
    if np.any(han):
        out[han] = _hankel(nu, flat[han])
    if np.any(mil):
        idx = np.nonzero(mil)[0]
        xs = flat[idx]
        order = np.argsort(xs)
        idx, xs = idx[order], xs[order]
        # batch arguments whose start orders are within ~25% of each other
        start = 0
        while start < xs.size:
            top = xs[start] * 1.25 + 20
            stop = int(np.searchsorted(xs, top, side="right"))
            stop = max(stop, start + 1)
            out[idx[start:stop]] = _miller(nu, xs[start:stop])
            start = stop
    return _flush(out).reshape(x.shape)


def bessel_j_oracle(nu: int, x: float, tol: float = 1e-13, max_panels: int = 1 << 18) -> float:
    """(1/pi) int_0^pi cos(nu t - x sin t) dt by panel-doubling Gauss-Legendre."""
    if math.isnan(x) or x < 0 or nu < 0:
        raise DomainError("oracle needs nu >= 0 and finite x >= 0")
    gx, gw = _leggauss(24)

    def rule(npan):
        edges = np.linspace(0.0, math.pi, npan + 1)
        half = 0.5 * (edges[1] - edges[0])
        t = (0.5 * (edges[:-1] + edges[1:])[:, None] + half * gx[None, :]).ravel()
        w = np.tile(half * gw, npan)
        return math.fsum(w * np.cos(nu * t - x * np.sin(t))) / math.pi

    npan = max(4, int((nu + x) / 6) + 4)
    prev = rule(npan)
    while npan <= max_panels:
        npan *= 2
        cur = rule(npan)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise AccuracyError(f"Bessel oracle did not converge at nu={nu}, x={x}")


def truncation_cutoff(nu: int, A: float, amax: float | None = None):
    """Largest x* with (x*/2)^nu / nu! = 10^-A, hence |J_nu(x)| < 10^-A for x < x*.

    Returns x*, or (x*, c_min) with c_min = amax / x* when ``amax`` is given:
    every c >= c_min has argument amax / c <= x*.
    """
    if nu < 1:
        raise DomainError("truncation cutoff needs nu >= 1")
    logx = math.log(2.0) + (math.lgamma(nu + 1) - A * math.log(10.0)) / nu
    xstar = math.exp(logx)
    if amax is None:
        return xstar
    return xstar, amax / xstar


def kb_tail_bound(nu: int, amax: float, C: float) -> float:
    """Bound for 2 pi sum_{c > C} |S(m,n,c)|/c |J_nu(amax/c)|.

    Uses |S| <= c and |J_nu(x)| <= (x/2)^nu / nu!, then compares the c-sum
    with an integral: the result is 2 pi (amax/2)^nu C^(1-nu) / (nu! (nu-1)).
    """
    if nu < 2:
        raise DomainError("tail bound needs nu >= 2")
    logb = (math.log(2 * math.pi) + nu * math.log(amax / 2) - math.lgamma(nu + 1)
            - math.log(nu - 1) + (1 - nu) * math.log(C))
    return math.exp(logb)


def kb_c_cap(nu: int, amax: float, A: float, cap: int = 200_000) -> int:
    """Smallest integer C with kb_tail_bound(nu, amax, C) < 10^-A."""
    if amax <= 0:
        return 1
    logc = (math.log(2 * math.pi) + nu * math.log(amax / 2) - math.lgamma(nu + 1)
            - math.log(nu - 1) + A * math.log(10.0)) / (nu - 1)
    C = max(1, math.ceil(math.exp(logc)))
    if C > cap:
        raise AccuracyError(f"c-sum needs {C} terms for 1e-{A}, cap is {cap}")
    return C
