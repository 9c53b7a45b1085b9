"""Smooth weights: the cutoff phi on (1, 2), the test function g0 on (-1, 1) and g0's transform.

Both bumps have the form exp(-q(t)) with q a sum of simple poles at the
endpoints, so derivatives come from closed-form derivatives of q:

    f'    = -q' f
    f''   = (q'^2 - q'') f
    f'''  = (-q'^3 + 3 q' q'' - q''') f
    f'''' = (q'^4 - 6 q'^2 q'' + 3 q''^2 + 4 q' q''' - q'''') f

The transform is g0_hat(y) = int g0(t) e(-y t) dt with e(x) = exp(2 pi i x).
"""
from __future__ import annotations

import math

import numpy as np

from ._numerics import gl_panels
from .errors import DomainError, RangeError

MAX_ORDER = 4
# exp(-q) is exactly zero in double precision beyond this
_Q_UNDERFLOW = 745.0


def _combine(q, dq, order):
    f = np.exp(-q)
    if order == 0:
        return f
    q1 = dq[0]
    if order == 1:
        return -q1 * f
    q2 = dq[1]
    if order == 2:
        return (q1 * q1 - q2) * f
    q3 = dq[2]
    if order == 3:
        return (-q1**3 + 3 * q1 * q2 - q3) * f
    q4 = dq[3]
    return (q1**4 - 6 * q1 * q1 * q2 + 3 * q2 * q2 + 4 * q1 * q3 - q4) * f


def _pole_weight(t, a, b, sa, sb, shift, order):
    """exp(-q) with q = sa/(t - a) + sb/(b - t) + shift on (a, b), zero elsewhere."""
    if order < 0 or order > MAX_ORDER or int(order) != order:
        raise DomainError(f"derivative order must be in 0..{MAX_ORDER}")
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    inside = (t > a) & (t < b)
    if np.any(inside):
        ti = t[inside]
        ra = 1.0 / (ti - a)
        rb = 1.0 / (b - ti)
        q = sa * ra + sb * rb + shift
        ok = q < _Q_UNDERFLOW
        ra, rb, q = ra[ok], rb[ok], q[ok]
        # d^j/dt^j of 1/(t-a) is (-1)^j j! /(t-a)^(j+1); of 1/(b-t) it is j!/(b-t)^(j+1)
        dq = [math.factorial(j) * (sa * (-1) ** j * ra ** (j + 1) + sb * rb ** (j + 1))
              for j in range(1, order + 1)]
        vals = np.zeros(inside.sum())
        vals[ok] = _combine(q, dq, order)
        out[inside] = vals
    return float(out[0]) if scalar else out


def phi(t, order: int = 0):
    """phi(t) = exp(-1/((t-1)(2-t))) on (1, 2), zero outside, or its derivative."""
    return _pole_weight(t, 1.0, 2.0, 1.0, 1.0, 0.0, order)


def g0(t, order: int = 0):
    """g0(t) = exp(-t^2/(1-t^2)) on (-1, 1), zero outside, or its derivative.

    t^2/(1-t^2) = -1 + (1/(1-t) + 1/(1+t))/2, a pole form like phi's.
    """
    return _pole_weight(t, -1.0, 1.0, 0.5, 0.5, -1.0, order)


class SmoothWeight:
    """A named bump with derivatives up to order 4."""

    def __init__(self, kind: str):
        if kind not in ("phi", "g0"):
            raise DomainError(f"unknown weight kind {kind!r}")
        self.kind = kind
        self.support = (1.0, 2.0) if kind == "phi" else (-1.0, 1.0)
        self._f = phi if kind == "phi" else g0

    def __call__(self, t, order: int = 0):
        return self._f(t, order)

    def __repr__(self):
        return f"SmoothWeight({self.kind!r})"


def g0_hat_direct(y, order=0, npanels: int = 96, nodes: int = 24):
    """Transform derivative d^l/dy^l int g0(t) e(-y t) dt by composite Gauss-Legendre.

    By evenness of g0 the value is real:
      l even: (-1)^(l/2) (2 pi)^l 2 int_0^1 t^l g0(t) cos(2 pi y t) dt
      l odd:  (-1)^((l+1)/2) (2 pi)^l 2 int_0^1 t^l g0(t) sin(2 pi y t) dt

    ``order`` may be a list, in which case the result has one column per order.
    """
    orders = [order] if np.ndim(order) == 0 else list(order)
    if any(o < 0 or o > MAX_ORDER for o in orders):
        raise DomainError(f"order must be in 0..{MAX_ORDER}")
    t, w = gl_panels(0.0, 1.0, npanels, nodes)
    gw = 2.0 * w * g0(t)
    y = np.atleast_1d(np.asarray(y, dtype=float)).ravel()
    out = np.empty((y.size, len(orders)))
    even = [i for i, o in enumerate(orders) if o % 2 == 0]
    odd = [i for i, o in enumerate(orders) if o % 2]
    B = np.stack([(-1) ** ((o + 1) // 2) * (2 * math.pi) ** o * t**o * gw for o in orders], axis=1)
    for s in range(0, y.size, 1024):
        arg = 2 * math.pi * y[s:s + 1024, None] * t[None, :]
        if even:
            out[s:s + 1024, even] = np.cos(arg) @ B[:, even]
        if odd:
            out[s:s + 1024, odd] = np.sin(arg) @ B[:, odd]
    return out[:, 0] if np.ndim(order) == 0 else out


class G0Transform:
    """g0_hat and its first two derivatives on [-y_max, y_max] by quintic Hermite interpolation.

    Values and two further derivatives are tabulated on a uniform grid over
    y >= 0; negative y use evenness, g0_hat^(l)(-y) = (-1)^l g0_hat^(l)(y).
    """

    def __init__(self, y_max: float = 200.0, step: float = 0.0125):
        self.y_max = float(y_max)
        self.step = float(step)
        self._tab = None

    def _build(self):
        n = int(math.ceil(self.y_max / self.step))
        grid = np.arange(n + 1) * self.step
        self._tab = g0_hat_direct(grid, list(range(MAX_ORDER + 1)))

    def _hermite(self, ay, order):
        # quintic Hermite on the cell [y_i, y_i + h] from value, slope and curvature at both ends
        h = self.step
        i = np.minimum((ay / h).astype(np.int64), self._tab.shape[0] - 2)
        s = ay / h - i
        s2 = s * s
        s3 = s2 * s
        s4 = s3 * s
        s5 = s4 * s
        f = self._tab[:, order:order + 3]
        a, b = f[i], f[i + 1]
        return (a[..., 0] * (1 - 10 * s3 + 15 * s4 - 6 * s5)
                + h * a[..., 1] * (s - 6 * s3 + 8 * s4 - 3 * s5)
                + h * h * a[..., 2] * 0.5 * (s2 - 3 * s3 + 3 * s4 - s5)
                + b[..., 0] * (10 * s3 - 15 * s4 + 6 * s5)
                + h * b[..., 1] * (-4 * s3 + 7 * s4 - 3 * s5)
                + h * h * b[..., 2] * 0.5 * (s3 - 2 * s4 + s5))

    def __call__(self, y, order: int = 0):
        if order not in (0, 1, 2):
            raise DomainError("cached transform supports derivative orders 0, 1, 2")
        if self._tab is None:
            self._build()
        scalar = np.ndim(y) == 0
        y = np.asarray(y, dtype=float)
        ay = np.abs(y)
        if np.any(ay > self.y_max):
            raise RangeError(f"|y| up to {float(ay.max())} exceeds cached range {self.y_max}")
        vals = self._hermite(ay, order)
        if order % 2:
            vals = np.where(y < 0, -vals, vals)
        return float(vals) if scalar else vals

    def decay_radius(self, tol: float = 1e-16) -> float:
        """Smallest Y on the grid with |g0_hat(y)| < tol for all cached y >= Y."""
        grid = np.arange(0.0, self.y_max, self.step)
        v = np.abs(self(grid))
        above = np.nonzero(v >= tol)[0]
        if above.size == 0:
            return 0.0
        if above[-1] + 1 >= grid.size:
            return self.y_max
        return float(grid[above[-1] + 1])


_DEFAULT = G0Transform()


def g0_hat(y, order: int = 0):
    """g0_hat^(order)(y) from the shared cache (range |y| <= 200)."""
    return _DEFAULT(y, order)


def default_transform() -> G0Transform:
    return _DEFAULT
