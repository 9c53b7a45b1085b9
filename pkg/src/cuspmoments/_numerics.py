"""Small numerical helpers: additive characters, compensated sums, Gauss-Legendre panels."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


def e(x):
    """Additive character e(x) = exp(2 pi i x).

    The integer part is removed before exponentiating so that large phases keep
    their fractional accuracy.
    """
    x = np.asarray(x, dtype=float)
    return np.exp(2j * np.pi * (x - np.round(x)))


def _real_csum(x: np.ndarray) -> float:
    if x.size <= 4096:
        return math.fsum(x.tolist())
    # Neumaier-compensated sums down 1024 columns, then an exact sum of the columns
    width = 1024
    pad = (-x.size) % width
    rows = np.concatenate([x, np.zeros(pad)]).reshape(-1, width)
    s = rows[0].copy()
    comp = np.zeros(width)
    for r in rows[1:]:
        t = s + r
        comp += np.where(np.abs(s) >= np.abs(r), (s - t) + r, (r - t) + s)
        s = t
    return math.fsum(s.tolist() + comp.tolist())


def csum(values) -> float | complex:
    """Compensated sum of a real or complex array (Neumaier per component)."""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(_real_csum(arr.real.ravel()), _real_csum(arr.imag.ravel()))
    return _real_csum(arr.ravel().astype(float))


@lru_cache(maxsize=64)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def gl_panels(a: float, b: float, npanels: int, order: int = 20):
    """Nodes and weights of composite Gauss-Legendre on ``npanels`` equal panels of [a, b]."""
    x, w = _leggauss(order)
    edges = np.linspace(a, b, npanels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def gl_breaks(breaks, order: int = 20):
    """Composite Gauss-Legendre on the panels delimited by the sorted array ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = _leggauss(order)
    half = 0.5 * np.diff(breaks)
    mid = 0.5 * (breaks[:-1] + breaks[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def fmt_float(x: float) -> str:
    """17 significant digits, scientific notation."""
    return f"{float(x):.16e}"


class Accumulator:
    """Elementwise Neumaier-compensated running sum of equally shaped arrays.

    The reduction order is the order of ``add`` calls, so results do not
    depend on how the terms were produced.
    """

    def __init__(self, shape, dtype=float):
        self.s = np.zeros(shape, dtype=dtype)
        self.comp = np.zeros(shape, dtype=dtype)

    def add(self, x):
        x = np.asarray(x)
        t = self.s + x
        if np.iscomplexobj(t):
            big = np.abs(self.s.real) >= np.abs(x.real)
            cr = np.where(big, (self.s.real - t.real) + x.real, (x.real - t.real) + self.s.real)
            big = np.abs(self.s.imag) >= np.abs(x.imag)
            ci = np.where(big, (self.s.imag - t.imag) + x.imag, (x.imag - t.imag) + self.s.imag)
            self.comp = self.comp + (cr + 1j * ci)
        else:
            big = np.abs(self.s) >= np.abs(x)
            self.comp = self.comp + np.where(big, (self.s - t) + x, (x - t) + self.s)
        self.s = t

    @property
    def value(self):
        return self.s + self.comp
