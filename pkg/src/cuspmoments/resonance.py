"""Resonance sums sum lambda_f(n) [lambda_g(n)] e(alpha n^beta) phi(n/X), peak scans and exponent fits."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._numerics import csum, e
from .errors import CoverageError, DomainError, FitError
from .weights import phi

PEAK_FACTOR = 5.0


@dataclass(frozen=True)
class ResonanceParams:
    alpha: float
    beta: float
    X: float

    def __post_init__(self):
        if self.alpha == 0 or not math.isfinite(self.alpha):
            raise DomainError("alpha must be a nonzero real")
        if not 0 < self.beta <= 1:
            raise DomainError("beta must lie in (0, 1]")
        if not self.X > 0:
            raise DomainError("X must be positive")


def support_range(X: float) -> np.ndarray:
    """Integers n with X < n < 2X (the support of phi(n/X))."""
    lo = math.floor(X) + 1
    hi = math.ceil(2 * X) - 1
    return np.arange(lo, hi + 1, dtype=np.int64) if hi >= lo else np.zeros(0, dtype=np.int64)


def _coverage(table, n):
    if n.size and table.N < n[-1]:
        raise CoverageError(f"table of weight {table.weight} stops at {table.N}, need {n[-1]}")


def _weighted(n, p: ResonanceParams):
    return e(p.alpha * n.astype(float) ** p.beta) * phi(n / p.X)


def resonance_sum_single(f, p: ResonanceParams) -> complex:
    """sum_{X<n<2X} lambda_f(n) e(alpha n^beta) phi(n/X)."""
    n = support_range(p.X)
    if n.size == 0:
        return 0j
    _coverage(f, n)
    return complex(csum(f.lam[n] * _weighted(n, p)))


def resonance_sum_pair(f, g, p: ResonanceParams) -> complex:
    """sum_{X<n<2X} lambda_f(n) lambda_g(n) e(alpha n^beta) phi(n/X)."""
    n = support_range(p.X)
    if n.size == 0:
        return 0j
    _coverage(f, n)
    _coverage(g, n)
    return complex(csum(f.lam[n] * g.lam[n] * _weighted(n, p)))


def trivial_bound(f, g, X: float) -> float:
    """sum |lambda_f lambda_g| max phi over the support (phi peaks at e^-4)."""
    n = support_range(X)
    if n.size == 0:
        return 0.0
    lam = np.abs(f.lam[n]) if g is None else np.abs(f.lam[n] * g.lam[n])
    return math.fsum(lam) * math.exp(-4)


@dataclass
class ScanRow:
    alpha: float
    value: complex
    peak: bool = False

    @property
    def magnitude(self):
        return abs(self.value)


def find_peaks(mags, factor: float = PEAK_FACTOR) -> np.ndarray:
    """Indices of local maxima exceeding ``factor`` times the median."""
    mags = np.asarray(mags, dtype=float)
    if mags.size < 3:
        return np.zeros(0, dtype=int)
    med = np.median(mags)
    inner = (mags[1:-1] > mags[:-2]) & (mags[1:-1] >= mags[2:]) & (mags[1:-1] > factor * med)
    return np.nonzero(inner)[0] + 1


def resonance_scan(f, g, beta: float, alphas, X: float, factor: float = PEAK_FACTOR):
    """One ScanRow per alpha; g=None scans the single-form sum."""
    alphas = [float(a) for a in alphas]
    if not alphas:
        return []
    n = support_range(X)
    _coverage(f, n)
    coef = f.lam[n]
    if g is not None:
        _coverage(g, n)
        coef = coef * g.lam[n]
    coef = coef * phi(n / X)
    nb = n.astype(float) ** beta
    rows = []
    for a in alphas:
        if a == 0:
            raise DomainError("alpha must be nonzero")
        rows.append(ScanRow(a, complex(csum(coef * e(a * nb)))))
    for i in find_peaks([r.magnitude for r in rows], factor):
        rows[i].peak = True
    return rows


@dataclass
class FitResult:
    slope: float
    stderr: float
    intercept: float
    points: int


def exponent_fit(Xs, sums) -> FitResult:
    """OLS slope of log|S| against log X; zero sums are dropped."""
    Xs = np.asarray(Xs, dtype=float)
    mags = np.abs(np.asarray(sums))
    keep = (mags > 0) & (Xs > 0)
    if keep.sum() < 4:
        raise FitError(f"{int(keep.sum())} usable points, need at least 4")
    r = stats.linregress(np.log(Xs[keep]), np.log(mags[keep]))
    return FitResult(float(r.slope), float(r.stderr), float(r.intercept), int(keep.sum()))
