"""Fourier coefficients of Hecke eigenforms for SL2(Z).

Weights with a one-dimensional cusp space are realized exactly as
Delta * E4**a * E6**b.  Larger spaces go through the Miller basis, the
Hecke operator T2 acting on it, and a high-precision eigendecomposition; those
tables are floating point and flagged ``exact=False``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from ._numerics import fmt_float
from .errors import CapacityError, DiagonalizationError, DomainError
from .series import IntegerSeries

# default cap on the number of coefficients generated in one table
MAX_COEFFICIENTS = 1 << 21

# relative gap below which two T2 eigenvalues count as clustered
EIGENVALUE_GAP_TOL = 1e-12


def cusp_dimension(k: int) -> int:
    """dim S_k(SL2(Z)) for even k >= 0."""
    if k % 2 or k < 0:
        return 0
    if k % 12 == 2:
        return k // 12 - 1
    return k // 12


def modular_dimension(k: int) -> int:
    """dim M_k(SL2(Z))."""
    if k % 2 or k < 0:
        return 0
    return k // 12 + (0 if k % 12 == 2 else 1)


def _check_length(n: int):
    if n > MAX_COEFFICIENTS + 1:
        raise CapacityError(f"{n} coefficients requested, cap is {MAX_COEFFICIENTS}")


def delta_expansion(N: int) -> IntegerSeries:
    """q-expansion of Delta = q prod (1 - q^n)^24 through q^N (length N + 1).

    Uses eta^3 = sum (-1)^n (2n+1) q^{n(n+1)/2} (up to q^{1/8}), so that
    Delta = q * (eta^3 series)^8, i.e. three exact squarings.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    _check_length(N + 1)
    length = N  # P^8 needed through q^(N-1)
    terms = []
    n = 0
    while n * (n + 1) // 2 < length:
        terms.append((n * (n + 1) // 2, (-1) ** n * (2 * n + 1)))
        n += 1
    p = IntegerSeries.from_terms(terms, length)
    p8 = p.square().square().square()
    return IntegerSeries((0,) + p8.coeffs)


def divisor_sigma_table(N: int, k: int) -> list[int]:
    """sigma_k(n) for 0 <= n <= N (sigma_k(0) = 0)."""
    if N <= 1 or (N ** k) * 2 < 2**62:
        s = np.zeros(N + 1, dtype=np.int64)
        for d in range(1, N + 1):
            s[d::d] += d**k
        return s.tolist()
    s = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d**k
        for m in range(d, N + 1, d):
            s[m] += dk
    return s


def eisenstein(k: int, N: int) -> IntegerSeries:
    """E4 = 1 + 240 sum sigma_3(n) q^n or E6 = 1 - 504 sum sigma_5(n) q^n, through q^N."""
    if k not in (4, 6):
        raise DomainError(f"unsupported Eisenstein weight {k}")
    _check_length(N + 1)
    c = 240 if k == 4 else -504
    sig = divisor_sigma_table(N, k - 1)
    return IntegerSeries((1,) + tuple(c * s for s in sig[1:]))


def _ab_for(r: int) -> tuple[int, int]:
    """Exponents with 4a + 6b = r (r even, r != 2)."""
    if r % 4 == 0:
        return r // 4, 0
    return (r - 6) // 4, 1


def _monomial(j: int, k: int, length: int, delta: IntegerSeries, e4: IntegerSeries,
              e6: IntegerSeries) -> IntegerSeries:
    a, b = _ab_for(k - 12 * j)
    out = delta ** j if j else IntegerSeries.one(length)
    if a:
        out = out * e4 ** a
    if b:
        out = out * e6
    return out


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients a(n) and normalized eigenvalues lambda(n) = a(n) / n^((k-1)/2).

    Arrays are indexed by n, with entry 0 unused (zero).  ``exact`` is False
    when the table comes from a numerical eigendecomposition.
    """

    weight: int
    N: int
    a: Sequence
    lam: np.ndarray = field(default=None, repr=False)
    exact: bool = True
    label: str = ""

    def __post_init__(self):
        if len(self.a) != self.N + 1:
            raise ValueError("coefficient array must have length N + 1")

    def write_csv(self, path) -> None:
        """Columns n, a_n, lambda_n; integers decimal, floats with 17 significant digits."""
        lam = self.lam if self.lam is not None else normalize(self).lam
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "a_n", "lambda_n"])
            for n in range(1, self.N + 1):
                a = self.a[n]
                a_txt = str(int(a)) if self.exact else fmt_float(a)
                w.writerow([n, a_txt, fmt_float(lam[n])])


def _lambda_exact(a: int, n: int, k: int) -> float:
    # a / n^((k-1)/2) with one rounding for the rational part
    half, odd = divmod(k - 1, 2)
    val = float(Fraction(a, n**half))
    return val / math.sqrt(n) if odd else val


def normalize(table: CoefficientTable) -> CoefficientTable:
    """Fill ``lam`` from ``a``."""
    k = table.weight
    lam = np.zeros(table.N + 1)
    if table.exact:
        for n in range(1, table.N + 1):
            lam[n] = _lambda_exact(table.a[n], n, k)
    else:
        n = np.arange(1, table.N + 1, dtype=float)
        lam[1:] = np.asarray(table.a[1:], dtype=float) / n ** ((k - 1) / 2)
    return CoefficientTable(k, table.N, table.a, lam, table.exact, table.label)


def _miller_basis(k: int, length: int) -> list[IntegerSeries]:
    """Echelonized cusp-form basis f_i = q^i + O(q^{d+1}), i = 1..d."""
    d = cusp_dimension(k)
    delta = delta_expansion(length - 1)
    e4 = eisenstein(4, length - 1)
    e6 = eisenstein(6, length - 1)
    rows = [_monomial(j, k, length, delta, e4, e6) for j in range(1, d + 1)]
    for i in range(d - 2, -1, -1):
        for j in range(i + 1, d):
            c = rows[i][j + 1]
            if c:
                rows[i] = rows[i] - rows[j].scale(c)
    return rows


def hecke_t2_matrix(basis: Sequence[IntegerSeries], k: int) -> list[list[int]]:
    """Matrix M with T2 f_i = sum_j M[i][j] f_j on a Miller basis."""
    d = len(basis)
    M = []
    for f in basis:
        row = []
        for j in range(1, d + 1):
            v = f[2 * j]
            if j % 2 == 0:
                v += 2 ** (k - 1) * f[j // 2]
            row.append(v)
        M.append(row)
    return M


def eigenforms(k: int, N: int, dps: int = 60) -> list[CoefficientTable]:
    """Normalized Hecke eigenforms of weight k with coefficients a(1..N)."""
    if k % 2 or k < 12:
        if k % 2 == 0 and 0 < k < 12:
            return []
        raise DomainError(f"weight must be even and >= 12, got {k}")
    d = cusp_dimension(k)
    if d == 0:
        return []
    if d == 1:
        length = N + 1
        a, b = _ab_for(k - 12)
        f = delta_expansion(N)
        if a:
            f = f * eisenstein(4, N) ** a
        if b:
            f = f * eisenstein(6, N)
        return [normalize(CoefficientTable(k, N, f.coeffs, exact=True, label=f"{k}.0"))]

    length = max(N, 2 * d) + 1
    basis = _miller_basis(k, length)
    M = hecke_t2_matrix(basis, k)
    with mpmath.workdps(dps):
        MT = mpmath.matrix([[M[j][i] for j in range(d)] for i in range(d)])
        vals, vecs = mpmath.eig(MT)
        vals = [mpmath.re(v) for v in vals]
        scale = max(abs(v) for v in vals)
        order = sorted(range(d), key=lambda i: vals[i])
        for x, y in zip(order, order[1:]):
            if abs(vals[y] - vals[x]) <= EIGENVALUE_GAP_TOL * scale:
                raise DiagonalizationError(f"T2 eigenvalues clustered in weight {k}")
        tables = []
        for idx, i in enumerate(order):
            c = [mpmath.re(vecs[r, i]) for r in range(d)]
            c = [x / c[0] for x in c]
            lam = np.zeros(N + 1)
            a = np.zeros(N + 1)
            for n in range(1, N + 1):
                an = mpmath.fsum(c[r] * basis[r][n] for r in range(d))
                a[n] = float(an)
                lam[n] = float(an / mpmath.power(n, mpmath.mpf(k - 1) / 2))
            tables.append(CoefficientTable(k, N, a, lam, exact=False, label=f"{k}.{idx}"))
    return tables
