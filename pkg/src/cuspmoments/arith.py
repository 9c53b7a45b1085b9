"""Modular arithmetic: inverses, Kloosterman sums and congruence counts."""
from __future__ import annotations

import csv
import math
from functools import lru_cache

import numpy as np

from ._numerics import fmt_float
from .errors import CapacityError, DomainError

# largest combined modulus accepted by count_lattice_solutions
LATTICE_MODULUS_CAP = 10**6


def mod_inverse(z: int, c: int) -> int | None:
    """z^{-1} mod c, or None when gcd(z, c) > 1."""
    if c < 1:
        raise DomainError("modulus must be positive")
    if c == 1:
        return 0
    try:
        return pow(z, -1, c)
    except ValueError:
        return None


@lru_cache(maxsize=None)
def totient(c: int) -> int:
    out = c
    p = 2
    m = c
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def divisor_count(n: int) -> int:
    count = 0
    i = 1
    while i * i <= n:
        if n % i == 0:
            count += 1 if i * i == n else 2
        i += 1
    return count


def _powmod(base: np.ndarray, exp: int, c: int) -> np.ndarray:
    # elementwise base**exp mod c; safe while c**2 < 2**63
    out = np.ones_like(base)
    b = base % c
    while exp:
        if exp & 1:
            out = out * b % c
        b = b * b % c
        exp >>= 1
    return out


@lru_cache(maxsize=4096)
def unit_table(c: int) -> tuple[np.ndarray, np.ndarray]:
    """Units z mod c and their inverses, as two int64 arrays.

    For c = 1 the single residue 0 is returned with inverse 0, which makes
    every Kloosterman sum with c = 1 equal to 1.
    """
    if c < 1:
        raise DomainError("modulus must be positive")
    if c == 1:
        z = np.zeros(1, dtype=np.int64)
        return z, z
    if c > 3_000_000_000:
        raise CapacityError("modulus too large for the int64 inverse table")
    z = np.arange(1, c, dtype=np.int64)
    z = z[np.gcd(z, c) == 1]
    zinv = _powmod(z, totient(c) - 1, c)
    z.flags.writeable = False
    zinv.flags.writeable = False
    return z, zinv


def kloosterman(m: int, n: int, c: int) -> float:
    """S(m, n; c) = sum over units z mod c of cos(2 pi (m z + n zbar) / c)."""
    if c < 1:
        raise DomainError("Kloosterman modulus must be >= 1")
    if c == 1:
        return 1.0
    z, zinv = unit_table(c)
    r = (int(m % c) * z + int(n % c) * zinv) % c
    return math.fsum(np.cos(2.0 * np.pi * r / c))


def kloosterman_complex(m: int, n: int, c: int) -> complex:
    """The complex form of the sum, used to audit that it is real."""
    if c == 1:
        return 1.0 + 0.0j
    z, zinv = unit_table(c)
    r = (int(m % c) * z + int(n % c) * zinv) % c
    ang = 2.0 * np.pi * r / c
    return complex(math.fsum(np.cos(ang)), math.fsum(np.sin(ang)))


def kloosterman_matrix(ms, ns, c: int) -> np.ndarray:
    """S(m_i, n_j; c) for all pairs, as Re(E F^T) with E = e(m z / c), F = e(n zbar / c).

    Accuracy is that of a BLAS dot product (a few ulp times sqrt(phi(c))),
    not the correctly rounded sum of ``kloosterman``.
    """
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    if c == 1:
        return np.ones((ms.size, ns.size))
    z, zinv = unit_table(c)
    E = np.exp(2j * np.pi * ((ms[:, None] % c) * z[None, :] % c) / c)
    F = np.exp(2j * np.pi * ((ns[:, None] % c) * zinv[None, :] % c) / c)
    return (E @ F.T).real


def weil_bound(m: int, n: int, c: int) -> float:
    """d(c) sqrt(c) sqrt(gcd(m, n, c))."""
    return divisor_count(c) * math.sqrt(c) * math.sqrt(math.gcd(math.gcd(m, n), c))


def count_quadratic_congruence(c: int, eta: int) -> int:
    """Number of units z mod c with z + zbar = 2 eta (mod c), by brute force."""
    if c < 1:
        raise DomainError("modulus must be positive")
    if eta not in (1, -1):
        raise DomainError("eta must be +1 or -1")
    if c == 1:
        return 1
    z, zinv = unit_table(c)
    return int(np.count_nonzero((z + zinv - 2 * eta) % c == 0))


def _count_in_class(r: np.ndarray, Q: int, tau: float) -> np.ndarray:
    # number of integers t with |t| <= tau and t = r (mod Q)
    T = math.floor(tau)
    lo = -T
    first = lo + (r - lo) % Q
    return np.where(first <= T, (T - first) // Q + 1, 0)


def count_lattice_solutions(c1: int, c2: int, d: int, tau: float) -> int:
    """Brute-force count of (z1, z2, m, n) in the z1, z2, m, n sums after Poisson summation.

    z_j runs over units mod d c_j, |m|, |n| <= tau, and
    m = -c2 z1 - c1 z2, n = -c2 z1bar - c1 z2bar (mod c1 c2 d), with z_j bar
    the inverse mod d c_j.
    """
    if min(c1, c2, d) < 1:
        raise DomainError("c1, c2, d must be positive")
    if math.gcd(c1, c2) != 1:
        raise DomainError("c1 and c2 must be coprime")
    if tau < 0:
        raise DomainError("tau must be non-negative")
    Q = c1 * c2 * d
    if d * c1 * d * c2 > LATTICE_MODULUS_CAP:
        raise CapacityError(f"modulus product {d * c1 * d * c2} exceeds cap")
    z1, z1i = unit_table(d * c1)
    z2, z2i = unit_table(d * c2)
    rm = (-c2 * z1[:, None] - c1 * z2[None, :]) % Q
    rn = (-c2 * z1i[:, None] - c1 * z2i[None, :]) % Q
    return int(np.sum(_count_in_class(rm, Q, tau) * _count_in_class(rn, Q, tau)))


def lattice_bound_stated(c1: int, c2: int, d: int, tau: float) -> float:
    """d (2 tau + 1) ([tau / (c1 c2 d)] + 1), the bound as usually quoted."""
    return d * (2 * tau + 1) * (math.floor(tau / (c1 * c2 * d)) + 1)


def lattice_bound(c1: int, c2: int, d: int, tau: float) -> float:
    """d (2 tau + 1) ([2 tau / (c1 c2 d)] + 1).

    Once m, z1, z2 are fixed, n lies in one residue class mod c1 c2 d, and an
    interval of length 2 tau holds at most [2 tau / (c1 c2 d)] + 1 of those.
    """
    return d * (2 * tau + 1) * (math.floor(2 * tau / (c1 * c2 * d)) + 1)


def write_weil_audit(rows, path) -> None:
    """CSV with columns m,n,c,value."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "n", "c", "value"])
        for m, n, c, val in rows:
            w.writerow([m, n, c, fmt_float(val)])
