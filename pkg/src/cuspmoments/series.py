"""Truncated power series with exact integer coefficients.

Products are formed with number-theoretic transforms modulo several primes
below 2**31 (so residue products fit in uint64) and reassembled with Garner's
form of the Chinese remainder theorem.  Results do not depend on how many
primes are used, only on their product exceeding twice the coefficient bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError

# (prime, primitive root, 2-adic valuation of p - 1)
NTT_PRIMES = (
    (2013265921, 31, 27),
    (469762049, 3, 26),
    (1811939329, 13, 26),
    (167772161, 3, 25),
    (2113929217, 5, 25),
    (1107296257, 10, 25),
    (1711276033, 29, 25),
    (754974721, 11, 24),
    (998244353, 3, 23),
)

# coefficient count above which multiplication refuses to run
MAX_LENGTH = 1 << 22

SCHOOLBOOK_CUTOFF = 64


@lru_cache(maxsize=None)
def _twiddles(p: int, g: int, n: int, inverse: bool) -> np.ndarray:
    """Powers w**j, j < n/2, of a primitive n-th root of unity mod p."""
    w = pow(g, (p - 1) // n, p)
    if inverse:
        w = pow(w, p - 2, p)
    half = n // 2
    out = np.ones(max(half, 1), dtype=np.uint64)
    filled = 1
    step = w
    while filled < half:
        take = min(filled, half - filled)
        out[filled:filled + take] = out[:take] * np.uint64(step) % np.uint64(p)
        filled += take
        step = step * step % p
    out.flags.writeable = False
    return out


def _ntt_forward(a: np.ndarray, p: int, g: int) -> np.ndarray:
    # decimation in frequency; output is in bit-reversed order
    n = a.size
    P = np.uint64(p)
    W = _twiddles(p, g, n, False)
    length = n
    while length >= 2:
        half = length // 2
        blocks = a.reshape(-1, length)
        u = blocks[:, :half]
        v = blocks[:, half:]
        w = W[:: n // length][:half]
        s = u + v
        d = u + (P - v)
        blocks[:, :half] = np.minimum(s, s - P)
        blocks[:, half:] = d * w % P
        length = half
    return a


def _ntt_inverse(a: np.ndarray, p: int, g: int) -> np.ndarray:
    # decimation in time; input bit-reversed, output natural order
    n = a.size
    P = np.uint64(p)
    W = _twiddles(p, g, n, True)
    length = 2
    while length <= n:
        half = length // 2
        blocks = a.reshape(-1, length)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * W[:: n // length][:half] % P
        s = u + v
        d = u + (P - v)
        blocks[:, :half] = np.minimum(s, s - P)
        blocks[:, half:] = np.minimum(d, d - P)
        length *= 2
    ninv = np.uint64(pow(n, p - 2, p))
    return a * ninv % P


def _residues(coeffs: Sequence[int], p: int) -> np.ndarray:
    try:
        arr = np.asarray(coeffs, dtype=np.int64)
    except OverflowError:
        arr = np.array([c % p for c in coeffs], dtype=np.int64)
    return (arr % p).astype(np.uint64)


def _convolve_mod(a: Sequence[int], b: Sequence[int], length: int, p: int, g: int) -> np.ndarray:
    size = 1
    while size < 2 * length:
        size *= 2
    fa = np.zeros(size, dtype=np.uint64)
    fa[: min(len(a), length)] = _residues(a[:length], p)
    fa = _ntt_forward(fa, p, g)
    if a is b:
        fb = fa
    else:
        fb = np.zeros(size, dtype=np.uint64)
        fb[: min(len(b), length)] = _residues(b[:length], p)
        fb = _ntt_forward(fb, p, g)
    prod = fa * fb % np.uint64(p)
    return _ntt_inverse(prod, p, g)[:length]


def _choose_primes(bound: int, log2size: int):
    target = 2 * bound + 1
    chosen = []
    modulus = 1
    for p, g, v in NTT_PRIMES:
        if v < log2size:
            continue
        chosen.append((p, g))
        modulus *= p
        if modulus > target:
            return chosen
    raise CapacityError("coefficient bound exceeds the available CRT modulus")


def _garner(residues: list[np.ndarray], primes: list[int]) -> list[int]:
    """Signed integers from residues modulo pairwise coprime primes."""
    digits = []
    for i, (r, p) in enumerate(zip(residues, primes)):
        P = np.uint64(p)
        t = r.astype(np.uint64) % P
        for j in range(i):
            inv = np.uint64(pow(primes[j] % p, p - 2, p))
            t = (t + (P - digits[j] % P)) % P * inv % P
        digits.append(t)
    modulus = 1
    for p in primes:
        modulus *= p
    if modulus < (1 << 62) and len(primes) <= 2:
        val = digits[-1].astype(np.int64)
        for j in range(len(primes) - 2, -1, -1):
            val = val * np.int64(primes[j]) + digits[j].astype(np.int64)
        val = np.where(val > modulus // 2, val - modulus, val)
        return val.tolist()
    val = digits[-1].astype(object)
    for j in range(len(primes) - 2, -1, -1):
        val = val * primes[j] + digits[j].astype(object)
    half = modulus // 2
    return [int(v - modulus) if v > half else int(v) for v in val]


def _schoolbook(a: Sequence[int], b: Sequence[int], length: int) -> list[int]:
    out = [0] * length
    for i, ai in enumerate(a[:length]):
        if ai == 0:
            continue
        for j in range(min(len(b), length - i)):
            out[i + j] += ai * b[j]
    return out


def convolve(a: Sequence[int], b: Sequence[int], length: int) -> list[int]:
    """First ``length`` coefficients of the exact product of two integer sequences."""
    if length > MAX_LENGTH:
        raise CapacityError(f"series length {length} exceeds cap {MAX_LENGTH}")
    if min(len(a), len(b), length) <= SCHOOLBOOK_CUTOFF:
        return _schoolbook(a, b, length)
    same = a is b
    a = list(a[:length])
    b = a if same else list(b[:length])
    amax = max(abs(x) for x in a)
    bmax = max(abs(x) for x in b)
    asum = sum(abs(x) for x in a)
    bsum = sum(abs(x) for x in b)
    bound = min(amax * bsum, bmax * asum)
    if bound == 0:
        return [0] * length
    log2size = max(1, (2 * length - 1).bit_length())
    primes = _choose_primes(bound, log2size)
    residues = [_convolve_mod(a, b, length, p, g) for p, g in primes]
    return _garner(residues, [p for p, _ in primes])


@dataclass(frozen=True)
class IntegerSeries:
    """Power series sum_{i < N} c_i q^i with exact integer coefficients."""

    coeffs: tuple

    def __post_init__(self):
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], length: int) -> "IntegerSeries":
        out = [0] * length
        for i, c in terms:
            if 0 <= i < length:
                out[i] += c
        return cls(tuple(out))

    @classmethod
    def one(cls, length: int) -> "IntegerSeries":
        return cls.from_terms([(0, 1)], length)

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _check(self, other: "IntegerSeries"):
        if not isinstance(other, IntegerSeries):
            return NotImplemented
        if other.length != self.length:
            raise ValueError("series lengths differ")
        return None

    def __add__(self, other):
        if (r := self._check(other)) is not None:
            return r
        return IntegerSeries(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if (r := self._check(other)) is not None:
            return r
        return IntegerSeries(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return IntegerSeries(tuple(-x for x in self.coeffs))

    def scale(self, k: int) -> "IntegerSeries":
        return IntegerSeries(tuple(k * x for x in self.coeffs))

    def shift(self, k: int) -> "IntegerSeries":
        """Multiply by q**k (k >= 0), keeping the length."""
        n = self.length
        return IntegerSeries((0,) * min(k, n) + self.coeffs[: max(n - k, 0)])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if (r := self._check(other)) is not None:
            return r
        b = self.coeffs if other is self else other.coeffs
        return IntegerSeries(tuple(convolve(self.coeffs, b, self.length)))

    __rmul__ = __mul__

    def square(self) -> "IntegerSeries":
        return IntegerSeries(tuple(convolve(self.coeffs, self.coeffs, self.length)))

    def __pow__(self, k: int) -> "IntegerSeries":
        if k < 0:
            raise ValueError("negative power")
        result = IntegerSeries.one(self.length)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base.square()
        return result
