import math

import pytest

from cuspmoments.coeffs import eigenforms


@pytest.fixture(scope="session")
def delta_table():
    return eigenforms(12, 10_000)[0]


def primes_upto(n):
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [i for i in range(n + 1) if sieve[i]]
