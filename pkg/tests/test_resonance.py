import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cuspmoments.coeffs import eigenforms
from cuspmoments.errors import CoverageError, DomainError, FitError
from cuspmoments.resonance import (ResonanceParams, exponent_fit, find_peaks, resonance_scan, resonance_sum_pair,
                                   resonance_sum_single, support_range, trivial_bound)
from cuspmoments.weights import phi


@pytest.fixture(scope="module")
def delta():
    return eigenforms(12, 1 << 14)[0]


def test_params_validation():
    with pytest.raises(DomainError):
        ResonanceParams(0.0, 0.5, 10)
    with pytest.raises(DomainError):
        ResonanceParams(1.0, 0.0, 10)
    with pytest.raises(DomainError):
        ResonanceParams(1.0, 1.5, 10)
    with pytest.raises(DomainError):
        ResonanceParams(1.0, 0.5, -1)


def test_support_range():
    assert support_range(0.4).size == 0
    assert list(support_range(3)) == [4, 5]
    assert list(support_range(2.5)) == [3, 4]


def test_empty_support(delta):
    p = ResonanceParams(2.0, 0.5, 0.4)
    assert resonance_sum_single(delta, p) == 0
    assert resonance_sum_pair(delta, delta, p) == 0


def test_direct_sum(delta):
    p = ResonanceParams(1.3, 0.5, 100)
    ref = sum(delta.lam[n] * np.exp(2j * math.pi * 1.3 * n**0.5) * phi(n / 100) for n in range(101, 200))
    assert resonance_sum_single(delta, p) == pytest.approx(ref, abs=1e-12)


@given(st.floats(0.1, 10), st.sampled_from([0.25, 0.5, 1.0]), st.floats(10, 3000))
@settings(max_examples=30, deadline=None)
def test_conjugate_symmetry(alpha, beta, X):
    f = eigenforms(12, 6001)[0]
    s = resonance_sum_single(f, ResonanceParams(alpha, beta, X))
    t = resonance_sum_single(f, ResonanceParams(-alpha, beta, X))
    assert t == pytest.approx(s.conjugate(), abs=1e-10)


def test_trivial_bound(delta):
    for X in (50.0, 500.0, 5000.0):
        for a in (0.7, 4.0):
            s = resonance_sum_pair(delta, delta, ResonanceParams(a, 0.25, X))
            assert abs(s) <= trivial_bound(delta, delta, X) + 1e-12


def test_coverage(delta):
    with pytest.raises(CoverageError):
        resonance_sum_single(delta, ResonanceParams(1.0, 0.5, 1e5))


def test_scan_empty_and_peaks(delta):
    assert resonance_scan(delta, None, 0.5, [], 100) == []
    alphas = np.arange(1.5, 4.0, 0.01)
    rows = resonance_scan(delta, None, 0.5, alphas, 2**13)
    peaks = sorted((r for r in rows if r.peak), key=lambda r: -r.magnitude)[:3]
    for q in (1, 2, 3):
        assert any(abs(r.alpha - 2 * math.sqrt(q)) <= 0.01 + 1e-9 for r in peaks)


def test_find_peaks():
    mags = np.ones(50)
    mags[10] = 9
    mags[30] = 4
    assert list(find_peaks(mags)) == [10]
    assert list(find_peaks(mags, factor=3)) == [10, 30]
    assert find_peaks([1, 2]).size == 0


def test_exponent_fit_synthetic():
    Xs = 2.0 ** np.arange(10, 18)
    fit = exponent_fit(Xs, Xs**0.75)
    assert abs(fit.slope - 0.75) <= 1e-12
    assert fit.points == 8
    fit = exponent_fit(np.append(Xs, 1e6), np.append(Xs**0.5 * 3, 0.0))
    assert fit.points == 8 and fit.slope == pytest.approx(0.5)
    with pytest.raises(FitError):
        exponent_fit([1, 2, 3], [1, 2, 3])


def test_single_exponent_small_grid(delta):
    # on resonance the sum grows visibly faster than off resonance already below X = 2^13
    Xs = 2.0 ** np.arange(8, 13)
    on = exponent_fit(Xs, [resonance_sum_single(delta, ResonanceParams(2.0, 0.5, X)) for X in Xs])
    off = exponent_fit(Xs, [resonance_sum_single(delta, ResonanceParams(2.7, 0.5, X)) for X in Xs])
    assert on.slope - off.slope >= 0.05
