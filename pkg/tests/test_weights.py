import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cuspmoments._numerics import gl_panels
from cuspmoments.errors import DomainError, RangeError
from cuspmoments.weights import G0Transform, SmoothWeight, g0, g0_hat, g0_hat_direct, phi

t = sympy.symbols("t")
PHI = sympy.exp(-1 / ((t - 1) * (2 - t)))
G0 = sympy.exp(-t**2 / (1 - t**2))


def test_examples():
    assert phi(1.0) == 0.0
    assert phi(1.5) == pytest.approx(math.exp(-4), rel=1e-15)
    assert phi(0.5, 2) == 0.0
    assert g0(0.0) == 1.0
    assert g0(1.0) == 0.0 and g0(-1.0) == 0.0
    assert g0(0.5) == pytest.approx(math.exp(-1 / 3), rel=1e-15)


@pytest.mark.parametrize("order", range(5))
def test_derivatives_match_sympy(order):
    dphi = sympy.lambdify(t, sympy.diff(PHI, t, order), "mpmath")
    dg0 = sympy.lambdify(t, sympy.diff(G0, t, order), "mpmath")
    for x in np.linspace(1.02, 1.98, 17):
        ref = float(dphi(mpmath.mpf(x)))
        assert phi(x, order) == pytest.approx(ref, rel=1e-10, abs=1e-14)
    for x in np.linspace(-0.97, 0.97, 23):
        ref = float(dg0(mpmath.mpf(x)))
        assert g0(x, order) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_support_and_boundary():
    for order in range(5):
        assert np.all(phi(np.array([0.0, 1.0, 2.0, 2.5]), order) == 0)
        assert np.all(g0(np.array([-2.0, -1.0, 1.0, 3.0]), order) == 0)
        assert abs(phi(1 + 1e-3, order)) < 1e-190
        assert abs(g0(1 - 1e-3, order)) < 1e-190


@given(st.floats(-1, 1))
def test_g0_even_nonnegative(x):
    assert g0(x) >= 0
    assert g0(x) == g0(-x)
    assert g0(x, 1) == -g0(-x, 1)


def test_smooth_weight_wrapper():
    w = SmoothWeight("g0")
    assert w.support == (-1.0, 1.0)
    assert w(0.3, 2) == g0(0.3, 2)
    with pytest.raises(DomainError):
        SmoothWeight("gauss")
    with pytest.raises(DomainError):
        phi(1.5, 5)


def test_transform_at_zero_two_methods():
    with mpmath.workdps(30):
        ref = float(mpmath.quad(lambda s: mpmath.exp(-s**2 / (1 - s**2)), [-1, 0, 1]))
    assert g0_hat(0.0) == pytest.approx(ref, abs=1e-10)
    assert float(g0_hat_direct(0.0)[0]) == pytest.approx(ref, abs=1e-12)
    assert g0_hat(0.0, 1) == 0.0


@given(st.floats(-200, 200))
@settings(max_examples=60)
def test_transform_even(y):
    assert g0_hat(y) == pytest.approx(g0_hat(-y), abs=1e-15)
    assert g0_hat(y, 1) == pytest.approx(-g0_hat(-y, 1), abs=1e-15)
    assert g0_hat(y, 2) == pytest.approx(g0_hat(-y, 2), abs=1e-15)


def test_interpolation_against_direct():
    ys = np.linspace(-199.9, 199.9, 3001) + 0.00317
    for order in (0, 1, 2):
        ref = g0_hat_direct(ys, order)
        assert np.max(np.abs(g0_hat(ys, order) - ref)) < 1e-11


def test_transform_against_mpmath():
    for y in (0.37, 2.5, 11.0):
        with mpmath.workdps(30):
            ref = float(mpmath.quad(lambda s: mpmath.exp(-s**2 / (1 - s**2)) * mpmath.cos(2 * mpmath.pi * y * s),
                                    mpmath.linspace(-1, 1, 9)))
        assert g0_hat(y) == pytest.approx(ref, abs=1e-11)


def test_range_error():
    with pytest.raises(RangeError):
        g0_hat(250.0)
    with pytest.raises(DomainError):
        g0_hat(1.0, 3)


def test_parseval():
    s, w = gl_panels(-1.0, 1.0, 64, 24)
    lhs = math.fsum(w * g0(s) ** 2)
    y, wy = gl_panels(-200.0, 200.0, 4000, 16)
    rhs = math.fsum(wy * g0_hat(y) ** 2)
    assert rhs == pytest.approx(lhs, rel=1e-6)


def test_decay_beyond_main_lobe():
    # g0 is not analytic at +-1, so the decay is sub-exponential; check the envelope
    T = G0Transform(y_max=200.0)
    radius = T.decay_radius(1e-12)
    assert 50 < radius < 150
    assert np.all(np.abs(T(np.arange(radius, 200.0, 0.05))) < 1e-12)
    blocks = [np.max(np.abs(T(np.arange(a, a + 20, 0.01)))) for a in range(10, 150, 20)]
    assert all(x > y for x, y in zip(blocks, blocks[1:]))
