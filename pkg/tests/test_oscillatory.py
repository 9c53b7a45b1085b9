import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cuspmoments.errors import DomainError, HypothesisError
from cuspmoments.oscillatory import (PhaseContext, amplitude_h, first_derivative_negligibility,
                                     hessian_forms, hessian_identity_check, integral_J, middle_bracket,
                                     d11_preset, partial_scales, phase_phi, phase_phi_dn,
                                     quadratic_exact, quadratic_preset, root_minus_reciprocal,
                                     second_derivative_test, tensor_integral, theta, theta_derivs,
                                     v_from_w, v_from_w_stated, v_sum, variation, w_integral,
                                     w_jacobi_anger, w_main_term, w_main_term_stated, w_pair)
from cuspmoments.weights import g0, g0_hat


# V and W ---------------------------------------------------------------------

def test_v_sum_small_cases():
    assert v_sum(41, 0.9, 10.0) == 0  # no even k with |k - 41| < 0.9
    assert abs(v_sum(40, 10, 1.0)) < 1e-29


def test_v_fixture_three_ways():
    V = v_sum(40, 10, 600)
    assert V == pytest.approx(0.08309794107369826, abs=1e-15)
    assert v_from_w(40, 10, 600) == pytest.approx(V, abs=1e-12)
    ja = (w_jacobi_anger(40, 10, 1, 600) - w_jacobi_anger(40, 10, -1, 600)) / 2j
    assert ja == pytest.approx(V, abs=1e-12)


def test_stated_relation_has_opposite_sign():
    V = v_sum(40, 10, 600)
    assert v_from_w_stated(40, 10, 600) == pytest.approx(-V, abs=1e-12)


@pytest.mark.parametrize("K,L,x", [(40, 10, 50.0), (40, 10, 3000.0), (24, 6, 333.3), (60, 8, 900.0)])
def test_w_against_jacobi_anger(K, L, x):
    for eta in (1, -1):
        assert w_integral(K, L, eta, x) == pytest.approx(w_jacobi_anger(K, L, eta, x), abs=1e-10)


def test_w_pair_consistent():
    p, m = w_pair(40, 10, 800.0)
    assert p == pytest.approx(w_integral(40, 10, 1, 800.0), abs=1e-14)
    assert m == pytest.approx(w_integral(40, 10, -1, 800.0), abs=1e-14)


def test_w_at_zero_is_fourier_inversion():
    assert w_integral(5, 10, 1, 0.0) == pytest.approx(g0(0.4), abs=1e-10)
    assert abs(w_integral(40, 10, 1, 0.0)) < 1e-10


def test_v_from_w_negligible_region():
    assert abs(v_sum(40, 10, 5.0)) < 1e-6
    assert abs(v_from_w(40, 10, 5.0)) < 1e-6


def test_main_term_examples():
    with pytest.raises(DomainError):
        w_main_term(40, 10, 1, 39.0)
    K, L, x = 40, 10, 3000.0
    main = w_main_term(K, L, 1, x)
    gamma = L * math.asin((K - 1) / x) / (2 * math.pi)
    expect = L * (x * x - (K - 1) ** 2) ** -0.25 * abs(g0_hat(gamma)) / math.sqrt(2 * math.pi)
    assert abs(main) == pytest.approx(expect, rel=1e-12)
    assert w_main_term(K, L, -1, x) == pytest.approx(main.conjugate(), rel=1e-12)
    for xx in (2000.0, 5000.0, 20000.0):
        assert abs(w_integral(K, L, 1, xx) - w_main_term(K, L, 1, xx)) <= 10 * L**2 / xx


def test_stated_main_term_is_off():
    x = 3000.0
    W = w_integral(40, 10, 1, x)
    assert abs(W - w_main_term_stated(40, 10, 1, x)) > 0.1 * abs(W)


# phase and amplitude -----------------------------------------------------------

def test_phase_domain():
    K, c = 40, 1
    mn = ((K - 1) * c / (4 * math.pi)) ** 2
    with pytest.raises(DomainError):
        phase_phi(mn, 1.0, c, K, 1)
    with pytest.raises(DomainError):
        amplitude_h(1.0, 1.0, c, K, 10, 1)
    with pytest.raises(DomainError):
        phase_phi(1e4, 1e4, 1, K, 0)


def test_h_scaling():
    # h ~ (c/X)^(1/2) once 4 pi sqrt(mn)/c is far above K
    vals = []
    for X in (1e5, 1e6, 1e7):
        for c in (1, 3, 10):
            vals.append(amplitude_h(X, X, c, 40, 10, 1) * math.sqrt(X / c))
    assert max(vals) / min(vals) < 1.01
    assert vals[0] == pytest.approx(g0_hat(0.0) / math.sqrt(4 * math.pi), rel=0.01)


@given(st.floats(1e3, 1e6), st.floats(1e3, 1e6), st.integers(1, 5), st.sampled_from([1, -1]))
@settings(max_examples=60)
def test_phase_dn_finite_difference(m, n, c, eta):
    K = 30
    if 16 * math.pi**2 * m * n / c**2 <= 1.01 * (K - 1) ** 2:
        return
    h = 1e-4 * n
    fd = (phase_phi(m, n + h, c, K, eta) - phase_phi(m, n - h, c, K, eta)) / (2 * h)
    ref = phase_phi_dn(m, n, c, K, eta)
    assert abs(fd - ref) <= 1e-6 * abs(ref)


def random_contexts(count, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        c1, c2 = (int(x) for x in rng.integers(1, 6, 2))
        d = int(rng.integers(1, 4))
        K1 = float(rng.integers(12, 60))
        K2 = K1 if rng.random() < 0.4 else float(rng.integers(12, 60))
        lo = ((max(K1, K2) * max(c1, c2) * d) / (4 * math.pi)) ** 2
        u = lo ** 0.5 * float(rng.uniform(1.05, 6.0))
        v = lo / u * float(rng.uniform(1.2, 8.0))
        ctx = PhaseContext(u=u, v=v, c1=c1, c2=c2, d=d, eta1=int(rng.choice([1, -1])),
                           eta2=int(rng.choice([1, -1])), K1=K1, K2=K2, m=float(rng.integers(-5, 6)),
                           n=float(rng.integers(-5, 6)), alpha=float(rng.uniform(-2, 2)),
                           beta=float(rng.choice([0.25, 0.5, 1.0, rng.uniform(0.1, 1)])))
        if ctx.feasible:
            out.append(ctx)
    return out


def test_partials_finite_difference():
    for ctx in random_contexts(100):
        t = theta_derivs(ctx)
        scale = partial_scales(ctx)
        hu, hv = 1e-4 * ctx.u, 1e-4 * ctx.v

        def th(du=0.0, dv=0.0):
            return float(theta(ctx.u + du, ctx.v + dv, ctx))
        fd = {
            "du": (th(hu) - th(-hu)) / (2 * hu),
            "dv": (th(dv=hv) - th(dv=-hv)) / (2 * hv),
            "duu": (theta_derivs(ctx.at(ctx.u + hu, ctx.v)).du - theta_derivs(ctx.at(ctx.u - hu, ctx.v)).du) / (2 * hu),
            "dvv": (theta_derivs(ctx.at(ctx.u, ctx.v + hv)).dv - theta_derivs(ctx.at(ctx.u, ctx.v - hv)).dv) / (2 * hv),
            "duv": (theta_derivs(ctx.at(ctx.u, ctx.v + hv)).du - theta_derivs(ctx.at(ctx.u, ctx.v - hv)).du) / (2 * hv),
        }
        for key, val in fd.items():
            assert abs(val - getattr(t, key)) <= 1e-6 * scale[key], (key, ctx)


def test_hessian_identities():
    worst = max(hessian_identity_check(ctx) for ctx in random_contexts(100, seed=11))
    assert worst <= 1e-10


def test_root_minus_reciprocal_two_ways():
    for ctx in random_contexts(50, seed=3):
        for j in (1, 2):
            a, b = root_minus_reciprocal(ctx, j)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12 * (abs(a) + abs(b) + 1e-300))


def test_opposite_signs_equal_moduli_vanish():
    ctx = PhaseContext(u=300.0, v=200.0, c1=2, c2=2, d=1, eta1=1, eta2=-1, K1=30, K2=30)
    f = hessian_forms(ctx)
    for key in ("uv25_terms", "uv25_diff", "uv25_sum", "uv25_rootdiff", "uv25_quotient"):
        assert abs(f[key]) <= 1e-18, key
    assert theta_derivs(ctx).duv == 0


def test_equal_signs_sum_form_definite():
    seen = 0
    for ctx in random_contexts(200, seed=5):
        if ctx.eta1 != ctx.eta2:
            continue
        # S and the bracket both carry the common sign, so the product is -|.| |.|
        assert hessian_forms(ctx)["uv25_sum"] < 0
        seen += 1
    assert seen > 50


def test_middle_bracket():
    rng = np.random.default_rng(2)
    for _ in range(300):
        c1, c2 = (int(x) for x in rng.integers(1, 8, 2))
        d = int(rng.integers(1, 4))
        K = float(rng.integers(12, 80))
        X = 100 * K * max(c1, c2) * d / (4 * math.pi)
        u, v = X * rng.uniform(1, 2, 2)
        ctx = PhaseContext(u=u, v=v, c1=c1, c2=c2, d=d, eta1=1, eta2=1, K1=K, K2=K)
        val, lo, hi = middle_bracket(ctx)
        assert lo * (1 - 1e-3) <= val <= hi


# second derivative test -------------------------------------------------------

@pytest.mark.parametrize("N", [10, 100, 1000])
def test_quadratic_preset(N):
    rep = quadratic_preset(N)
    assert rep.kappa == pytest.approx(1.0)
    assert rep.var_a == pytest.approx(1.0, rel=1e-12)
    assert rep.ratio <= 10


@pytest.mark.parametrize("N", [10.3, 57.77])
def test_quadrature_against_closed_form(N):
    meas = tensor_integral(lambda u, v: u * v, lambda u, v: N * (u * u + v * v), (1, 2, 1, 2), tol=1e-13)
    assert meas == pytest.approx(quadratic_exact(N), abs=1e-12)
    rep = quadratic_preset(N, measured=meas)
    assert rep.ratio <= 10


def test_integer_n_vanishes():
    assert abs(quadratic_exact(10)) < 1e-15


def test_constant_amplitude_degenerate():
    rep = second_derivative_test(lambda u, v: np.ones_like(u), lambda u, v: 20 * (u * u + v * v),
                                 (1, 2, 1, 2), math.sqrt(40), math.sqrt(40), a_uv=lambda u, v: np.zeros_like(u),
                                 kappa_min=0.99)
    assert rep.degenerate and rep.var_a == 0 and rep.bound == 0


def test_hypothesis_failure():
    with pytest.raises(HypothesisError):
        second_derivative_test(lambda u, v: u * v, lambda u, v: u * u - v * v + 0.1 * u * v, (1, 2, 1, 2), 3.0, 3.0)


def test_variation_fd_vs_exact():
    # a_uv = 2 v cos u, positive on the box
    a = lambda u, v: np.sin(u) * v**2
    got = variation((0.1, 1.5, 1.0, 2.0), a=a)
    exact = (math.sin(1.5) - math.sin(0.1)) * 3
    assert got == pytest.approx(exact, rel=1e-7)


def test_d11_stationary_config():
    ctx = PhaseContext(u=100, v=100, c1=1, c2=1, d=1, eta1=1, eta2=1, K1=40, K2=40, m=-3, n=-1,
                       alpha=1.0, beta=1.0, L1=10, L2=10)
    rep = d11_preset(ctx, 100)
    assert rep.kappa > 1e-4
    assert rep.measured == pytest.approx(9.1150118e-05, rel=1e-6)
    assert rep.ratio <= 10


# J ------------------------------------------------------------------------------

def test_j_empty_support():
    ctx = PhaseContext(u=5000, v=5000, c1=1, c2=1, d=1, eta1=1, eta2=1, K1=40, K2=40, L1=10, L2=10)
    assert integral_J(ctx, 5000, domain=(1, 100, 1, 100)) == 0


def test_j_fixture_and_refinement():
    ctx = PhaseContext(u=5000, v=5000, c1=1, c2=1, d=1, eta1=1, eta2=1, K1=40, K2=40, m=0, n=0,
                       alpha=1.0, beta=0.5, L1=10, L2=10)
    J = integral_J(ctx, 5000)
    assert J == pytest.approx(4.003134396334936e-21 + 4.089387620412573e-20j, abs=1e-28)
    assert abs(integral_J(ctx, 5000, tol=1e-12) - J) <= 1e-8
    rep = d11_preset(ctx, 5000, kappa_min=None)
    assert abs(J) <= 10 * rep.bound


def test_j_two_methods():
    ctx = PhaseContext(u=100, v=100, c1=1, c2=1, d=1, eta1=1, eta2=1, K1=40, K2=40, m=-2, n=-2,
                       alpha=0.1, beta=0.5, L1=10, L2=10)
    a = integral_J(ctx, 100, method="pu", tol=1e-11)
    b = integral_J(ctx, 100, method="tensor", tol=1e-11)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(b)) and abs(a - b) <= 1e-6 * abs(b)


# first derivative budgets ----------------------------------------------------------

def test_negligibility_c2_cut():
    X, K2, L2, eps = 1e6, 100.0, 10.0, 0.1
    c_max = X / (K2 ** (1 - eps) * L2)
    for c2 in (1.0, 10.0, c_max):
        res = first_derivative_negligibility(c2**0.5 * X**-0.5, factor=c2 * K2**eps / X, n0=10)
        assert res.negligible


def test_negligibility_factor_at_least_one():
    assert not first_derivative_negligibility(1e-30, factor=1.0).negligible
    assert not first_derivative_negligibility(1e-30, N=1, T=100, M=1, R=1).negligible
    with pytest.raises(DomainError):
        first_derivative_negligibility(1.0)


@given(st.floats(1e-6, 1e6), st.floats(0, 2), st.floats(1e-12, 1), st.floats(1e-12, 1))
def test_negligibility_threshold_monotone(U, factor, t1, t2):
    lo, hi = sorted((t1, t2))
    if first_derivative_negligibility(U, factor=factor, threshold=lo).negligible:
        assert first_derivative_negligibility(U, factor=factor, threshold=hi).negligible
