import math

import numpy as np
import pytest

from cuspmoments.coeffs import eigenforms
from cuspmoments.errors import DomainError, RegimeError
from cuspmoments.moments import (THEOREM_REGIMES, MomentWindow, check_regime, moment_geometric, moment_spectral,
                                 theorem_bound_report)
from cuspmoments.petersson import harmonic_weights
from cuspmoments.resonance import ResonanceParams, resonance_sum_pair


def test_window_validation():
    with pytest.raises(DomainError):
        MomentWindow(18, 4, 18, 4, 16, 1, 0.0)
    with pytest.raises(DomainError):
        MomentWindow(18, -4, 18, 4, 16, 1, 0.5)
    with pytest.raises(DomainError):
        MomentWindow(18, 4, 18, 4, 16, 0, 0.5)


def test_window_weights():
    w = MomentWindow(18, 4, 18, 4, 16, 1, 0.5)
    assert [k for k, _ in w.weights(1)] == [16, 18, 20]
    assert w.weights(1)[1][1] == 1.0


def test_empty_window():
    w = MomentWindow(9, 0.5, 9, 0.5, 32, 1, 0.5)
    assert w.weights(1) == []
    assert moment_spectral(w) == 0
    br = moment_geometric(w, with_spectral=True)
    assert br.total == 0 and br.spectral == 0


@pytest.mark.parametrize("alpha,beta", [(1.0, 0.25), (2.5, 1.0)])
def test_identity_small(alpha, beta):
    w = MomentWindow(18, 4, 18, 4, 16, alpha, beta)
    br = moment_geometric(w, with_spectral=True)
    assert br.relative_residual <= 1e-6
    for name in ("D00", "D01", "D10", "D11"):
        v = getattr(br, name)
        assert abs(v.imag) <= 1e-8 * max(1.0, abs(v))


def test_identity_fixture():
    w = MomentWindow(18, 4, 18, 4, 32, 1.0, 0.5)
    br = moment_geometric(w, with_spectral=True)
    assert br.relative_residual <= 1e-6
    assert br.spectral == pytest.approx(2.1876776596366896, rel=1e-9)
    d = br.as_dict()
    assert set(d) >= {"D00", "D01", "D10", "D11", "spectral", "residual", "seconds"}


def test_swap_symmetry():
    a = moment_geometric(MomentWindow(18, 4, 22, 3, 16, 1.0, 0.5))
    b = moment_geometric(MomentWindow(22, 3, 18, 4, 16, 1.0, 0.5))
    assert a.D01 == b.D10
    assert a.D10 == b.D01
    assert a.D00 == pytest.approx(b.D00, rel=1e-15)


def test_single_weight_lower_bound():
    # window holding only k = 12: the spectral side is exactly the one-term product
    w = MomentWindow(12, 1.5, 12, 1.5, 16, 1.0, 0.5)
    assert [k for k, _ in w.weights(1)] == [12]
    f = eigenforms(12, 40)[0]
    om = harmonic_weights(12, 1).omega[0]
    S = resonance_sum_pair(f, f, ResonanceParams(1.0, 0.5, 16))
    one = 144 * om**2 * abs(S) ** 2
    assert moment_spectral(w) >= one * (1 - 1e-12)


def test_d00_trivial_estimate():
    ratios = []
    for K, L, X in ((18, 4, 16), (22, 3, 16), (18, 4, 24)):
        br = moment_geometric(MomentWindow(K, L, K, L, X, 1.0, 0.5))
        ratios.append(br.D00.real / (K * L * K * L * X))
    assert max(ratios) / min(ratios) < 3


def test_regimes():
    assert "large_windows" in THEOREM_REGIMES
    with pytest.raises(RegimeError, match="K2 >= X"):
        check_regime(MomentWindow(18, 4, 4.5, 1.5, 16, 1, 0.5), "large_windows")
    with pytest.raises(DomainError):
        check_regime(MomentWindow(18, 4, 18, 4, 16, 1, 0.5), "nonsense")


def test_bound_report_bounded_ratio():
    w = MomentWindow(30, 8, 18, 4, 16, 1.0, 0.5)
    rows = theorem_bound_report(w, "large_windows", [16, 24, 32])
    ratios = [r[3] for r in rows]
    assert all(0 < r for r in ratios)
    assert max(ratios) / min(ratios) < 10


def test_equal_centers_report():
    w = MomentWindow(16, 4, 16, 4, 64, 1.0, 0.5)
    rows = theorem_bound_report(w, "equal_centers")
    assert len(rows) == 1 and rows[0][2] > 0
