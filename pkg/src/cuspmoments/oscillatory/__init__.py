"""Bessel window sums, their integral form, and the derivative-test machinery for D11."""
from .dtest import (
    DerivativeTestReport,
    NegligibilityResult,
    first_derivative_negligibility,
    hypothesis_constant,
    integral_J,
    d11_preset,
    d11_radius,
    quadratic_exact,
    quadratic_preset,
    second_derivative_test,
    tensor_integral,
    variation,
)
from .phase import (
    PhaseContext,
    ThetaDerivs,
    amplitude_a,
    amplitude_h,
    hessian_forms,
    hessian_identity_check,
    middle_bracket,
    partial_scales,
    phase_phi,
    phase_phi_dn,
    root_minus_reciprocal,
    theta,
    theta_derivs,
)
from .vw import (
    integration_radius,
    v_from_w,
    v_from_w_stated,
    v_sum,
    w_integral,
    w_jacobi_anger,
    w_main_term,
    w_main_term_stated,
    w_pair,
)
