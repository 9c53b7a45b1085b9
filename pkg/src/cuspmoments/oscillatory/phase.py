"""Phase and amplitude of the Bessel main terms, and the D11 phase theta with its derivatives.

    phi^e(m, n, c) = -(e/2 pi) sqrt(16 pi^2 mn/c^2 - (K-1)^2) - (e (K-1)/2 pi) arcsin((K-1) c/(4 pi sqrt(mn)))
    h^e(m, n, c)   = g0_hat((e L/2 pi) arcsin((K-1) c/(4 pi sqrt(mn)))) (16 pi^2 mn/c^2 - (K-1)^2)^(-1/4)

theta(u, v) = alpha v^beta - alpha u^beta + phi_1^e1(u, v, c1 d) + phi_2^e2(u, v, c2 d)
              - (m u + n v)/(c1 c2 d).

With R_j = 16 pi^2 uv/(c_j d)^2 - (K_j - 1)^2 the second partials split as
theta_uu = U1 + ... + U5 and theta_vv = V1 + ... + V5 (power term, two root
terms, two reciprocal-root terms); the Hessian determinant then has several
equivalent closed forms, compared in ``hessian_forms``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import DomainError
from ..weights import default_transform

FOUR_PI = 4 * math.pi
PI2_16 = 16 * math.pi**2


def _radicand(m, n, c, K):
    return PI2_16 * m * n / c**2 - (K - 1) ** 2


def _check_eta(eta):
    if eta not in (1, -1):
        raise DomainError("eta must be +1 or -1")


def phase_phi(m, n, c, K, eta):
    """phi_j^eta(m, n, c); m, n may be arrays."""
    _check_eta(eta)
    r = _radicand(m, n, c, K)
    if np.any(np.asarray(r) <= 0):
        raise DomainError("16 pi^2 mn/c^2 must exceed (K-1)^2")
    s = (K - 1) * c / (FOUR_PI * np.sqrt(m * n))
    return -eta / (2 * math.pi) * np.sqrt(r) - eta * (K - 1) / (2 * math.pi) * np.arcsin(s)


def amplitude_h(m, n, c, K, L, eta):
    """h_j^eta(m, n, c); m, n may be arrays."""
    _check_eta(eta)
    r = _radicand(m, n, c, K)
    if np.any(np.asarray(r) <= 0):
        raise DomainError("16 pi^2 mn/c^2 must exceed (K-1)^2")
    s = (K - 1) * c / (FOUR_PI * np.sqrt(m * n))
    return default_transform()(eta * L / (2 * math.pi) * np.arcsin(s)) * r ** -0.25


def phase_phi_dn(m, n, c, K, eta):
    """d phi/dn = -e sqrt(R)/(4 pi n) in closed form."""
    _check_eta(eta)
    r = _radicand(m, n, c, K)
    if np.any(np.asarray(r) <= 0):
        raise DomainError("16 pi^2 mn/c^2 must exceed (K-1)^2")
    return -eta * np.sqrt(r) / (FOUR_PI * n)


@dataclass(frozen=True)
class PhaseContext:
    u: float
    v: float
    c1: int
    c2: int
    d: int
    eta1: int
    eta2: int
    K1: float
    K2: float
    m: float = 0.0
    n: float = 0.0
    alpha: float = 1.0
    beta: float = 0.5
    L1: float = 1.0
    L2: float = 1.0

    def __post_init__(self):
        _check_eta(self.eta1)
        _check_eta(self.eta2)
        for name in ("c1", "c2", "d"):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 1:
                raise DomainError(f"{name} must be a positive integer")
        if not (self.u > 0 and self.v > 0):
            raise DomainError("u and v must be positive")
        if not 0 < self.beta <= 1:
            raise DomainError("beta must lie in (0, 1]")

    def at(self, u, v) -> "PhaseContext":
        return replace(self, u=u, v=v)

    @property
    def Q(self) -> int:
        return self.c1 * self.c2 * self.d

    def R(self, u=None, v=None):
        u = self.u if u is None else u
        v = self.v if v is None else v
        R1 = PI2_16 * u * v / (self.c1 * self.d) ** 2 - (self.K1 - 1) ** 2
        R2 = PI2_16 * u * v / (self.c2 * self.d) ** 2 - (self.K2 - 1) ** 2
        if np.any(np.asarray(R1) <= 0) or np.any(np.asarray(R2) <= 0):
            raise DomainError("R_j must be positive (point lies outside the feasible region)")
        return R1, R2

    @property
    def feasible(self) -> bool:
        try:
            self.R()
        except DomainError:
            return False
        return True

    def U_terms(self):
        """U1..U5 of theta_uu."""
        u, v, d = self.u, self.v, self.d
        a, b = self.alpha, self.beta
        R1, R2 = self.R()
        s1, s2 = math.sqrt(R1), math.sqrt(R2)
        return (-a * b * (b - 1) * u ** (b - 2),
                self.eta1 * s1 / (FOUR_PI * u * u),
                self.eta2 * s2 / (FOUR_PI * u * u),
                -2 * math.pi * self.eta1 * v / (u * (self.c1 * d) ** 2 * s1),
                -2 * math.pi * self.eta2 * v / (u * (self.c2 * d) ** 2 * s2))

    def V_terms(self):
        """V1..V5 of theta_vv."""
        u, v, d = self.u, self.v, self.d
        a, b = self.alpha, self.beta
        R1, R2 = self.R()
        s1, s2 = math.sqrt(R1), math.sqrt(R2)
        return (a * b * (b - 1) * v ** (b - 2),
                self.eta1 * s1 / (FOUR_PI * v * v),
                self.eta2 * s2 / (FOUR_PI * v * v),
                -2 * math.pi * self.eta1 * u / (v * (self.c1 * d) ** 2 * s1),
                -2 * math.pi * self.eta2 * u / (v * (self.c2 * d) ** 2 * s2))


def theta(u, v, ctx: PhaseContext):
    """theta(u, v) for the parameters of ``ctx``; u, v may be arrays."""
    c1d, c2d = ctx.c1 * ctx.d, ctx.c2 * ctx.d
    return (ctx.alpha * (v**ctx.beta - u**ctx.beta)
            + phase_phi(u, v, c1d, ctx.K1, ctx.eta1)
            + phase_phi(u, v, c2d, ctx.K2, ctx.eta2)
            - (ctx.m * u + ctx.n * v) / ctx.Q)


def amplitude_a(u, v, ctx: PhaseContext, X: float):
    """a(u, v) = phi(v/X) phi(u/X) h_1^e1(u, v, c1 d) h_2^e2(u, v, c2 d)."""
    from ..weights import phi
    c1d, c2d = ctx.c1 * ctx.d, ctx.c2 * ctx.d
    return (phi(np.asarray(v) / X) * phi(np.asarray(u) / X)
            * amplitude_h(u, v, c1d, ctx.K1, ctx.L1, ctx.eta1)
            * amplitude_h(u, v, c2d, ctx.K2, ctx.L2, ctx.eta2))


@dataclass
class ThetaDerivs:
    theta: float
    du: float
    dv: float
    duu: float
    dvv: float
    duv: float

    @property
    def det(self) -> float:
        return self.duu * self.dvv - self.duv**2


def theta_derivs(ctx: PhaseContext) -> ThetaDerivs:
    """Closed-form theta and its partials up to order two at (ctx.u, ctx.v)."""
    u, v = ctx.u, ctx.v
    R1, R2 = ctx.R()
    s1, s2 = math.sqrt(R1), math.sqrt(R2)
    a, b, Q = ctx.alpha, ctx.beta, ctx.Q
    du = -a * b * u ** (b - 1) - ctx.eta1 * s1 / (FOUR_PI * u) - ctx.eta2 * s2 / (FOUR_PI * u) - ctx.m / Q
    dv = a * b * v ** (b - 1) - ctx.eta1 * s1 / (FOUR_PI * v) - ctx.eta2 * s2 / (FOUR_PI * v) - ctx.n / Q
    duv = (-2 * math.pi * ctx.eta1 / ((ctx.c1 * ctx.d) ** 2 * s1)
           - 2 * math.pi * ctx.eta2 / ((ctx.c2 * ctx.d) ** 2 * s2))
    return ThetaDerivs(float(theta(u, v, ctx)), du, dv,
                       math.fsum(ctx.U_terms()), math.fsum(ctx.V_terms()), duv)


def root_minus_reciprocal(ctx: PhaseContext, j: int):
    """sqrt(R_j)/(4 pi u^2) - 2 pi v/(u (c_j d)^2 sqrt(R_j)), directly and in the (K_j - 1)^2 form."""
    u, v = ctx.u, ctx.v
    R = ctx.R()[j - 1]
    c, K = (ctx.c1, ctx.K1) if j == 1 else (ctx.c2, ctx.K2)
    cd2 = (c * ctx.d) ** 2
    s = math.sqrt(R)
    direct = s / (FOUR_PI * u * u) - 2 * math.pi * v / (u * cd2 * s)
    folded = (8 * math.pi**2 * u * v / cd2 - (K - 1) ** 2) / (FOUR_PI * u * u * s)
    return direct, folded


def middle_bracket(ctx: PhaseContext):
    """|e1 sqrt(R1) + e2 sqrt(R2)|/(4 pi u) and its two-sided bracket.

    The bracket is [(c1 + c2)/(sqrt2 d c1 c2), sqrt2 (c1 + c2)/(d c1 c2)] for
    e1 = e2 and the same with |c1 - c2| for e1 != e2.
    """
    R1, R2 = ctx.R()
    val = abs(ctx.eta1 * math.sqrt(R1) + ctx.eta2 * math.sqrt(R2)) / (FOUR_PI * ctx.u)
    cs = ctx.c1 + ctx.c2 if ctx.eta1 == ctx.eta2 else abs(ctx.c1 - ctx.c2)
    base = cs / (ctx.d * ctx.c1 * ctx.c2)
    return val, base / math.sqrt(2), base * math.sqrt(2)


def hessian_forms(ctx: PhaseContext) -> dict:
    """Every closed form of the Hessian combinations at (ctx.u, ctx.v).

    Keys:
      det_direct     theta_uu theta_vv - theta_uv^2
      det_split      U1 V1 + U1 sum V2..5 + V1 sum U2..5 + [UV2-5]
      uvsq_direct    theta_uv^2
      uvsq_split     (U4 + U5)(V4 + V5)
      uv25_terms     [UV2-5] = (U2 + U3) sum V2..5 + (U4 + U5)(V2 + V3)
      uv25_diff      S^2/(16 pi^2 u^2 v^2) - S/(u v d^2) (e1/(c1^2 sqrt R1) + e2/(c2^2 sqrt R2))
      uv25_sum       -S/(16 pi^2 u^2 v^2) (e1 (K1-1)^2/sqrt R1 + e2 (K2-1)^2/sqrt R2)
    with S = e1 sqrt R1 + e2 sqrt R2.  When e1 != e2 and K1 = K2 two more:
      uv25_rootdiff  (K-1)^2 (sqrt R1 - sqrt R2)^2/(16 pi^2 u^2 v^2 sqrt(R1 R2))
      uv25_quotient  the same with sqrt R1 - sqrt R2 = (R1 - R2)/(sqrt R1 + sqrt R2)
                     and R1 - R2 = (16 pi^2 uv/d^2)(1/c1 - 1/c2)(1/c1 + 1/c2).
    """
    u, v, d = ctx.u, ctx.v, ctx.d
    e1, e2 = ctx.eta1, ctx.eta2
    R1, R2 = ctx.R()
    s1, s2 = math.sqrt(R1), math.sqrt(R2)
    U = ctx.U_terms()
    V = ctx.V_terms()
    td = theta_derivs(ctx)
    sU = U[1] + U[2] + U[3] + U[4]
    sV = V[1] + V[2] + V[3] + V[4]
    uv25 = (U[1] + U[2]) * sV + (U[3] + U[4]) * (V[1] + V[2])
    S = e1 * s1 + e2 * s2
    P = e1 / (ctx.c1**2 * s1) + e2 / (ctx.c2**2 * s2)
    w = PI2_16 * u * u * v * v
    out = {
        "det_direct": td.det,
        "det_split": U[0] * V[0] + U[0] * sV + V[0] * sU + uv25,
        "uvsq_direct": td.duv**2,
        "uvsq_split": (U[3] + U[4]) * (V[3] + V[4]),
        "uv25_terms": uv25,
        "uv25_diff": S * S / w - S * P / (u * v * d * d),
        "uv25_sum": -S / w * (e1 * (ctx.K1 - 1) ** 2 / s1 + e2 * (ctx.K2 - 1) ** 2 / s2),
    }
    if e1 != e2 and ctx.K1 == ctx.K2:
        k2 = (ctx.K1 - 1) ** 2
        out["uv25_rootdiff"] = k2 * (s1 - s2) ** 2 / (w * s1 * s2)
        rdiff = PI2_16 * u * v / d**2 * (1 / ctx.c1 - 1 / ctx.c2) * (1 / ctx.c1 + 1 / ctx.c2)
        out["uv25_quotient"] = k2 * (rdiff / (s1 + s2)) ** 2 / (w * s1 * s2)
    return out


def _rel(a, b, scale):
    s = max(abs(a), abs(b), scale)
    return abs(a - b) / s if s > 0 else 0.0


def _operand_scales(ctx: PhaseContext):
    """Magnitudes of the operands of the subtractions in ``hessian_forms``."""
    u, v, d = ctx.u, ctx.v, ctx.d
    R1, R2 = ctx.R()
    s1, s2 = math.sqrt(R1), math.sqrt(R2)
    U = ctx.U_terms()
    V = ctx.V_terms()
    td = theta_derivs(ctx)
    det = abs(td.duu * td.dvv) + td.duv**2
    aU = sum(abs(x) for x in U[1:])
    aV = sum(abs(x) for x in V[1:])
    S = abs(s1) + abs(s2)
    P = 1 / (ctx.c1**2 * s1) + 1 / (ctx.c2**2 * s2)
    uv25 = max(aU * aV, S * S / (PI2_16 * u * u * v * v) + S * P / (u * v * d * d))
    return det, uv25


def partial_scales(ctx: PhaseContext) -> dict:
    """Sum of absolute values of the terms making up each first and second partial.

    Finite-difference errors scale with these, not with the (possibly
    cancelled) partial itself.
    """
    u, v, Q = ctx.u, ctx.v, ctx.Q
    R1, R2 = ctx.R()
    root = (math.sqrt(R1) + math.sqrt(R2)) / FOUR_PI
    ab = abs(ctx.alpha * ctx.beta)
    return {
        "du": ab * u ** (ctx.beta - 1) + root / u + abs(ctx.m) / Q,
        "dv": ab * v ** (ctx.beta - 1) + root / v + abs(ctx.n) / Q,
        "duu": sum(abs(x) for x in ctx.U_terms()),
        "dvv": sum(abs(x) for x in ctx.V_terms()),
        "duv": 2 * math.pi * (1 / ((ctx.c1 * ctx.d) ** 2 * math.sqrt(R1))
                              + 1 / ((ctx.c2 * ctx.d) ** 2 * math.sqrt(R2))),
    }


def hessian_identity_check(ctx: PhaseContext) -> float:
    """Largest relative disagreement among the forms of ``hessian_forms``.

    Each difference is divided by the larger of the two values and the size
    of the operands that were subtracted to produce them, so cancellation in
    the direct forms is not mistaken for an identity failure.
    """
    f = hessian_forms(ctx)
    det_scale, uv25_scale = _operand_scales(ctx)
    res = [_rel(f["det_direct"], f["det_split"], det_scale),
           _rel(f["uvsq_direct"], f["uvsq_split"], det_scale)]
    keys = [k for k in f if k.startswith("uv25")]
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            res.append(_rel(f[a], f[b], uv25_scale))
    return max(res)
