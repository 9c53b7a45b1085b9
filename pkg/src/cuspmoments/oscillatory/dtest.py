"""Two-dimensional second derivative test, the D11 double integral J, and first-derivative budgets.

The test: if |theta_uu| >= kappa r1^2, |theta_vv| >= kappa r2^2 and
|det theta''| >= kappa r1^2 r2^2 on D, then int_D a e(theta) is bounded by a
multiple of var(a)/(r1 r2) with var(a) = int_D |a_uv|.  The report gives the
measured integral, the bound with the supplied radii, and the largest kappa
for which the three lower bounds hold on a sample grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .._numerics import _leggauss, e, gl_panels
from ..errors import AccuracyError, DomainError, HypothesisError
from ..weights import phi
from .phase import PhaseContext, amplitude_a, amplitude_h, phase_phi, theta, theta_derivs

ORDER = 20
CYCLES_PER_PANEL = 3.0
MIN_PANELS = 8
MAX_REFINE = 3
# implied constant of the Hessian lower bounds for the D11 phase, of order 1/(16 pi^2)
D11_KAPPA_MIN = 1e-4
_BLOCK = 1 << 21


@dataclass
class DerivativeTestReport:
    r1: float
    r2: float
    var_a: float
    bound: float
    measured: float
    ratio: float
    kappa: float
    degenerate: bool = False

    def as_dict(self):
        return dict(r1=self.r1, r2=self.r2, var_a=self.var_a, bound=self.bound,
                    measured=self.measured, ratio=self.ratio, kappa=self.kappa,
                    degenerate=self.degenerate)


def _check_domain(domain):
    u0, u1, v0, v1 = (float(t) for t in domain)
    if not (u1 > u0 and v1 > v0):
        raise DomainError("domain must be (u0, u1, v0, v1) with u1 > u0 and v1 > v0")
    return u0, u1, v0, v1


def _interior_grid(domain, n):
    u0, u1, v0, v1 = domain
    s = (np.arange(n) + 0.5) / n
    return u0 + (u1 - u0) * s, v0 + (v1 - v0) * s


def hypothesis_constant(hessian, domain, r1: float, r2: float, grid: int = 24) -> float:
    """min over a grid of |theta_uu|/r1^2, |theta_vv|/r2^2 and |det|/(r1 r2)^2."""
    if not (r1 > 0 and r2 > 0):
        raise DomainError("r1 and r2 must be positive")
    us, vs = _interior_grid(_check_domain(domain), grid)
    U, V = np.meshgrid(us, vs, indexing="ij")
    huu, hvv, huv = (np.asarray(h, dtype=float) for h in hessian(U, V))
    det = huu * hvv - huv * huv
    k = np.minimum(np.minimum(np.abs(huu) / r1**2, np.abs(hvv) / r2**2), np.abs(det) / (r1 * r2) ** 2)
    # a sign change of any of the three quantities on the grid means no lower bound holds
    for q in (huu, hvv, det):
        if q.max() > 0 > q.min():
            return 0.0
    return float(k.min())


def _mixed_fd(a, domain):
    u0, u1, v0, v1 = domain
    hu = 1e-4 * (u1 - u0)
    hv = 1e-4 * (v1 - v0)

    def auv(u, v):
        return (a(u + hu, v + hv) - a(u + hu, v - hv) - a(u - hu, v + hv) + a(u - hu, v - hv)) / (4 * hu * hv)
    return auv


def variation(domain, a=None, a_uv=None, panels: int = 48, order: int = 12) -> float:
    """var(a) = int_D |d^2 a/du dv| by tensor Gauss-Legendre; a_uv by differences if not given."""
    domain = _check_domain(domain)
    if a_uv is None:
        if a is None:
            raise DomainError("need a or a_uv")
        a_uv = _mixed_fd(a, domain)
    u, wu = gl_panels(domain[0], domain[1], panels, order)
    v, wv = gl_panels(domain[2], domain[3], panels, order)
    U, V = np.meshgrid(u, v, indexing="ij")
    vals = np.abs(np.broadcast_to(np.asarray(a_uv(U, V), dtype=float), U.shape))
    return float(wu @ vals @ wv)


def _sample_cycles(theta_fn, domain, grid=65):
    u0, u1, v0, v1 = domain
    us = np.linspace(u0, u1, grid)
    vs = np.linspace(v0, v1, grid)
    U, V = np.meshgrid(us, vs, indexing="ij")
    T = theta_fn(U, V)
    cu = np.abs(np.diff(T, axis=0)).sum(axis=0).max()
    cv = np.abs(np.diff(T, axis=1)).sum(axis=1).max()
    # phase swept across each direction, with a safety factor for sub-grid wiggles
    return 1.5 * cu, 1.5 * cv


def _tensor_pass(a, theta_fn, domain, nu, nv, order):
    u, wu = gl_panels(domain[0], domain[1], nu, order)
    v, wv = gl_panels(domain[2], domain[3], nv, order)
    rows = max(1, _BLOCK // v.size)
    total = 0j
    for s in range(0, u.size, rows):
        U, V = np.meshgrid(u[s:s + rows], v, indexing="ij")
        f = a(U, V) * e(theta_fn(U, V))
        total += complex(wu[s:s + rows] @ f @ wv)
    return total


def tensor_integral(a, theta_fn, domain, tol: float = 1e-10, order: int = ORDER) -> complex:
    """int_D a e(theta) by tensor Gauss-Legendre with panels sized to the sampled phase sweep."""
    domain = _check_domain(domain)
    cu, cv = _sample_cycles(theta_fn, domain)
    nu = int(math.ceil(cu / CYCLES_PER_PANEL)) + MIN_PANELS
    nv = int(math.ceil(cv / CYCLES_PER_PANEL)) + MIN_PANELS
    prev = _tensor_pass(a, theta_fn, domain, nu, nv, order)
    for _ in range(MAX_REFINE):
        nu, nv = int(1.5 * nu) + 1, int(1.5 * nv) + 1
        cur = _tensor_pass(a, theta_fn, domain, nu, nv, order)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise AccuracyError(f"tensor quadrature did not settle to {tol:g}")


def second_derivative_test(a, theta_fn, domain, r1: float, r2: float, hessian=None, a_uv=None,
                           measured: complex | None = None, kappa_min: float | None = 1.0,
                           grid: int = 24, tol: float = 1e-10) -> DerivativeTestReport:
    """Measured |int_D a e(theta)| against var(a)/(r1 r2).

    ``hessian(U, V)`` returns (theta_uu, theta_vv, theta_uv) on arrays; by
    default it comes from central differences of ``theta_fn``.  Raises
    HypothesisError when the sampled kappa is below ``kappa_min`` (None skips
    the check and only reports kappa).  A vanishing var(a) is reported as a
    degenerate bound.
    """
    domain = _check_domain(domain)
    if hessian is None:
        hessian = _fd_hessian(theta_fn, domain)
    kappa = hypothesis_constant(hessian, domain, r1, r2, grid)
    if kappa_min is not None and kappa < kappa_min * (1 - 1e-12):
        raise HypothesisError(f"Hessian lower bounds hold only with constant {kappa:.3g} < {kappa_min:g}")
    var = variation(domain, a=a, a_uv=a_uv)
    if measured is None:
        measured = tensor_integral(a, theta_fn, domain, tol)
    m = abs(measured)
    bound = var / (r1 * r2)
    if bound == 0:
        return DerivativeTestReport(r1, r2, var, 0.0, m, math.inf if m else 0.0, kappa, True)
    return DerivativeTestReport(r1, r2, var, bound, m, m / bound, kappa)


def _fd_hessian(theta_fn, domain):
    u0, u1, v0, v1 = domain
    hu = 1e-4 * (u1 - u0)
    hv = 1e-4 * (v1 - v0)

    def hess(U, V):
        t0 = theta_fn(U, V)
        uu = (theta_fn(U + hu, V) - 2 * t0 + theta_fn(U - hu, V)) / hu**2
        vv = (theta_fn(U, V + hv) - 2 * t0 + theta_fn(U, V - hv)) / hv**2
        uv = (theta_fn(U + hu, V + hv) - theta_fn(U + hu, V - hv)
              - theta_fn(U - hu, V + hv) + theta_fn(U - hu, V - hv)) / (4 * hu * hv)
        return uu, vv, uv
    return hess


# presets --------------------------------------------------------------------

def quadratic_exact(N: float) -> complex:
    """int_[1,2]^2 uv e(N(u^2 + v^2)) = ((e(4N) - e(N))/(4 pi i N))^2."""
    one = (complex(e(4 * N)) - complex(e(N))) / (4j * math.pi * N)
    return one * one


def quadratic_preset(N: float, measured: complex | None = None, kappa_min: float | None = 1.0):
    """a = uv, theta = N(u^2 + v^2) on [1, 2]^2 with r1 = r2 = sqrt(2N).

    The measured integral defaults to its closed form; pass a quadrature
    value to test the integrator instead.
    """
    if not N > 0:
        raise DomainError("N must be positive")
    r = math.sqrt(2 * N)
    return second_derivative_test(
        lambda u, v: u * v, lambda u, v: N * (u * u + v * v), (1.0, 2.0, 1.0, 2.0), r, r,
        hessian=lambda U, V: (np.full_like(U, 2.0 * N), np.full_like(U, 2.0 * N), np.zeros_like(U)),
        a_uv=lambda U, V: np.ones_like(U),
        measured=quadratic_exact(N) if measured is None else measured, kappa_min=kappa_min)


def d11_radius(ctx: PhaseContext, X: float) -> float:
    """r1 = r2 = K1^(1/2) s^(1/2)/((c1 c2)^(1/4) X), s = c1 + c2 for e1 = e2, |c1 - c2| otherwise."""
    s = ctx.c1 + ctx.c2 if ctx.eta1 == ctx.eta2 else abs(ctx.c1 - ctx.c2)
    if s == 0:
        raise DomainError("radius vanishes for e1 != e2 and c1 = c2")
    return math.sqrt(ctx.K1 * s) / ((ctx.c1 * ctx.c2) ** 0.25 * X)


def _ctx_hessian(ctx):
    def hess(U, V):
        out = np.empty((3,) + U.shape)
        for idx in np.ndindex(U.shape):
            t = theta_derivs(ctx.at(float(U[idx]), float(V[idx])))
            out[(slice(None),) + idx] = (t.duu, t.dvv, t.duv)
        return out[0], out[1], out[2]
    return hess


def d11_preset(ctx: PhaseContext, X: float, kappa_min: float | None = D11_KAPPA_MIN,
                   tol: float = 1e-8) -> DerivativeTestReport:
    """Second derivative test for the D11 integrand on [X, 2X]^2 with radii sqrt(K1 s)/((c1 c2)^(1/4) X)."""
    r = d11_radius(ctx, X)
    domain = (X, 2 * X, X, 2 * X)
    hess = _ctx_hessian(ctx)
    kappa = hypothesis_constant(hess, domain, r, r)
    if kappa_min is not None and kappa < kappa_min:
        raise HypothesisError(f"Hessian lower bounds hold only with constant {kappa:.3g} < {kappa_min:g}")
    J = integral_J(ctx, X, tol=tol)
    return second_derivative_test(lambda u, v: amplitude_a(u, v, ctx, X), lambda u, v: theta(u, v, ctx),
                                  domain, r, r, hessian=hess, measured=J, kappa_min=None)


# the double integral J ---------------------------------------------------------

def _box(X, domain):
    box = (X, 2 * X, X, 2 * X)
    if domain is not None:
        u0, u1, v0, v1 = _check_domain(domain)
        box = (max(box[0], u0), min(box[1], u1), max(box[2], v0), min(box[3], v1))
    return box


def _u_limits(p, box):
    ua, ub, va, vb = box
    return np.maximum(ua, p / vb), np.minimum(ub, p / va)


def _inner(p, box, ctx, X, n_u, order):
    """I(p) = int a_u(u, p/u) e(g(u, p)) du/u over the u-slice of the box at p = uv."""
    gx, gw = _leggauss(order)
    s = (np.arange(n_u)[:, None] + 0.5 * (gx[None, :] + 1)).ravel() / n_u
    ws = np.tile(gw / (2 * n_u), n_u)
    out = np.empty(p.size, dtype=complex)
    per = max(1, _BLOCK // s.size)
    a, b, Q = ctx.alpha, ctx.beta, ctx.Q
    for k in range(0, p.size, per):
        pk = p[k:k + per, None]
        lo, hi = _u_limits(pk, box)
        width = np.maximum(hi - lo, 0.0)
        u = lo + width * s[None, :]
        v = pk / u
        amp = phi(u / X) * phi(v / X) / u
        ph = a * (v**b - u**b) - (ctx.m * u + ctx.n * v) / Q
        out[k:k + per] = (amp * e(ph)) @ ws * width[:, 0]
    return out


def _outer_factor(p, ctx):
    """H(p) e(Phi(p)): the parts of a and theta that depend on uv only."""
    c1d, c2d = ctx.c1 * ctx.d, ctx.c2 * ctx.d
    one = np.ones_like(p)
    H = (amplitude_h(p, one, c1d, ctx.K1, ctx.L1, ctx.eta1)
         * amplitude_h(p, one, c2d, ctx.K2, ctx.L2, ctx.eta2))
    Phi = phase_phi(p, one, c1d, ctx.K1, ctx.eta1) + phase_phi(p, one, c2d, ctx.K2, ctx.eta2)
    return H * e(Phi)


def _j_cycles(ctx, X, box, grid=129):
    """Phase sweeps: of the full phase along p, of the inner phase along p and along u."""
    ua, ub, va, vb = box
    p = np.linspace(ua * va, ub * vb, grid)[1:-1]
    lo, hi = _u_limits(p, box)
    t = np.linspace(0, 1, 65)
    u = lo[:, None] + (hi - lo)[:, None] * t[None, :]
    P = np.broadcast_to(p[:, None], u.shape)
    v = P / u
    a, b, Q = ctx.alpha, ctx.beta, ctx.Q
    g_u = -a * b * v**b / u - a * b * u ** (b - 1) - ctx.m / Q + ctx.n * v / (Q * u)
    g_p = a * b * v**b / P - ctx.n / (Q * u)
    R1 = 16 * math.pi**2 * P / (ctx.c1 * ctx.d) ** 2 - (ctx.K1 - 1) ** 2
    R2 = 16 * math.pi**2 * P / (ctx.c2 * ctx.d) ** 2 - (ctx.K2 - 1) ** 2
    Phi_p = -(ctx.eta1 * np.sqrt(R1) + ctx.eta2 * np.sqrt(R2)) / (4 * math.pi * P)
    span_p = ub * vb - ua * va
    span_u = float((hi - lo).max())
    return (1.5 * float(np.abs(g_p + Phi_p).max()) * span_p,
            1.5 * float(np.abs(g_p).max()) * span_p,
            1.5 * float(np.abs(g_u).max()) * span_u)


def _j_pass(ctx, X, box, n_coarse, n_fine, n_u, order):
    ua, ub, va, vb = box
    breaks = sorted({ua * va, ua * vb, ub * va, ub * vb})
    span = breaks[-1] - breaks[0]
    gx, gw = _leggauss(order)
    # fine nodes inside a coarse panel, in the coarse panel's reference coordinate
    f = max(1, int(math.ceil(n_fine / n_coarse)))
    yf = (-1 + (2 * np.arange(f)[:, None] + 1 + gx[None, :]) / f).ravel()
    wf = np.tile(gw / f, f)
    M = BarycentricInterpolator(gx, np.eye(order))(yf)
    total = 0j
    for s0, s1 in zip(breaks[:-1], breaks[1:]):
        nc = max(MIN_PANELS, int(math.ceil(n_coarse * (s1 - s0) / span)))
        edges = np.linspace(s0, s1, nc + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        pc = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
        Ic = _inner(pc, box, ctx, X, n_u, order).reshape(nc, order)
        If = Ic @ M.T
        pf = mid[:, None] + half[:, None] * yf[None, :]
        total += complex(np.sum(half[:, None] * wf[None, :] * If * _outer_factor(pf.ravel(), ctx).reshape(pf.shape)))
    return total


def integral_J(ctx: PhaseContext, X: float, domain=None, tol: float = 1e-8, order: int = ORDER,
               method: str = "auto") -> complex:
    """int int a(u, v) e(theta(u, v)) du dv over [X, 2X]^2 (intersected with ``domain``).

    method "pu" works in the coordinates p = uv, u: the root phases and the
    h factors depend on p only, so when the linear terms are small the inner
    u-integral I(p) varies slowly; it is sampled on coarse p-panels and
    interpolated to the fine outer nodes that resolve e(phi_1 + phi_2).
    method "tensor" is plain tensor Gauss-Legendre in (u, v).  "auto" picks
    the one with fewer nodes.  Panel counts follow sampled phase sweeps; the
    result is accepted once a 1.5x refinement changes it by at most tol.
    """
    if not X > 0:
        raise DomainError("X must be positive")
    if method not in ("auto", "pu", "tensor"):
        raise DomainError(f"unknown method {method!r}")
    box = _box(X, domain)
    if box[1] <= box[0] or box[3] <= box[2]:
        return 0j
    ctx.R(box[0], box[2])  # R_j increases with uv; the smallest product decides feasibility

    def th(u, v):
        return theta(u, v, ctx)

    full_p, inner_p, inner_u = _j_cycles(ctx, X, box)
    n_fine = int(math.ceil(full_p / CYCLES_PER_PANEL)) + MIN_PANELS
    n_coarse = int(math.ceil(inner_p / CYCLES_PER_PANEL)) + 2 * MIN_PANELS
    n_u = int(math.ceil(inner_u / CYCLES_PER_PANEL)) + MIN_PANELS
    if method == "auto":
        cu, cv = _sample_cycles(th, box)
        tensor_cost = (cu / CYCLES_PER_PANEL + MIN_PANELS) * (cv / CYCLES_PER_PANEL + MIN_PANELS)
        pu_cost = n_coarse * n_u + n_fine / order
        method = "tensor" if tensor_cost < pu_cost else "pu"
    if method == "tensor":
        return tensor_integral(lambda u, v: amplitude_a(u, v, ctx, X), th, box, tol, order)
    prev = _j_pass(ctx, X, box, n_coarse, n_fine, n_u, order)
    for _ in range(MAX_REFINE):
        n_coarse, n_fine, n_u = (int(1.5 * n) + 1 for n in (n_coarse, n_fine, n_u))
        cur = _j_pass(ctx, X, box, n_coarse, n_fine, n_u, order)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise AccuracyError(f"J quadrature did not settle to {tol:g}")


# first derivative budgets ------------------------------------------------------

@dataclass
class NegligibilityResult:
    negligible: bool
    budget: float
    factor: float


def first_derivative_negligibility(U: float, N: float | None = None, T: float | None = None,
                                   M: float | None = None, R: float | None = None,
                                   length: float = 1.0, factor: float | None = None,
                                   n0: int = 10, threshold: float = 1e-6) -> NegligibilityResult:
    """Budget length * U * factor^(n0 + 1) of the first derivative test.

    The integral of w e(h) over an interval of the given length, with
    w^(j) << U/N^j, h^(j) << T/M^j (j >= 2) and |h'| >= R, is
    << length * U * [(M R/sqrt T)^-A + (R N)^-A].  ``factor`` defaults to
    max(sqrt(T)/(M R), 1/(R N)); pass it directly to use a precomputed
    ratio.  A factor >= 1 is never negligible.
    """
    if factor is None:
        if None in (N, T, M, R):
            raise DomainError("give factor, or all of N, T, M, R")
        if min(N, T, M, R) <= 0:
            raise DomainError("scale parameters must be positive")
        factor = max(math.sqrt(T) / (M * R), 1.0 / (R * N))
    if U < 0 or length <= 0 or factor < 0:
        raise DomainError("U, length and factor must be non-negative")
    if n0 < 0:
        raise DomainError("n0 must be non-negative")
    budget = length * U * factor ** (n0 + 1)
    return NegligibilityResult(factor < 1 and budget <= threshold, budget, factor)
