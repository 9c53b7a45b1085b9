"""Command line entry point: one subcommand per experiment, CSV or JSON output.

Exit codes: 0 success, 2 invalid input (including unknown flags), 3 accuracy
or capacity failure.  Data go to --out (or stdout); a one-line summary with
the wall time goes to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from ._numerics import fmt_float
from .config import ExperimentConfig, FORMATS
from .errors import (AccuracyError, CapacityError, ConditioningError, CoverageError, DiagonalizationError,
                     DomainError, FitError, HypothesisError, RangeError, RegimeError)

VALIDATION = (DomainError, RegimeError, HypothesisError, FitError)
NUMERICAL = (AccuracyError, CapacityError, ConditioningError, CoverageError, DiagonalizationError, RangeError)

# builtin defaults per command; None marks a required parameter
DEFAULTS = {
    "coeffs": {"weight": None, "n": 100, "form": 1},
    "kloosterman": {"m_max": 5, "n_max": 5, "c_max": 50},
    "bessel": {"order": None, "x": None, "oracle": False},
    "petersson verify": {"weight": None, "max_mn": 20, "fit_cap": 0, "accuracy": 14.0},
    "resonance scan": {"beta": None, "alpha_min": None, "alpha_max": None, "steps": 100, "x": None,
                       "weight1": 12, "weight2": 0, "form1": 1, "form2": 1, "peak_factor": 5.0},
    "resonance fit": {"beta": None, "alpha": None, "xs": None, "weight1": 12, "weight2": 0,
                      "form1": 1, "form2": 1},
    "moment": {"k1": None, "l1": None, "k2": None, "l2": None, "x": None, "alpha": None, "beta": None,
               "eps": 0.1, "identity_check": False, "regime": "", "accuracy": 14.0},
    "oscillatory vw": {"k": None, "l": None, "x": None},
    "oscillatory ddtest": {"preset": None, "scale": 10.0, "k": 40.0, "l": 10.0, "x": 100.0, "c1": 1, "c2": 1,
                           "d": 1, "eta1": 1, "eta2": 1, "m": 0, "n": 0, "alpha": 1.0, "beta": 1.0,
                           "kappa_min": -1.0},
}

S = argparse.SUPPRESS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _build_parser():
    p = _Parser(prog="cuspmoments", description=__doc__.splitlines()[0], argument_default=S)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("coeffs", help="eigenform coefficient table", argument_default=S)
    c.add_argument("--weight", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--form", type=int, help="1-based eigenform index (sorted by T2 eigenvalue)")

    k = sub.add_parser("kloosterman", help="Weil-bound audit of S(m,n;c)", argument_default=S)
    k.add_argument("--m-max", type=int)
    k.add_argument("--n-max", type=int)
    k.add_argument("--c-max", type=int)

    b = sub.add_parser("bessel", help="J_nu(x), optionally against the integral oracle", argument_default=S)
    b.add_argument("--order", type=int)
    b.add_argument("--x", type=_floats)
    b.add_argument("--oracle", action="store_true")

    pt = sub.add_parser("petersson", help="Petersson formula residual table", argument_default=S)
    pt.add_argument("action", nargs="?", choices=["verify"], default="verify")
    pt.add_argument("--weight", type=int)
    pt.add_argument("--max-mn", type=int)
    pt.add_argument("--fit-cap", type=int)
    pt.add_argument("--accuracy", type=float)

    r = sub.add_parser("resonance", help="resonance sums", argument_default=S)
    rs = r.add_subparsers(dest="action", parser_class=_Parser)
    scan = rs.add_parser("scan", argument_default=S)
    fit = rs.add_parser("fit", argument_default=S)
    for q in (scan, fit):
        q.add_argument("--beta", type=float)
        q.add_argument("--weight1", type=int)
        q.add_argument("--weight2", type=int)
        q.add_argument("--form1", type=int)
        q.add_argument("--form2", type=int)
    scan.add_argument("--alpha-min", type=float)
    scan.add_argument("--alpha-max", type=float)
    scan.add_argument("--steps", type=int)
    scan.add_argument("--x", type=float)
    scan.add_argument("--peak-factor", type=float)
    fit.add_argument("--alpha", type=float)
    fit.add_argument("--xs", type=_floats)

    m = sub.add_parser("moment", help="double square moment and its four-term split", argument_default=S)
    for name in ("k1", "l1", "k2", "l2", "x", "alpha", "beta", "eps", "accuracy"):
        m.add_argument(f"--{name}", type=float)
    m.add_argument("--identity-check", action="store_true")
    m.add_argument("--regime", type=str)

    o = sub.add_parser("oscillatory", help="V/W transforms and derivative tests", argument_default=S)
    os_ = o.add_subparsers(dest="action", parser_class=_Parser)
    vw = os_.add_parser("vw", argument_default=S)
    vw.add_argument("--k", type=float)
    vw.add_argument("--l", type=float)
    vw.add_argument("--x", type=_floats)
    dd = os_.add_parser("ddtest", argument_default=S)
    dd.add_argument("--preset", choices=["quadratic", "paperJ"])
    dd.add_argument("--scale", type=float, help="N of the quadratic preset")
    for name in ("k", "l", "x", "alpha", "beta", "kappa_min"):
        dd.add_argument(f"--{name.replace('_', '-')}", type=float)
    for name in ("c1", "c2", "d", "eta1", "eta2", "m", "n"):
        dd.add_argument(f"--{name}", type=int)
    return p


def _globals_parser():
    g = argparse.ArgumentParser(add_help=False, argument_default=S)
    g.add_argument("--out")
    g.add_argument("--format", choices=FORMATS)
    g.add_argument("--threads", type=int)
    g.add_argument("--config")
    g.add_argument("--dump-config")
    return g


class Output:
    def __init__(self, header=None, rows=None, payload=None, summary=""):
        self.header = header or []
        self.rows = rows or []
        self.payload = payload
        self.summary = summary


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else str(f)
    return v


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        data = out.payload if out.payload is not None else [dict(zip(out.header, r)) for r in out.rows]
        return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if out.payload is not None and not out.rows:
        w.writerow(["key", "value"])
        for key, val in _flatten(out.payload):
            w.writerow([key, _cell(val)])
    else:
        w.writerow(out.header)
        for r in out.rows:
            w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _flatten(d, prefix=""):
    for key in sorted(d):
        val = d[key]
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            yield from _flatten(val, name + ".")
        elif isinstance(val, (list, tuple)):
            yield name, ";".join(_cell(v) for v in val)
        else:
            yield name, val


# handlers ---------------------------------------------------------------------

def _form(weight, index, N):
    from .coeffs import eigenforms
    forms = eigenforms(weight, N)
    if not forms:
        raise DomainError(f"no cusp forms of weight {weight}")
    if not 1 <= index <= len(forms):
        raise DomainError(f"form index {index} outside 1..{len(forms)}")
    return forms[index - 1]


def _coeffs(p):
    from .coeffs import normalize
    f = normalize(_form(p["weight"], p["form"], p["n"]))
    rows = [(n, int(f.a[n]) if f.exact else float(f.a[n]), float(f.lam[n])) for n in range(1, f.N + 1)]
    return Output(["n", "a_n", "lambda_n"], rows, summary=f"{f.label}: {f.N} coefficients, exact={f.exact}")


def _kloosterman(p):
    from .arith import kloosterman, weil_bound
    rows = []
    worst = 0.0
    for c in range(1, p["c_max"] + 1):
        for m in range(1, p["m_max"] + 1):
            for n in range(1, p["n_max"] + 1):
                val = kloosterman(m, n, c)
                rows.append((m, n, c, val))
                worst = max(worst, abs(val) / weil_bound(m, n, c))
    return Output(["m", "n", "c", "value"], rows, summary=f"{len(rows)} sums, max |S|/Weil bound = {worst:.6g}")


def _bessel(p):
    from .bessel import bessel_j, bessel_j_oracle, regime
    rows = []
    worst = 0.0
    for x in p["x"]:
        val = bessel_j(p["order"], x)
        if p["oracle"]:
            ref = bessel_j_oracle(p["order"], x)
            rows.append((p["order"], x, regime(p["order"], x), val, ref, abs(val - ref)))
            worst = max(worst, abs(val - ref))
        else:
            rows.append((p["order"], x, regime(p["order"], x), val))
    header = ["order", "x", "method", "value"] + (["oracle", "difference"] if p["oracle"] else [])
    extra = f", max difference {worst:.3g}" if p["oracle"] else ""
    return Output(header, rows, summary=f"{len(rows)} values{extra}")


def _petersson(p):
    from .petersson import petersson_table
    rows, hw = petersson_table(p["weight"], p["max_mn"], p["fit_cap"] or None, p["accuracy"])
    worst = max(r[4] for r in rows)
    return Output(["m", "n", "spectral", "geometric", "abs_diff"], rows,
                  summary=f"weight {p['weight']}: max residual {worst:.3g} over m,n <= {p['max_mn']}")


def _forms_for(p, N):
    f = _form(p["weight1"], p["form1"], N)
    g = _form(p["weight2"], p["form2"], N) if p["weight2"] else None
    return f, g


def _resonance_scan(p):
    from .resonance import ResonanceParams, resonance_scan
    ResonanceParams(p["alpha_min"], p["beta"], p["x"])
    ResonanceParams(p["alpha_max"], p["beta"], p["x"])
    if p["steps"] < 2:
        raise DomainError("need at least 2 steps")
    f, g = _forms_for(p, int(math.ceil(2 * p["x"])) + 1)
    alphas = np.linspace(p["alpha_min"], p["alpha_max"], p["steps"])
    rows = resonance_scan(f, g, p["beta"], alphas, p["x"], p["peak_factor"])
    peaks = [r.alpha for r in rows if r.peak]
    return Output(["alpha", "re", "im", "abs"],
                  [(r.alpha, r.value.real, r.value.imag, r.magnitude) for r in rows],
                  summary=f"{len(rows)} alphas, peaks at {', '.join(f'{a:.4g}' for a in peaks) or 'none'}")


def _resonance_fit(p):
    from .resonance import ResonanceParams, exponent_fit, resonance_sum_pair, resonance_sum_single
    xs = p["xs"]
    if not xs:
        raise DomainError("xs must list the X values")
    pars = [ResonanceParams(p["alpha"], p["beta"], X) for X in xs]
    f, g = _forms_for(p, int(math.ceil(2 * max(xs))) + 1)
    sums = [resonance_sum_single(f, q) if g is None else resonance_sum_pair(f, g, q) for q in pars]
    fit = exponent_fit(xs, sums)
    rows = [(X, s.real, s.imag, abs(s)) for X, s in zip(xs, sums)]
    out = Output(["X", "re", "im", "abs"], rows,
                 summary=f"exponent {fit.slope:.4f} +- {fit.stderr:.2g} over {fit.points} points")
    out.fit = fit
    return out


def _moment(p):
    from .moments import MomentWindow, check_regime, moment_geometric, theorem_bound_report
    w = MomentWindow(p["k1"], p["l1"], p["k2"], p["l2"], p["x"], p["alpha"], p["beta"], p["eps"])
    if p["regime"]:
        check_regime(w, p["regime"])
    br = moment_geometric(w, p["accuracy"], with_spectral=p["identity_check"])
    payload = br.as_dict()
    payload["window"] = {"K1": w.K1, "L1": w.L1, "K2": w.K2, "L2": w.L2, "X": w.X,
                         "alpha": w.alpha, "beta": w.beta, "eps": w.eps}
    summary = f"total {br.total.real:.10g}"
    if p["identity_check"]:
        summary += f", spectral {br.spectral:.10g}, relative residual {br.relative_residual:.3g}"
    if p["regime"]:
        X, total, rhs, ratio = theorem_bound_report(w, p["regime"], [w.X], p["accuracy"])[0]
        payload["regime"] = {"name": p["regime"], "bound": rhs, "ratio": ratio}
        summary += f", {p['regime']} ratio {ratio:.3g}"
    return Output(payload=payload, summary=summary)


def _vw(p):
    from .oscillatory import v_from_w, v_sum, w_main_term
    rows = []
    worst = 0.0
    for x in p["x"]:
        V = v_sum(p["k"], p["l"], x)
        VW = v_from_w(p["k"], p["l"], x)
        if x > p["k"] - 1:
            main = abs((w_main_term(p["k"], p["l"], 1, x) - w_main_term(p["k"], p["l"], -1, x)) / 2j)
        else:
            main = float("nan")
        err = abs(V - VW)
        worst = max(worst, err)
        rows.append((x, abs(V), abs(VW), main, err))
    return Output(["x", "abs_v", "abs_v_from_w", "abs_main", "error"], rows,
                  summary=f"{len(rows)} points, max |V - (W(x) - W(-x))/2i| = {worst:.3g}")


def _ddtest(p):
    from .oscillatory import PhaseContext, d11_preset, quadratic_preset
    kmin = None if p["kappa_min"] < 0 else p["kappa_min"]
    if p["preset"] == "quadratic":
        rep = quadratic_preset(p["scale"], kappa_min=1.0 if kmin is None else kmin)
    elif p["preset"] == "paperJ":
        X = p["x"]
        ctx = PhaseContext(u=X, v=X, c1=p["c1"], c2=p["c2"], d=p["d"], eta1=p["eta1"], eta2=p["eta2"],
                           K1=p["k"], K2=p["k"], m=p["m"], n=p["n"], alpha=p["alpha"], beta=p["beta"],
                           L1=p["l"], L2=p["l"])
        kw = {} if kmin is None else {"kappa_min": kmin}
        rep = d11_preset(ctx, X, **kw)
    else:
        raise DomainError("preset must be quadratic or paperJ")
    d = rep.as_dict()
    keys = list(d)
    return Output(keys, [tuple(d[k] for k in keys)],
                  summary=f"{p['preset']}: measured {rep.measured:.3g}, bound {rep.bound:.3g}, "
                          f"ratio {rep.ratio:.3g}, kappa {rep.kappa:.3g}")


HANDLERS = {
    "coeffs": _coeffs,
    "kloosterman": _kloosterman,
    "bessel": _bessel,
    "petersson verify": _petersson,
    "resonance scan": _resonance_scan,
    "resonance fit": _resonance_fit,
    "moment": _moment,
    "oscillatory vw": _vw,
    "oscillatory ddtest": _ddtest,
}


def _coerce(command, params):
    """Fill defaults, check required keys, and coerce types to the defaults' types."""
    if command not in DEFAULTS:
        raise DomainError(f"unknown command {command!r}; choose from {', '.join(DEFAULTS)}")
    unknown = set(params) - set(DEFAULTS[command])
    if unknown:
        raise DomainError(f"unknown parameter(s) for {command}: {', '.join(sorted(unknown))}")
    out = {}
    for key, default in DEFAULTS[command].items():
        val = params.get(key, default)
        if val is None:
            raise DomainError(f"{command}: --{key.replace('_', '-')} is required")
        if isinstance(default, bool):
            val = bool(val)
        elif isinstance(default, int) and not isinstance(val, list):
            if float(val) != int(val):
                raise DomainError(f"{key} must be an integer")
            val = int(val)
        elif isinstance(default, float) and not isinstance(val, list):
            val = float(val)
        out[key] = val
    for key in ("x", "xs"):
        if key in out and command in ("bessel", "oscillatory vw", "resonance fit"):
            v = out[key]
            out[key] = [float(t) for t in (v if isinstance(v, list) else [v])]
    if command in ("resonance scan", "moment", "oscillatory ddtest", "oscillatory vw"):
        for key in ("x", "k", "l", "k1", "l1", "k2", "l2", "beta", "alpha"):
            if key in out and not isinstance(out[key], list):
                out[key] = float(out[key])
    return out


def run(config: ExperimentConfig, out_path: str | None = None, stdout=None, stderr=None) -> int:
    """Run one experiment; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    t0 = time.perf_counter()
    try:
        params = _coerce(config.command, config.params)
        out = HANDLERS[config.command](params)
    except VALIDATION as exc:
        stderr.write(f"{config.command}: invalid input: {exc}\n")
        return 2
    except NUMERICAL as exc:
        stderr.write(f"{config.command}: numerical failure: {exc}\n")
        return 3
    text = render(out, config.format)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    stderr.write(f"{config.command}: {out.summary} [{time.perf_counter() - t0:.3f} s]\n")
    return 0


def _command_name(ns):
    cmd = getattr(ns, "command", None)
    if cmd in ("resonance", "oscillatory"):
        action = getattr(ns, "action", None)
        if action is None:
            raise DomainError(f"{cmd} needs an action")
        return f"{cmd} {action}"
    if cmd == "petersson":
        return "petersson verify"
    return cmd


def config_from_argv(argv) -> tuple[ExperimentConfig, str | None, str | None]:
    gl, rest = _globals_parser().parse_known_args(argv)
    base = ExperimentConfig.load(gl.config) if hasattr(gl, "config") else ExperimentConfig("")
    if rest and rest[0].startswith("-") and base.command:
        rest = base.command.split() + rest
    if rest:
        ns = _build_parser().parse_args(rest)
        command = _command_name(ns)
        given = {k: v for k, v in vars(ns).items() if k not in ("command", "action")}
        params = dict(base.params) if base.command in ("", command) else {}
        params.update(given)
    else:
        if not base.command:
            _build_parser().error("a subcommand (or --config naming one) is required")
        command, params = base.command, dict(base.params)
    cfg = ExperimentConfig(command, params, getattr(gl, "format", base.format),
                           getattr(gl, "threads", base.threads))
    return cfg, getattr(gl, "out", None), getattr(gl, "dump_config", None)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg, out, dump = config_from_argv(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DomainError, OSError) as exc:
        sys.stderr.write(f"cuspmoments: {exc}\n")
        return 2
    if dump:
        cfg.save(dump)
    return run(cfg, out)


if __name__ == "__main__":
    raise SystemExit(main())
