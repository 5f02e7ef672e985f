"""Command-line interface: ``dunkl <command> [options]``.

Exit codes: 0 success, 1 a verification failed (or an internal regularity
error), 2 bad input.  Errors are printed as JSON with a module code.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .asymptotics import AsymptoticProbe, half_plane_limit_probe, ray_limit_probe, short_time_heat_ratio
from .calculus import DunklCalculus, parse_operator
from .errors import ConfigurationError, DunklError, PreconditionError, TruncationError
from .hermite import HermiteSystem
from .intertwiner import Intertwiner
from .kernel import KernelEvaluator
from .polynomial import parse_poly
from .quadrature import gaussian_wk_rule, jacobi_k_rule, lebesgue_wk_rule
from .roots import build_standard, from_descriptor
from .scalars import Q, fmt, parse_rational_list
from .transform import (NAMED_FUNCTIONS, HeatKernel, TransformPlan, dunkl_laplacian_numeric, function_battery,
                        time_derivative)
from .verify import SUITES, Options, rank_one_companion, run_suite

DEFAULT_DIM = {"R1": 1, "A": 3, "B": 2, "I2": 5}
INPUT_ERRORS = (ConfigurationError, PreconditionError, TruncationError)


# -- plumbing ---------------------------------------------------------------

def _floats(text, name):
    try:
        return [float(Q(t)) if "/" in t else float(t) for t in str(text).split(",") if t.strip()]
    except (ValueError, DunklError) as exc:
        raise ConfigurationError(f"--{name}: cannot parse {text!r}") from exc


def _complex_list(text, name):
    try:
        return [complex(t.strip().replace("i", "j")) if ("i" in t or "j" in t) else float(Q(t.strip()))
                for t in str(text).split(",") if t.strip()]
    except (ValueError, DunklError) as exc:
        raise ConfigurationError(f"--{name}: cannot parse {text!r}") from exc


def build_context(args):
    group = args.group
    if os.path.exists(group):
        with open(group) as fh:
            ctx = from_descriptor(fh.read())
        if args.k is not None:
            ctx = ctx.with_k(parse_rational_list(args.k))
        return ctx
    tag = group.strip().upper()
    dim = args.dim if args.dim is not None else DEFAULT_DIM.get(tag, 2)
    k = args.k if args.k is not None else "1/2"
    values = [t.strip() for t in k.split(",") if t.strip()]
    return build_standard(tag, dim, values)


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def emit(data, fmt_name, out):
    """Write a dict (json/text) or a table {"columns": [...], "rows": [...]} (csv too)."""
    if fmt_name == "json":
        out.write(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    elif fmt_name == "csv":
        if "rows" not in data:
            rows = [(k, json.dumps(_jsonable(v)) if isinstance(v, (dict, list)) else v) for k, v in sorted(data.items())]
            data = {"columns": ["key", "value"], "rows": rows}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(data["columns"])
        for r in data["rows"]:
            w.writerow([_cell(c) for c in r])
        out.write(buf.getvalue())
    else:
        if "lines" in data:
            out.write("\n".join(data["lines"]) + "\n")
        elif "rows" in data:
            out.write("  ".join(data["columns"]) + "\n")
            for r in data["rows"]:
                out.write("  ".join(str(_cell(c)) for c in r) + "\n")
        else:
            for key in sorted(data):
                out.write(f"{key}: {_jsonable(data[key])}\n")


def _cell(c):
    if isinstance(c, complex):
        return repr(c.real) if c.imag == 0 else f"{c.real!r}{c.imag:+.17g}j"
    if isinstance(c, float):
        return repr(c)
    return c


def _value(v):
    v = complex(v)
    return v.real if v.imag == 0 else v


# -- commands ---------------------------------------------------------------

def cmd_group(args):
    return build_context(args).describe()


def cmd_apply(args):
    ctx = build_context(args)
    calc = DunklCalculus(ctx)
    op = parse_operator(calc, args.op)
    p = parse_poly(args.poly, ctx.dim)
    return {"operator": args.op, "input": p.to_text(), "result": op(calc.coerce(p)).to_text()}


def cmd_pair(args):
    ctx = build_context(args)
    calc = DunklCalculus(ctx)
    v = calc.pair(parse_poly(args.p, ctx.dim), parse_poly(args.q, ctx.dim))
    return {"value": fmt(v)}


def _report_payload(reports, args, title):
    ok = all(r.passed for r in reports)
    lines = [f"seed {args.seed}"]
    for r in reports:
        lines.append(r.text())
    lines.append(f"{title}: {'PASS' if ok else 'FAIL'}")
    return {"suite": title, "seed": args.seed, "passed": ok, "reports": [r.to_dict() for r in reports],
            "lines": lines}, (0 if ok else 1)


def _options(args):
    return Options(max_degree=args.max_degree, truncation=args.truncation, nodes=args.nodes, seed=args.seed)


def cmd_intertwine(args):
    ctx = build_context(args)
    if args.verify:
        return _report_payload(run_suite("intertwiner", ctx, _options(args)), args, "intertwiner")
    if not args.poly:
        raise ConfigurationError("give --poly or --verify")
    p = parse_poly(args.poly, ctx.dim)
    V = Intertwiner(ctx, max(p.degree, 0))
    return {"input": p.to_text(), "result": V.apply(p).to_text()}


def cmd_integrate(args):
    ctx = build_context(args)
    if args.measure == "gaussian-wk":
        rule = gaussian_wk_rule(ctx, args.nodes)
    elif args.measure == "lebesgue-wk":
        rule = lebesgue_wk_rule(ctx, args.length, args.nodes)
    else:
        if ctx.dim != 1:
            raise ConfigurationError("the JacobiK rule is one-dimensional")
        rule = jacobi_k_rule(float(ctx.k_values[0]), args.nodes)
    if args.export:
        text = rule.to_csv()
        return {"columns": text.splitlines()[0].split(","),
                "rows": [line.split(",") for line in text.splitlines()[1:]]}
    out = {"measure": rule.measure, "nodes": rule.size, "accuracy": rule.accuracy, "total": rule.total()}
    if args.expr:
        out["expr"] = args.expr
        out["value"] = rule.integrate(parse_poly(args.expr, ctx.dim))
    return out


def cmd_kernel(args):
    ctx = build_context(args)
    x = _floats(args.x, "x")
    y = _complex_list(args.y, "y")
    ev = KernelEvaluator(ctx, truncation=args.truncation)
    if args.bessel:
        value = ev.J(x, y)
        M, tail = ev.degree_needed(x, y)
        return {"function": "J_k", "value": _value(value), "truncation": M, "tail_bound": tail}
    with np.errstate(over="ignore"):
        res = ev.evaluate(x, y)
    if not np.isfinite(res["value"]):
        raise PreconditionError("E_k(x, y) overflows double precision at this argument")
    res["value"] = _value(res["value"])
    res["function"] = "E_k"
    return res


def cmd_hermite(args):
    ctx = build_context(args)
    if args.check:
        if args.check != "all":
            raise ConfigurationError("--check accepts 'all'")
        return _report_payload(run_suite("hermite", ctx, _options(args)), args, "hermite")
    sys_ = HermiteSystem(ctx, args.max_degree)
    rows = [("".join(str(e) for e in nu) if ctx.dim == 1 else ",".join(str(e) for e in nu),
             sys_.phi[nu].to_text(), sys_.H[nu].to_text(), fmt(sys_.norms[nu])) for nu in sys_.labels]
    return {"columns": ["nu", "phi", "H", "squared_norm"], "rows": rows}


def _rank_one(args):
    ctx = build_context(args)
    return rank_one_companion(ctx)


def cmd_transform(args):
    ctx = _rank_one(args)
    plan = TransformPlan(ctx, nodes=args.nodes if args.nodes >= 100 else 200)
    funcs = dict(function_battery())
    funcs.update({k: v[0] for k, v in NAMED_FUNCTIONS.items()})
    if args.f not in funcs:
        raise ConfigurationError(f"--f must be one of: {', '.join(sorted(funcs))}")
    xi = _floats(args.xi, "xi")
    res = plan.transform(funcs[args.f], xi)
    out = {"function": args.f, "xi": xi, "value": _value(res["value"]), "boundary_mass": res["boundary_mass"],
           "truncated_ok": res["truncated_ok"], "nodes": res["nodes"]}
    if args.f in NAMED_FUNCTIONS:
        exact = NAMED_FUNCTIONS[args.f][1](np.asarray(xi))
        out["exact"] = exact
        out["error"] = abs(res["value"] - exact)
    return out


def cmd_heat(args):
    ctx = _rank_one(args)
    hk = HeatKernel(ctx)
    t, x, y = float(args.t), float(Q(args.x)) if "/" in args.x else float(args.x), \
        float(Q(args.y)) if "/" in args.y else float(args.y)
    if t <= 0:
        raise ConfigurationError("--t must be positive")
    if not args.check:
        v = hk.gamma_k(t, x, y)
        return {"t": t, "x": x, "y": y, "value": v, "gaussian_bound": hk.gaussian_bound(t, [x], [y])}
    plan = TransformPlan(ctx)
    rule = plan.rule
    nodes = rule.nodes[:, 0]
    tol = 1e-6
    if args.check == "mass":
        value = float(np.dot(rule.weights, hk.gamma_k(t, x, nodes)))
        err = abs(value - 1)
        return {"check": "mass", "value": value, "error": err, "tolerance": tol, "pass": err <= tol}
    if args.check == "semigroup":
        value = float(np.dot(rule.weights, hk.gamma_k(t, x, nodes) * hk.gamma_k(t, y, nodes)))
        ref = hk.gamma_k(2 * t, x, y)
        err = abs(value - ref)
        return {"check": "semigroup", "value": value, "reference": ref, "error": err, "tolerance": tol,
                "pass": err <= tol}
    if args.check == "pde":
        if x == 0:
            raise ConfigurationError("the finite-difference Laplacian needs x != 0")
        lap = dunkl_laplacian_numeric(lambda z: hk.gamma_k(t, z, y), x, hk.k)
        dt = time_derivative(lambda s: hk.gamma_k(s, x, y), t)
        err = abs(lap - dt)
        return {"check": "pde", "laplacian": lap, "time_derivative": dt, "error": err, "tolerance": 1e-4,
                "pass": err <= 1e-4, "steps": {"x": 1e-4, "t": 1e-3 * t}}
    if args.check == "markov":
        from .special import rank_one_kernel_imag
        xis = np.linspace(-3, 3, 13)
        got = hk.ck * plan.transform_many(lambda X: hk.gamma_k(t, x, X[:, 0]), xis)
        want = rank_one_kernel_imag(hk.k, -x * xis) * np.exp(-t * xis ** 2)
        err = float(np.abs(got - want).max())
        return {"check": "markov", "error": err, "tolerance": tol, "pass": err <= tol}
    raise ConfigurationError("--check must be mass, semigroup, pde or markov")


def cmd_asympt(args):
    ctx = _rank_one(args)
    probe = AsymptoticProbe.build(ctx.k_values[0])
    x = float(Q(args.x)) if "/" in args.x else float(args.x)
    y = float(Q(args.y)) if "/" in args.y else float(args.y)
    ts = _floats(args.t, "t") if args.t else None
    if args.mode == "ray":
        rows = ray_limit_probe(probe, x, y, ts or [50, 100, 200, 400])
    elif args.mode == "halfplane":
        rows = half_plane_limit_probe(probe, x, y, ts or [50, 100, 200])
    else:
        rows = short_time_heat_ratio(probe, x, y, ts or [1e-1, 1e-2, 1e-3])
    return {"columns": ["t", "value", "target", "error"], "rows": [tuple(r) for r in rows]}


def cmd_verify(args):
    ctx = build_context(args)
    return _report_payload(run_suite(args.suite, ctx, _options(args)), args, args.suite)


COMMANDS = {
    "group": cmd_group, "apply": cmd_apply, "pair": cmd_pair, "intertwine": cmd_intertwine,
    "integrate": cmd_integrate, "kernel": cmd_kernel, "hermite": cmd_hermite, "transform": cmd_transform,
    "heat": cmd_heat, "asympt": cmd_asympt, "verify": cmd_verify,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", "--type", dest="group", default="R1",
                        help="A, B, I2, R1 or a JSON descriptor file")
    common.add_argument("--dim", type=int, help="ambient dimension (A, B) or n for I2")
    common.add_argument("--k", help='multiplicities per orbit, e.g. "1/2,1"')
    common.add_argument("--max-degree", type=int, default=6)
    common.add_argument("--truncation", type=int, default=40)
    common.add_argument("--nodes", type=int, default=80)
    common.add_argument("--format", choices=["json", "csv", "text"])
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="dunkl", description="Computational rational Dunkl theory.")
    parser.add_argument("--version", action="version", version=f"dunkl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="describe a root system and its group")
    p.add_argument("--info", action="store_true")
    p = sub.add_parser("apply", parents=[common], help="apply a Dunkl-operator expression")
    p.add_argument("--op", required=True)
    p.add_argument("--poly", required=True)
    p = sub.add_parser("pair", parents=[common], help="Fischer pairing [p, q]_k")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p = sub.add_parser("intertwine", parents=[common], help="intertwining operator V_k")
    p.add_argument("--poly")
    p.add_argument("--verify", action="store_true")
    p = sub.add_parser("integrate", parents=[common], help="quadrature against w_k measures")
    p.add_argument("--measure", choices=["gaussian-wk", "lebesgue-wk", "jacobi-k"], default="gaussian-wk")
    p.add_argument("--expr")
    p.add_argument("--length", type=float, default=12.0)
    p.add_argument("--export", action="store_true", help="print the rule as CSV")
    p = sub.add_parser("kernel", parents=[common], help="Dunkl kernel E_k(x, y)")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--bessel", action="store_true")
    p = sub.add_parser("hermite", parents=[common], help="generalized Hermite system")
    p.add_argument("--list", action="store_true")
    p.add_argument("--check")
    p = sub.add_parser("transform", parents=[common], help="rank-one Dunkl transform")
    p.add_argument("--f", default="gaussian")
    p.add_argument("--xi", required=True)
    p = sub.add_parser("heat", parents=[common], help="rank-one heat kernel")
    p.add_argument("--t", required=True, type=float)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--check", choices=["mass", "semigroup", "pde", "markov"])
    p = sub.add_parser("asympt", parents=[common], help="rank-one asymptotic probes")
    p.add_argument("--x", default="1")
    p.add_argument("--y", default="1")
    p.add_argument("--mode", choices=["ray", "halfplane", "heat"], default="ray")
    p.add_argument("--t")
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    if args.max_degree < 1 or args.truncation < 1 or args.nodes < 1:
        return _fail(ConfigurationError("caps must be >= 1"), out, 2)
    try:
        result = COMMANDS[args.command](args)
    except INPUT_ERRORS as exc:
        return _fail(exc, out, 2)
    except DunklError as exc:
        return _fail(exc, out, 1)
    code = 0
    if isinstance(result, tuple):
        result, code = result
    fmt_name = args.format or ("csv" if "rows" in result else "text" if "lines" in result else "json")
    if fmt_name == "json":
        result = {k: v for k, v in result.items() if k != "lines"}
    emit(result, fmt_name, out)
    return code


def _fail(exc, out, code):
    err = {"code": exc.code, "type": type(exc).__name__, "message": str(exc)}
    if getattr(exc, "suggested_truncation", None) is not None:
        err["suggested_truncation"] = exc.suggested_truncation
    out.write(json.dumps({"error": err}, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
