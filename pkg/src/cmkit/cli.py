"""
Command-line interface ``cm``.

Subcommands::

    cm check     --f EXPR [--order K] [--grid min:max:n:log|lin] [--seed S] [--expect-cm]
    cm transform --measure FILE.json --x 0.5,1,2 [--tol T]
    cm pairs     --name milsam2 --params a=1,b=1,c=2 [--x 0.3,1,3,10]
    cm invert    --f EXPR --t 0.5,1.5 [--tol T]
    cm krull     --f EXPR [--j 2] --x 1.0
    cm example   --name lem0|exa200|exa300 [--param a=0.5]

Output is JSON (``--format json``, the default) or aligned text.  Exit codes:
0 success, 1 computation error (reported as JSON), 2 refuted with
``--expect-cm``, 64 bad usage.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import cmtest, gammaex, inversion, krull, laplace
from . import expr as ex
from . import measure as ms
from .errors import CMError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUTED = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _csv_floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _keyvals(text):
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {item!r}")
        try:
            num = float(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"parameter {key!r} needs a number") from None
        out[key.strip()] = int(num) if num.is_integer() and key.strip() == "n" else num
    return out


def _grid(text):
    try:
        return cmtest.GridSpec.parse(text)
    except CMError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    p = _Parser(prog="cm", description="Numerical toolkit for completely monotone functions.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("check", parents=[common], help="CM grid test plus necessary conditions")
    c.add_argument("--f", required=True)
    c.add_argument("--order", type=int, default=cmtest.DEFAULT_ORDER)
    c.add_argument("--grid", type=_grid, default=None)
    c.add_argument("--jitter", type=float, default=0.0)
    c.add_argument("--expect-cm", action="store_true")
    c.add_argument("--quick", action="store_true", help="only the derivative-sign grid test")

    t = sub.add_parser("transform", parents=[common], help="Laplace transform of a measure file")
    t.add_argument("--measure", required=True)
    t.add_argument("--x", type=_csv_floats, required=True)

    pr = sub.add_parser("pairs", parents=[common], help="instantiate and verify a catalog pair")
    pr.add_argument("--name", required=True, choices=sorted(laplace.CATALOG))
    pr.add_argument("--params", type=_keyvals, default={})
    pr.add_argument("--x", type=_csv_floats, default=[0.3, 1.0, 3.0, 10.0])

    i = sub.add_parser("invert", parents=[common], help="distribution function by Fourier inversion")
    i.add_argument("--f", required=True)
    i.add_argument("--t", type=_csv_floats, required=True)

    k = sub.add_parser("krull", parents=[common], help="derivatives of solutions of g(x+1)-g(x)=f(x)")
    k.add_argument("--f", required=True)
    k.add_argument("--j", type=int, default=2)
    k.add_argument("--x", type=_csv_floats, required=True)
    k.add_argument("--order", type=int, default=None, help="alias for --j")

    e = sub.add_parser("example", parents=[common], help="Gamma-function examples")
    e.add_argument("--name", required=True, choices=("lem0", "exa200", "exa300"))
    e.add_argument("--param", type=_keyvals, default={})
    e.add_argument("--x", type=_csv_floats, default=[0.5, 1.0, 2.0, 5.0])
    return p


# ---------------------------------------------------------------------------
# commands


def _cmd_check(args):
    grid = args.grid or cmtest.DEFAULT_GRID
    if args.jitter:
        grid = cmtest.GridSpec(grid.x_min, grid.x_max, grid.points, grid.spacing, args.jitter)
    if args.quick:
        rng = np.random.default_rng(args.seed)
        report = cmtest.cm_grid_check(args.f, grid, args.order, rng=rng)
    else:
        report = cmtest.run_suite(args.f, grid, args.order, seed=args.seed)
    out = {"f": ex.to_text(ex.parse(args.f)), **report.to_dict()}
    code = EXIT_REFUTED if args.expect_cm and report.refuted else EXIT_OK
    return out, code


def _cmd_transform(args):
    with open(args.measure) as fh:
        mu = ms.from_json(fh.read())
    tol = args.tol or laplace.DEFAULT_TOL
    rows = []
    for x in args.x:
        v, err = laplace.transform_detail(mu, x, tol)
        rows.append({"x": x, "value": v, "error": err})
    return {"measure": ms.to_dict(mu), "values": rows}, EXIT_OK


def _cmd_pairs(args):
    pair = laplace.catalog(args.name, **args.params)
    tol = args.tol or 1e-11
    rows = []
    for x, fv, tv in pair.check(args.x, tol):
        rows.append({"x": x, "function": fv, "transform": tv,
                     "rel_diff": abs(fv - tv) / max(abs(fv), 1e-300)})
    worst = max(r["rel_diff"] for r in rows)
    out = {
        "name": pair.name,
        "params": pair.params,
        "function": ex.to_text(pair.function),
        "measure": _measure_summary(pair.measure),
        "constraints": pair.constraint_doc,
        "values": rows,
        "verified": worst <= 1e-7,
    }
    return out, EXIT_OK


def _measure_summary(mu):
    try:
        return ms.to_dict(mu)
    except CMError:
        return {"atoms": [{"t": a, "mass": m} for a, m in mu.atoms],
                "density": mu.density.describe() if mu.density else None,
                "support_hint": mu.support_hint}


def _cmd_invert(args):
    cfg = inversion.InversionConfig(tol=args.tol or 1e-6)
    est = inversion.invert_cm(args.f, args.t, cfg)
    return {"f": ex.to_text(ex.parse(args.f)), **est.to_dict()}, EXIT_OK


def _cmd_krull(args):
    j = args.order if args.order is not None else args.j
    tol = args.tol or 1e-12
    rows = []
    for x in args.x:
        if j == 1:
            v = krull.krull_gprime(args.f, x, tol=tol)
        elif j >= 2:
            v = krull.krull_gderiv(args.f, j, x, tol=tol)
        else:
            raise UsageError("--j must be at least 1")
        rows.append({"x": x, "value": v})
    return {"f": ex.to_text(ex.parse(args.f)), "j": j, "values": rows}, EXIT_OK


def _cmd_example(args):
    xs = args.x
    if args.name == "lem0":
        values = [{"x": x, "closed_form": gammaex.w_value(x), "quadrature": gammaex.w_by_quadrature(x)}
                  for x in xs]
        ts = [1e-6, 1e-3, 0.1, 1.0, 10.0]
        report = cmtest.cm_grid_check(gammaex.w_expr(), K=6)
        return {"name": "lem0", "function": ex.to_text(gammaex.w_expr()), "values": values,
                "density": [{"t": t, "value": gammaex.w_density(t)} for t in ts],
                "cm_check": report.verdict}, EXIT_OK
    if args.name == "exa200":
        a = args.param.get("a", 0.5)
        f = gammaex.g_a_expr(a)
        values = [{"x": x, "closed_form": gammaex.g_a_value(x, a),
                   "quadrature": gammaex.g_a_by_quadrature(x, a)} for x in xs]
        scan = gammaex.scan_exa_a()
        return {"name": "exa200", "a": a, "function": ex.to_text(f), "values": values,
                "cm_check": cmtest.cm_grid_check(f, K=6).verdict,
                "negated_cm_check": cmtest.cm_grid_check(-f, K=6).verdict,
                "u": [{"t": t, "value": gammaex.u(t)} for t in (1e-3, 0.1, 1.0, 10.0, 100.0)],
                "threshold": scan.to_dict()}, EXIT_OK
    b = args.param.get("b", gammaex.B_THRESHOLD + 1e-3)
    c = args.param.get("c", b - 0.5)
    f = gammaex.phi_bc_expr(b, c)
    values = [{"x": x, "closed_form": gammaex.phi_bc_value(x, b, c)} for x in xs]
    if abs(c - (b - 0.5)) < 1e-15:
        for row in values:
            row["quadrature"] = gammaex.phi_by_quadrature(row["x"], b)
    scan = gammaex.scan_exa_b()
    return {"name": "exa300", "b": b, "c": c, "function": ex.to_text(f), "values": values,
            "small_t_coefficient": gammaex.small_t_coefficient(b),
            "cm_check": cmtest.cm_grid_check(f, K=6).verdict,
            "threshold": scan.to_dict()}, EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "transform": _cmd_transform,
    "pairs": _cmd_pairs,
    "invert": _cmd_invert,
    "krull": _cmd_krull,
    "example": _cmd_example,
}


# ---------------------------------------------------------------------------
# output


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(u) for k, u in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else "-inf" if v < 0 else "nan"
    return v


def _text_lines(v, prefix=""):
    if isinstance(v, dict):
        width = max((len(str(k)) for k in v), default=0)
        for k, u in v.items():
            if isinstance(u, (dict, list)) and u:
                yield f"{prefix}{k}:"
                yield from _text_lines(u, prefix + "  ")
            else:
                yield f"{prefix}{str(k).ljust(width)}  {u}"
    elif isinstance(v, list):
        if v and all(isinstance(r, dict) for r in v):
            keys = list(dict.fromkeys(k for r in v for k in r))
            cells = [[_fmt(r.get(k, "")) for k in keys] for r in v]
            widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
            yield prefix + "  ".join(k.rjust(w) for k, w in zip(keys, widths))
            for c in cells:
                yield prefix + "  ".join(s.rjust(w) for s, w in zip(c, widths))
        else:
            for u in v:
                yield f"{prefix}- {_fmt(u)}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def render(payload, fmt):
    payload = _jsonable(payload)
    if fmt == "json":
        return json.dumps(payload, indent=2)
    return "\n".join(_text_lines(payload))


def run(argv=None, stdout=None):
    """Run the CLI and return the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        payload, code = _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"cm: error: {exc}\n")
        return EXIT_USAGE
    except (CMError, OSError, ValueError, ArithmeticError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if hasattr(exc, "offset"):
            err["error"]["offset"] = exc.offset
        stdout.write(json.dumps(err) + "\n")
        return EXIT_ERROR
    stdout.write(render(payload, args.format) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
