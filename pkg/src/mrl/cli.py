"""Command-line front end.

    mrl eval    --model SPEC --t 1,2,3 [--method quadrature|closed|expansion] [--order N]
    mrl compare --model SPEC --t ... [--orders 2,4,6]
    mrl coeffs  --model SPEC --t ... [--order N]
    mrl phik    --model SPEC --t ... [--order N]
    mrl check   --model SPEC --t ... [--n N] [--eps E]

Output is CSV (default) or an aligned table. Exit codes: 0 success,
2 usage or parse error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import core, expansion
from .errors import CapabilityError, DomainError, MRLError, SpecParseError
from .models import build_model, parse_model_spec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

NA = "NA"
_METHOD_NAMES = {"quadrature": "quadrature", "closed": "closed_family", "expansion": "expansion"}


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _model_arg(text):
    try:
        return parse_model_spec(text)
    except SpecParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="mrl", description="Mean residual life from the failure rate.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--model", required=True, type=_model_arg, help='e.g. "chen(lambda=1,beta=0.5)"')
        p.add_argument("--t", type=_float_list, help="comma-separated evaluation points")
        p.add_argument("--t-start", type=float)
        p.add_argument("--t-end", type=float)
        p.add_argument("--t-steps", type=int, help="number of intervals; both ends included")
        p.add_argument("--format", choices=("csv", "table"), default="csv")

    p = sub.add_parser("eval", help="evaluate m(t) by one method")
    common(p)
    p.add_argument("--method", choices=tuple(_METHOD_NAMES), default="quadrature")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--rel-tol", type=float, default=1e-8)

    p = sub.add_parser("compare", help="compare closed form and expansions against quadrature")
    common(p)
    p.add_argument("--orders", type=_int_list, default=[2, 4, 6])
    p.add_argument("--rel-tol", type=float, default=1e-8)

    p = sub.add_parser("coeffs", help="expansion coefficients b_k(t)")
    common(p)
    p.add_argument("--order", type=int, default=6)

    p = sub.add_parser("phik", help="Gaussian moments phi_k(t)")
    common(p)
    p.add_argument("--order", type=int, default=6)

    p = sub.add_parser("check", help="growth-condition diagnostics")
    common(p)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--eps", type=float, default=2.0 / 3.0)
    return parser


def _t_points(args):
    ranged = (args.t_start, args.t_end, args.t_steps)
    if args.t is not None:
        if any(v is not None for v in ranged):
            raise UsageError("give either --t or --t-start/--t-end/--t-steps, not both")
        return list(args.t)
    if any(v is None for v in ranged):
        raise UsageError("evaluation points required: --t or all of --t-start/--t-end/--t-steps")
    start, end, steps = ranged
    if steps < 1:
        raise UsageError("--t-steps must be >= 1")
    if not end > start:
        raise UsageError("--t-end must exceed --t-start")
    return [start + (end - start) * i / steps for i in range(steps)] + [end]


def _validate(args, model, points):
    for t in points:
        if not model.in_support(t):
            lo, hi = model.support
            raise UsageError(f"t={t!r} lies outside the support [{lo}, {hi}) of {model.spec.render()}")
        if math.isfinite(model.support[1]) and model.support[1] - t < core.ENDPOINT_GUARD:
            raise UsageError(f"t={t!r} is too close to the support endpoint {model.support[1]}")
    cmd = args.command
    needs_derivs = cmd in ("coeffs", "phik", "check") or (cmd == "eval" and args.method == "expansion")
    if needs_derivs and model.derivative_order < 1:
        raise UsageError(
            f"{model.family} has no analytic hazard derivatives; {cmd} needs the linear or chen model"
        )
    if cmd == "eval" and args.method == "closed" and not (
        model.has_family_data or model.family == "exponential"
    ):
        raise UsageError(f"{model.family} has no closed family form; use quadrature or expansion")
    orders = []
    if cmd == "eval" and args.method == "expansion":
        orders = [args.order]
    elif cmd in ("coeffs", "phik"):
        orders = [args.order]
    elif cmd == "compare":
        orders = args.orders
    if any(n < 1 for n in orders):
        raise UsageError("orders must be >= 1")
    if cmd == "check" and args.n < 3:
        raise UsageError("--n must be >= 3")
    if cmd == "check" and not args.eps > 0.0:
        raise UsageError("--eps must be > 0")
    if cmd in ("check",) and any(b <= a for a, b in zip(points, points[1:])):
        raise UsageError("check needs strictly increasing t values")
    if hasattr(args, "rel_tol") and not args.rel_tol >= 1e-12:
        raise UsageError("--rel-tol must be >= 1e-12")


# -- rows -----------------------------------------------------------------------


def _cmd_eval(args, model, points):
    method = _METHOD_NAMES[args.method]
    rows = []
    for t in points:
        err = NA
        if method == "quadrature":
            res = core.mrl_quadrature(model, t, args.rel_tol)
            value, err = res.value, res.abs_err_est
        elif method == "closed_family":
            value = core.mrl_closed_family(model, t)
        else:
            value = expansion.mrl_expansion(model, t, args.order)
        try:
            rate = model.hazard(t)
        except (ArithmeticError, DomainError):
            rate = NA
        order = args.order if method == "expansion" else NA
        rows.append([t, method, order, value, err, rate])
    return ["t", "method", "order", "value", "err_est", "hazard"], rows


def _deviation(value, ref):
    if value == NA or ref == NA:
        return NA, NA
    diff = abs(value - ref)
    return diff, diff / abs(ref)


def _cmd_compare(args, model, points):
    rows = []
    any_ok = False
    for t in points:
        try:
            ref = core.mrl_quadrature(model, t, args.rel_tol).value
            any_ok = True
        except (MRLError, ArithmeticError):
            ref = NA
        rows.append([t, "quadrature", NA, ref, *((0.0, 0.0) if ref != NA else (NA, NA))])
        candidates = [("closed_family", NA, lambda: core.mrl_closed_family(model, t))]
        for n in args.orders:
            candidates.append(("expansion", n, lambda n=n: expansion.mrl_expansion(model, t, n)))
        for name, order, fn in candidates:
            try:
                value = fn()
                any_ok = True
            except (MRLError, ArithmeticError):
                value = NA
            rows.append([t, name, order, value, *_deviation(value, ref)])
    if not any_ok:
        raise _AllFailed("every method failed at every point")
    return ["t", "method", "order", "value", "abs_err", "rel_err"], rows


class _AllFailed(Exception):
    pass


def _cmd_coeffs(args, model, points):
    rows = []
    for t in points:
        derivs = model.hazard_derivatives(t, max(1, args.order - 2))
        coeffs = expansion.coeffs_recurrence(derivs[2:], args.order - 1, t=t)
        rows.extend([t, k, float(b)] for k, b in enumerate(coeffs.b))
    return ["t", "k", "b"], rows


def _cmd_phik(args, model, points):
    rows = []
    for t in points:
        _, phis = expansion.expansion_terms(model, t, args.order)
        for k, (v, m, e) in enumerate(zip(phis.phi, phis.method, phis.abs_err_est)):
            rows.append([t, k, v, m, e])
    return ["t", "k", "phi", "method", "err_est"], rows


def _cmd_check(args, model, points, err):
    rep = expansion.check_hypotheses(model, args.n, args.eps, points)
    rows = []
    for t, eps_row, growth_row, uni in zip(rep.t_grid, rep.ratios_eps, rep.ratios_growth, rep.uniform_ratio):
        rows.extend([t, "eps", j, v] for j, v in zip(range(3, args.n + 1), eps_row))
        rows.extend([t, "growth", j, v] for j, v in zip(range(3, args.n), growth_row))
        rows.append([t, "uniform", args.n - 1, uni])
    print(f"verdict: {rep.verdict}", file=err)
    return ["t", "kind", "j", "ratio"], rows


# -- formatting -------------------------------------------------------------------


def _csv_cell(v):
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    # repr is the shortest string that round-trips exactly
    return repr(float(v))


def _table_cell(v):
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return f"{v:.10g}"


def render(header, rows, fmt):
    if fmt == "csv":
        lines = [",".join(header)]
        lines.extend(",".join(_csv_cell(v) for v in row) for row in rows)
        return "\n".join(lines) + "\n"
    cells = [list(header)] + [[_table_cell(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells) + "\n"


def run(argv, out=None, err=None):
    """Execute one CLI invocation; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        model = build_model(args.model)
        points = _t_points(args)
        _validate(args, model, points)
    except UsageError as exc:
        print(str(exc), file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK

    handlers = {
        "eval": _cmd_eval,
        "compare": _cmd_compare,
        "coeffs": _cmd_coeffs,
        "phik": _cmd_phik,
        "check": lambda a, m, p: _cmd_check(a, m, p, err),
    }
    try:
        header, rows = handlers[args.command](args, model, points)
    except CapabilityError as exc:
        print(f"mrl: error: {exc}", file=err)
        return EXIT_USAGE
    except (MRLError, ArithmeticError, _AllFailed) as exc:
        print(f"mrl: numeric error: {exc}", file=err)
        return EXIT_NUMERIC
    out.write(render(header, rows, args.format))
    return EXIT_OK


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
