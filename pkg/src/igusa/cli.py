"""Command-line front end: ``igusa <command> [flags]``, JSON on stdout.

Exit codes: 0 success, 1 selftest failure, 2 domain/input errors,
3 convergence failures.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .continuation import Continuation
from .errors import ConvergenceError, DomainFormatError, IgusaError
from .moments import Domain, moments
from .mpoly import default_vars, parse_poly, restrict_chart
from .quadrature import QuadConfig
from .recurrence import SLACK, guess_ode, guess_recurrence, ode_to_recurrence, verify_recurrence


def _render(obj) -> str:
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(repr(obj))
        return "%.12e" % obj
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_render(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_render(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON: insertion key order, floats as %.12e, no whitespace."""
    return _render(obj)


def _load_domain(spec: str, nvars):
    if spec.strip() == "standard":
        if nvars is None:
            raise DomainFormatError("-n is required with the standard domain")
        return Domain.standard(nvars)
    path = Path(spec)
    text = path.read_text() if path.exists() else spec
    return Domain.from_json(text, nvars)


def _load_poly(args, nvars):
    if args.homogeneous:
        f = parse_poly(args.f, default_vars(nvars, homogeneous=True))
        return restrict_chart(f)
    return parse_poly(args.f, default_vars(nvars))


def _inputs(args):
    d = _load_domain(args.d, args.n)
    return _load_poly(args, d.nvars), d


def _quad(args) -> QuadConfig:
    return QuadConfig(tol=args.quad_tol, max_depth=args.quad_max_depth, base_rule=args.quad_rule)


def _search_length(args) -> int:
    return (args.max_order + 1) * (args.max_degree + 1) + args.max_order + args.verify + SLACK


def _recurrence(args, f, d):
    mom = moments(f, d, _search_length(args) - 1)
    return guess_recurrence(mom, args.max_order, args.max_degree, args.verify), mom


def cmd_moments(args):
    f, d = _inputs(args)
    mom = moments(f, d, args.N)
    return {"values": mom.to_json()["values"]}


def cmd_guess(args):
    f, d = _inputs(args)
    n_mom = max(args.N + 1 if args.N is not None else 0, _search_length(args))
    mom = moments(f, d, n_mom - 1)
    rec = guess_recurrence(mom, args.max_order, args.max_degree, args.verify)
    return {"recurrence": rec.to_json(), "verification": verify_recurrence(rec, mom).to_json()}


def cmd_ode(args):
    f, d = _inputs(args)
    length = (args.max_order + 1) * (args.max_degree + 1) + args.max_order + SLACK + args.verify
    if args.N is not None:
        length = max(length, args.N + 1)
    mom = moments(f, d, length - 1)
    ode = guess_ode(mom.values, args.max_order, args.max_degree)
    rec = ode_to_recurrence(ode)
    return {"ode": ode.to_json(), "recurrence": rec.to_json(),
            "verification": verify_recurrence(rec, mom).to_json()}


def cmd_laurent(args):
    f, d = _inputs(args)
    rec, _ = _recurrence(args, f, d)
    exp = Continuation(f, d, rec, _quad(args)).laurent_at(args.s0, args.K)
    return exp.to_json()


def cmd_eval(args):
    f, d = _inputs(args)
    rec, _ = _recurrence(args, f, d)
    value, err = Continuation(f, d, rec, _quad(args)).evaluate(args.s)
    return {"s": args.s, "value": value, "err": err}


def cmd_poles(args):
    f, d = _inputs(args)
    rec, _ = _recurrence(args, f, d)
    poles = Continuation(f, d, rec, _quad(args)).poles(args.s_min)
    return {"poles": [p.to_json() for p in poles]}


def cmd_selftest(args):
    from .selftest import run_all

    checks = run_all()
    for c in checks:
        print(c.line(), file=sys.stderr)
    return {"checks": [c.to_json() for c in checks], "passed": all(c.passed for c in checks)}


COMMANDS = {
    "moments": cmd_moments,
    "guess": cmd_guess,
    "ode": cmd_ode,
    "laurent": cmd_laurent,
    "eval": cmd_eval,
    "poles": cmd_poles,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", required=True, help="polynomial, e.g. 'x1*x2' or '3/2*x1^3 + x1'")
    common.add_argument("-d", default="standard", help="domain JSON file, inline JSON, or 'standard'")
    common.add_argument("-n", type=int, default=None, help="number of affine variables")
    common.add_argument("--homogeneous", action="store_true",
                        help="f is given in x0..xn; substitute x0 = 1 - x1 - ... - xn")
    common.add_argument("--max-order", type=int, default=4)
    common.add_argument("--max-degree", type=int, default=6)
    common.add_argument("--verify", type=int, default=20, help="held-out moments for verification")
    common.add_argument("--quad-tol", type=float, default=1e-12)
    common.add_argument("--quad-max-depth", type=int, default=48)
    common.add_argument("--quad-rule", type=int, default=10)

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="igusa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("moments", parents=[common, out], help="exact moments I(0..N)")
    p.add_argument("-N", type=int, required=True)
    p = sub.add_parser("guess", parents=[common, out], help="guess and verify a recurrence")
    p.add_argument("-N", type=int, default=None)
    p = sub.add_parser("ode", parents=[common, out], help="guess an ODE for J(t), convert to a recurrence")
    p.add_argument("-N", type=int, default=None)
    p = sub.add_parser("laurent", parents=[common, out], help="Laurent expansion at an integer")
    p.add_argument("--s0", type=int, required=True)
    p.add_argument("-K", type=int, default=2)
    p = sub.add_parser("eval", parents=[common, out], help="continued value at real s")
    p.add_argument("-s", type=float, required=True)
    p = sub.add_parser("poles", parents=[common, out], help="poles at negative integers")
    p.add_argument("--s-min", type=int, required=True)
    sub.add_parser("selftest", parents=[out], help="run the closed-form acceptance suite")
    return parser


def _validate(args):
    if getattr(args, "N", None) is not None and args.N < 0:
        raise IgusaError("-N must be >= 0")
    if getattr(args, "K", None) is not None and args.K < 0:
        raise IgusaError("-K must be >= 0")
    if args.command == "poles" and args.s_min > -1:
        raise IgusaError("--s-min must be a negative integer")
    if args.command != "selftest" and (args.max_order < 1 or args.max_degree < 0 or args.verify < 1):
        raise IgusaError("search bounds must satisfy max-order >= 1, max-degree >= 0, verify >= 1")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        result = COMMANDS[args.command](args)
        code = 0 if result.get("passed", True) else 1
    except IgusaError as exc:
        result = {"error": {"kind": exc.kind, "detail": exc.detail}}
        code = 3 if isinstance(exc, ConvergenceError) else exc.exit_code
    except (ValueError, OSError) as exc:
        result = {"error": {"kind": type(exc).__name__, "detail": str(exc)}}
        code = 2
    text = dumps(result) + "\n"
    if getattr(args, "o", None):
        Path(args.o).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
