"""Command-line front end: ``polydirich <command> ...``.

Exit status is 0 on success, 1 when a check or the suite does not pass (or a
norm estimate fails to converge) and 2 on usage errors, malformed input or
out-of-domain points.
"""
from __future__ import annotations

import argparse
import datetime
import json
import math
import sys

from .errors import PolydirichError
from .harness import CATALOG, Verdict, full_suite, run_check
from .multipliers import finite_section, operator_norm
from .series import FamilyId, NamedFamily, evaluate, generate, read_csv, to_csv
from .space import kernel_series, norm


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def fmt_float(x: float) -> str:
    """Shortest round-trip repr for plain-text output."""
    return repr(float(x))


def fmt_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0.0:
        return fmt_float(c.real)
    return f"{fmt_float(c.real)},{fmt_float(c.imag)}"


def _json_value(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return _json_value(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _json_value(obj)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _floats(text: str, n: int | None, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"{what}: expected {n} numbers, got {len(vals)}")
    return vals


def _weight(text: str, what: str = "--alpha") -> tuple[float, float]:
    a1, a2 = _floats(text, 2, what)
    return a1, a2


def _deg(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        vals = [int(t) for t in parts]
    except ValueError:
        raise UsageError(f"--deg: expected K,L integers, got {text!r}") from None
    if len(vals) == 1:
        vals = vals * 2
    if len(vals) != 2 or min(vals) < 0:
        raise UsageError(f"--deg: expected two nonnegative integers, got {text!r}")
    return vals[0], vals[1]


def _point(text: str) -> tuple[complex, complex]:
    """``z,w`` (real) or ``zre,zim,wre,wim``."""
    vals = _floats(text, None, "--at")
    if len(vals) == 2:
        return complex(vals[0]), complex(vals[1])
    if len(vals) == 4:
        return complex(vals[0], vals[1]), complex(vals[2], vals[3])
    raise UsageError("--at: expected z,w or zre,zim,wre,wim")


def _param_value(text: str):
    try:
        return json.loads(text)
    except ValueError:
        pass
    if "," in text:
        return _floats(text, None, "--param")
    return text


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _param_value(v.strip())
    return out


def _emit_csv(series, out_path):
    text = to_csv(series)
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads (default: POLYDIRICH_THREADS or 4)")
    common.add_argument("--no-timestamp", action="store_true", default=argparse.SUPPRESS,
                        help="omit timestamps and timings from JSON reports")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print results as JSON")
    p = argparse.ArgumentParser(prog="polydirich", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("norm", help="D_alpha norm of a coefficient CSV")
    s.add_argument("series")
    s.add_argument("--alpha", required=True)

    s = sub.add_parser("eval", help="evaluate a coefficient CSV at a point")
    s.add_argument("series")
    s.add_argument("--at", required=True)

    s = sub.add_parser("kernel", help="write the truncated reproducing kernel as CSV")
    s.add_argument("--alpha", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--deg", required=True)
    s.add_argument("--out")

    s = sub.add_parser("opnorm", help="finite-section norm of T_h : D_alpha -> D_beta")
    s.add_argument("series")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s.add_argument("--deg", required=True)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--max-iter", type=int, default=10_000)

    s = sub.add_parser("generate", help="write a named family truncation as CSV")
    s.add_argument("--family", required=True, choices=[f.value for f in FamilyId])
    s.add_argument("--alpha")
    s.add_argument("--f1", help="tensor family: comma-separated real coefficients")
    s.add_argument("--f2", help="tensor family: comma-separated real coefficients")
    s.add_argument("--deg", required=True)
    s.add_argument("--out")

    s = sub.add_parser("check", help="run one catalogue check")
    s.add_argument("check_id")
    s.add_argument("--param", action="append", metavar="KEY=VALUE")

    s = sub.add_parser("suite", help="run every catalogue check")
    s.add_argument("--config", help="JSON config file")
    return p


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_norm(args):
    v = norm(read_csv(args.series), _weight(args.alpha))
    print(dumps({"norm": v}) if args.json else fmt_float(v))
    return 0


def _cmd_eval(args):
    z, w = _point(args.at)
    v = evaluate(read_csv(args.series), z, w)
    print(dumps({"value": [v.real, v.imag]}) if args.json else fmt_complex(v))
    return 0


def _cmd_kernel(args):
    z0, w0 = _point(args.at)
    _emit_csv(kernel_series(_weight(args.alpha), z0, w0, _deg(args.deg)), args.out)
    return 0


def _cmd_opnorm(args):
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    h = read_csv(args.series)
    op = finite_section(h, _weight(args.alpha), _weight(args.beta, "--beta"), _deg(args.deg))
    est = operator_norm(op, tol=args.tol, max_iter=args.max_iter)
    if args.json:
        print(dumps({"value": est.value, "iterations": est.iterations,
                     "residual": est.residual, "converged": est.converged}))
    else:
        print(fmt_float(est.value))
    if not est.converged:
        print(f"warning: no convergence after {est.iterations} iterations", file=sys.stderr)
        return 1
    return 0


def _cmd_generate(args):
    params = {}
    if args.alpha is not None:
        params["alpha"] = _weight(args.alpha)
    if args.family == FamilyId.TENSOR.value:
        if not (args.f1 and args.f2):
            raise UsageError("tensor family needs --f1 and --f2")
        params["f1"] = _floats(args.f1, None, "--f1")
        params["f2"] = _floats(args.f2, None, "--f2")
    fam = NamedFamily(FamilyId(args.family), params)
    k, l = _deg(args.deg)
    _emit_csv(generate(fam, k, l), args.out)
    return 0


def _cmd_check(args):
    if args.check_id not in CATALOG:
        raise UsageError(f"unknown check {args.check_id!r}")
    rep = run_check(args.check_id, _params(args.param))
    d = rep.to_dict()
    if args.no_timestamp:
        d.pop("runtime_ms", None)
    print(dumps(d))
    return 0 if rep.verdict is Verdict.PASS else 1


def _cmd_suite(args):
    config = {}
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except ValueError as exc:
            raise UsageError(f"{args.config}: invalid JSON ({exc})") from None
        if not isinstance(config, dict):
            raise UsageError(f"{args.config}: config must be a JSON object")
    rep = full_suite(config, threads=args.threads)
    stamp = None if args.no_timestamp else datetime.datetime.now(datetime.timezone.utc).isoformat()
    d = rep.to_dict(timestamp=stamp)
    if args.no_timestamp:
        d["summary"].pop("runtime_ms", None)
        for row in d["checks"]:
            row.pop("runtime_ms", None)
    print(dumps(d))
    return 0 if rep.ok else 1


_COMMANDS = {
    "norm": _cmd_norm,
    "eval": _cmd_eval,
    "kernel": _cmd_kernel,
    "opnorm": _cmd_opnorm,
    "generate": _cmd_generate,
    "check": _cmd_check,
    "suite": _cmd_suite,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("threads", None), ("no_timestamp", False), ("json", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be at least 1")
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, PolydirichError, OSError) as exc:
        print(f"polydirich: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
