"""Command-line front end: ``hlpos <subcommand> [flags]``.

Exponent lists are comma separated and accept integers, decimals, ``a/b``
rationals and ``inf``.  Permutations are 1-based, as in ``--sigma 2,1,3``.
Every run starts with its resolved configuration: a ``# config:`` comment
line in CSV mode, a ``"config"`` key in JSON mode.

Exit codes: 0 success, 2 invalid input, 3 when ``verify`` records a
candidate violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import exponents as ex
from . import harness, opnorm
from .extremal import reduce as reduce_tensor
from .tensor import TensorError, load_tensor, mixed_norm, save_tensor

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VIOLATION = 3


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# -- JSON with 17 significant digits ----------------------------------------

def dumps(obj) -> str:
    """``json.dumps`` except that floats print with 17 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return '"nan"'
        if math.isinf(obj):
            return '"inf"' if obj > 0 else '"-inf"'
        return format(obj, ".17g")
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- flag types --------------------------------------------------------------

def _exponent_list(text: str):
    try:
        return ex.parse_list(text)
    except ex.ExponentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _exponent(text: str):
    try:
        return ex.ExtReal(text)
    except ex.ExponentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get("HL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError("HL_SEED", f"not an integer: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hlpos", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, *flags):
        sp = sub.add_parser(name, help=help)
        for flag in flags:
            flag(sp)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        return sp

    def p_flag(sp):
        sp.add_argument("--p", type=_exponent_list, required=True, help="space exponents p_1,...,p_m")

    def q_flag(sp):
        sp.add_argument("--q", type=_exponent_list, required=True, help="mixed-norm exponents q_1,...,q_m")

    def sigma_flag(sp):
        sp.add_argument("--sigma", type=_int_list, default=None, help="1-based nesting order (default identity)")

    def tensor_flag(sp):
        sp.add_argument("--tensor", required=True, help="tensor JSON file")

    def n_flag(sp):
        sp.add_argument("--n", type=_int_list, required=True, help="sizes n, comma separated")

    def ascent_flags(sp):
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (default $HL_SEED or 0)")
        sp.add_argument("--restarts", type=int, default=opnorm.DEFAULT_RESTARTS)
        sp.add_argument("--tol", type=float, default=opnorm.DEFAULT_TOL)
        sp.add_argument("--max-iter", type=int, default=opnorm.DEFAULT_MAX_ITER)

    add("delta", "critical exponent of a tuple of spaces", p_flag)
    add("critical", "smallest admissible exponents", p_flag, sigma_flag)
    add("admissible", "test an exponent tuple", p_flag, sigma_flag, q_flag)
    add("mixed-norm", "nested mixed norm of a tensor", tensor_flag, q_flag, sigma_flag)
    sp = add("opnorm", "operator norm estimate", tensor_flag, p_flag, ascent_flags)
    sp.add_argument("--method", choices=("ascent", "grid"), default="ascent")
    sp.add_argument("--resolution", type=int, default=20, help="grid resolution for --method grid")
    sp = add("reduce", "collapse the last axis of a tensor", tensor_flag, p_flag)
    sp.add_argument("--output", default=None, help="write the reduced tensor JSON here")
    add("sharpness", "critical exponents on the diagonal family", p_flag, sigma_flag, n_flag)
    add("falsify", "growth of an inadmissible tuple on its extremal family", p_flag, sigma_flag, q_flag, n_flag)
    sp = add("verify", "random sufficiency trials", p_flag, sigma_flag, q_flag, ascent_flags)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--max-dim", type=int, default=6)
    sp.add_argument("--distribution", choices=("uniform", "pareto"), default="uniform")
    sp.add_argument("--workers", type=int, default=1)
    sp = add("bayart", "isotropic exponent check", p_flag)
    sp.add_argument("--rho", type=_exponent, required=True)
    return parser


# -- validation --------------------------------------------------------------

def _resolve(args) -> dict:
    """Validate cross-flag constraints and return the resolved config."""
    cfg = {"command": args.command}
    m = None
    if getattr(args, "p", None) is not None:
        for i, v in enumerate(args.p):
            if v < 1:
                raise UsageError("--p", f"entry {i + 1} = {v} is below 1")
        m = len(args.p)
        cfg["p"] = [v.to_json() for v in args.p]
    if getattr(args, "tensor", None) is not None:
        try:
            args.tensor_obj = load_tensor(args.tensor)
        except (OSError, TensorError) as exc:
            raise UsageError("--tensor", str(exc)) from None
        if m is not None and args.tensor_obj.order != m:
            raise UsageError("--p", f"{m} exponents for a tensor of order {args.tensor_obj.order}")
        m = args.tensor_obj.order if m is None else m
        cfg["tensor"] = args.tensor
    if getattr(args, "q", None) is not None:
        if m is not None and len(args.q) != m:
            raise UsageError("--q", f"expected {m} exponents, got {len(args.q)}")
        m = len(args.q) if m is None else m
        cfg["q"] = [v.to_json() for v in args.q]
    if hasattr(args, "sigma"):
        if args.sigma is None:
            args.sigma0 = tuple(range(m))
        else:
            try:
                args.sigma0 = ex.as_perm([s - 1 for s in args.sigma], m)
            except ex.ExponentError as exc:
                raise UsageError("--sigma", f"{exc} (1-based)") from None
        cfg["sigma"] = [s + 1 for s in args.sigma0]
    if getattr(args, "n", None) is not None:
        if any(n < 1 for n in args.n):
            raise UsageError("--n", "sizes must be positive")
        cfg["n"] = args.n
    if hasattr(args, "seed"):
        if args.seed is None:
            args.seed = _default_seed()
        if args.restarts < 1:
            raise UsageError("--restarts", "must be >= 1")
        if args.tol < 0:
            raise UsageError("--tol", "must be >= 0")
        if args.max_iter < 1:
            raise UsageError("--max-iter", "must be >= 1")
        cfg.update(seed=args.seed, restarts=args.restarts, tol=args.tol, max_iter=args.max_iter)
    for name in ("method", "resolution", "trials", "max_dim", "distribution", "workers", "output"):
        if hasattr(args, name):
            cfg[name] = getattr(args, name)
    if getattr(args, "trials", 1) < 1:
        raise UsageError("--trials", "must be >= 1")
    if getattr(args, "max_dim", 1) < 1:
        raise UsageError("--max-dim", "must be >= 1")
    if getattr(args, "rho", None) is not None:
        cfg["rho"] = args.rho.to_json()
    cfg["format"] = args.format
    return cfg


# -- commands ----------------------------------------------------------------
# each returns (columns, rows, json_result, exit_code)

def _cmd_delta(args):
    d = ex.delta(args.p)
    return ["delta"], [[str(d)]], {"delta": d.to_json()}, EXIT_OK


def _cmd_critical(args):
    q = ex.critical_exponents(args.p, args.sigma0)
    rows = [[k + 1, str(v)] for k, v in enumerate(q)]
    return ["k", "q"], rows, {"q": [v.to_json() for v in q]}, EXIT_OK


def _cmd_admissible(args):
    res = ex.admissible(args.p, args.sigma0, args.q)
    if res:
        text = "true"
        result = {"admissible": True}
    else:
        text = f"false (k={res.k + 1})"
        result = {"admissible": False, "k": res.k + 1, "required": res.required.to_json()}
    return ["result"], [[text]], result, EXIT_OK


def _cmd_mixed_norm(args):
    value = mixed_norm(args.tensor_obj, args.q, args.sigma0)
    return ["mixed_norm"], [[repr(value)]], {"mixed_norm": value}, EXIT_OK


def _cmd_opnorm(args):
    if args.method == "grid":
        try:
            est = opnorm.grid_oracle(args.tensor_obj, args.p, args.resolution)
        except ValueError as exc:
            raise UsageError("--resolution", str(exc)) from None
    else:
        est = opnorm.alternating_ascent(
            args.tensor_obj, args.p, restarts=args.restarts, tol=args.tol,
            max_iter=args.max_iter, seed=args.seed,
        )
    cols = ["value", "kind", "iterations", "restarts_used", "converged", "error_bound"]
    row = [repr(est.value), est.kind, est.iterations, est.restarts_used, int(est.converged), repr(est.error_bound)]
    result = {
        "value": est.value,
        "kind": est.kind,
        "iterations": est.iterations,
        "restarts_used": est.restarts_used,
        "converged": est.converged,
        "seed": est.seed,
        "error_bound": est.error_bound,
        "witness": [[float(v) for v in w] for w in est.witness],
    }
    return cols, [row], result, EXIT_OK


def _cmd_reduce(args):
    try:
        a, r = reduce_tensor(args.tensor_obj, args.p)
    except ex.ExponentError as exc:
        raise UsageError("--p", str(exc)) from None
    if args.output:
        save_tensor(a, args.output)
    cols = [f"j{i + 1}" for i in range(a.order)] + ["value"]
    rows = []
    for idx in np.ndindex(*a.shape):
        rows.append([i + 1 for i in idx] + [repr(float(a.data[idx]))])
    result = {"r": [v.to_json() for v in r], "tensor": a.to_json()}
    return cols, rows, result, EXIT_OK, f"r: {','.join(str(v) for v in r)}"


def _sharp_rows(rows, extra=()):
    return [[r.n, repr(r.lhs), repr(r.norm), repr(r.ratio), *extra] for r in rows]


def _cmd_sharpness(args):
    try:
        rows = harness.sharpness_experiment(args.p, args.sigma0, args.n)
    except harness.PreconditionError as exc:
        raise UsageError("--p", str(exc)) from None
    result = {"rows": [{"n": r.n, "lhs": r.lhs, "norm": r.norm, "ratio": r.ratio} for r in rows]}
    return ["n", "lhs", "norm", "ratio"], _sharp_rows(rows), result, EXIT_OK


def _cmd_falsify(args):
    try:
        res = harness.falsify(args.p, args.sigma0, args.q, args.n)
    except harness.PreconditionError as exc:
        raise UsageError("--q", str(exc)) from None
    k = res.k + 1
    result = {
        "k": k,
        "family": res.family.kind,
        "pin_count": res.k,
        "slope": res.slope,
        "rows": [{"n": r.n, "lhs": r.lhs, "norm": r.norm, "ratio": r.ratio} for r in res.rows],
    }
    return ["n", "lhs", "norm", "ratio", "k"], _sharp_rows(res.rows, (k,)), result, EXIT_OK


def _cmd_verify(args):
    try:
        report = harness.verify_random(
            args.p, args.sigma0, args.q, trials=args.trials, max_dim=args.max_dim,
            seed=args.seed, restarts=args.restarts, tol=args.tol, max_iter=args.max_iter,
            distribution=args.distribution, workers=args.workers,
        )
    except harness.PreconditionError as exc:
        raise UsageError("--q", str(exc)) from None
    code = EXIT_VIOLATION if report.violated else EXIT_OK
    text = harness.records_to_csv(report).splitlines()
    cols = text[0].split(",")
    rows = [line.split(",") for line in text[1:]]
    summary = report.summary()
    result = dict(summary)
    result["records"] = [
        {"seed": r.seed, "dims": list(r.dims), "lhs": r.lhs, "estimate": r.estimate,
         "verdict": r.verdict, "converged": r.converged, "restarts": r.restarts}
        for r in sorted(report.records, key=lambda r: r.seed)
    ]
    note = f"summary: {json.dumps({k: summary[k] for k in ('trials', 'holds', 'inconclusive', 'violated')})}"
    return cols, rows, result, code, note


def _cmd_bayart(args):
    try:
        ok = harness.bayart_check(args.p, args.rho)
    except harness.PreconditionError as exc:
        raise UsageError("--p", str(exc)) from None
    return ["result"], [["true" if ok else "false"]], {"bayart": ok, "delta": ex.delta(args.p).to_json()}, EXIT_OK


COMMANDS = {
    "delta": _cmd_delta,
    "critical": _cmd_critical,
    "admissible": _cmd_admissible,
    "mixed-norm": _cmd_mixed_norm,
    "opnorm": _cmd_opnorm,
    "reduce": _cmd_reduce,
    "sharpness": _cmd_sharpness,
    "falsify": _cmd_falsify,
    "verify": _cmd_verify,
    "bayart": _cmd_bayart,
}


def _render(fmt: str, cfg: dict, out) -> str:
    cols, rows, result, *rest = out
    note = rest[1] if len(rest) > 1 else None
    if fmt == "json":
        return dumps({"config": cfg, "result": result}) + "\n"
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(cfg)}\n")
    if note:
        buf.write(f"# {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    w.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hlpos {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ex.ExponentError, TensorError) as exc:
        print(f"hlpos {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(_render(args.format, cfg, out))
    return out[3]


if __name__ == "__main__":
    sys.exit(main())
