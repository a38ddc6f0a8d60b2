"""
Command-line interface: ``cpig <subcommand> ...``.

Output is line-oriented ``key=value`` text, or a single JSON document with
``--format json``. Every run starts with its parsed configuration.

Exit codes: 0 success, 2 parse or usage error, 3 divergent integral,
4 validation failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import bounds, divergence, estimation, measures, orders
from .battery import FAIL, run_battery
from .distributions import (
    Distribution,
    EmpiricalStep,
    Exponential,
    Power,
    Uniform,
    load_piecewise_cdf,
    load_sample,
)
from .errors import CpigError, Divergent, RatioSingularity

EXIT_OK, EXIT_PARSE, EXIT_DIVERGENT, EXIT_VALIDATION = 0, 2, 3, 4
SEED_ENV = "CPIG_SEED"


class ParseError(CpigError, ValueError):
    """A malformed distribution spec; ``position`` is a 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


# family -> (parameter count, constructor); None marks a path argument
_FAMILIES = {
    "uniform": (2, lambda a, b: Uniform(a, b)),
    "exp": (1, lambda rate: Exponential(rate)),
    "power": (1, lambda c: Power(c)),
    "pwcdf": (None, load_piecewise_cdf),
    "sample": (None, lambda path: EmpiricalStep(tuple(load_sample(path)))),
}


def parse_dist(text: str) -> Distribution:
    """Parse ``family:p1,p2`` (uniform, exp, power) or ``family:path`` (pwcdf, sample)."""
    family, sep, rest = text.partition(":")
    if not sep:
        raise ParseError("expected 'family:params'", text, len(text))
    family = family.strip().lower()
    if family not in _FAMILIES:
        raise ParseError(f"unknown family {family!r} (choose from {', '.join(_FAMILIES)})", text, 0)
    arity, build = _FAMILIES[family]
    start = len(family) + 1
    if arity is None:
        if not rest:
            raise ParseError("missing file path", text, start)
        return build(rest)
    tokens = rest.split(",")
    if len(tokens) != arity:
        raise ParseError(f"{family} takes {arity} parameter(s), got {len(tokens)}", text, start)
    values, offset = [], start
    for tok in tokens:
        try:
            values.append(float(tok))
        except ValueError:
            raise ParseError(f"not a number: {tok!r}", text, offset) from None
        offset += len(tok) + 1
    try:
        return build(*values)
    except ValueError as exc:
        raise ParseError(str(exc), text, start) from None


def parse_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return "none"
    return str(v)


@dataclass
class Output:
    config: dict
    rows: list  # (key, value) pairs
    failed: bool = False

    def render(self, fmt: str) -> str:
        if fmt == "json":
            result = {}
            for k, v in self.rows:
                result[k] = None if isinstance(v, float) and not math.isfinite(v) else v
            return json.dumps({"config": self.config, "result": result}, indent=2, sort_keys=False)
        lines = [f"# {k}={_fmt(v)}" for k, v in self.config.items()]
        lines += [f"{k}={_fmt(v)}" for k, v in self.rows]
        return "\n".join(lines)


def _result_rows(res, prefix="") -> list:
    return [(f"{prefix}value", float(res.value)), (f"{prefix}abs_err", float(res.abs_err)),
            (f"{prefix}method", res.method)]


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        args.parser.error(f"--measure {args.measure} needs {flags}")


def _cmd_measure(args) -> Output:
    F = parse_dist(args.dist)
    m = args.measure
    if m in ("cpig", "rcpig"):
        _require(args, "theta")
    if m in ("gcpe", "gcre"):
        _require(args, "n")
    if m in ("fcpe", "cpte"):
        _require(args, "q")
    if m == "cigf":
        _require(args, "alpha", "beta")
    if m == "rcpig":
        _require(args, "dist2")

    if m == "cpig":
        res = measures.cpig(F, args.theta)
    elif m == "rcpig":
        res = measures.rcpig(F, parse_dist(args.dist2), args.theta)
    elif m == "cigf":
        res = measures.cigf(F, args.alpha, args.beta)
    elif m == "gcpe":
        res = measures.gcpe(F, args.n)
    elif m == "gcre":
        res = measures.gcre(F, args.n)
    elif m == "cpj":
        res = measures.cumulative_extropy(F, "past")
    elif m == "crj":
        res = measures.cumulative_extropy(F, "residual")
    elif m == "gmd":
        res = measures.gmd(F)
    elif m == "entropy":
        res = measures.shannon_entropy(F)
    elif m == "fcpe":
        res = divergence.fcpe(F, args.q)
    else:
        res = divergence.cpte(F, args.q)
    return Output(_config(args, "dist", "measure", "theta", "n", "q", "alpha", "beta", "dist2"),
                  _result_rows(res))


def _moments(text: str, theta: float):
    family, _, rest = text.partition(":")
    try:
        if family == "exp":
            rate, n = rest.split(",")
            return estimation.estimator_moments_exponential(int(n), float(rate), theta)
        if family == "unif":
            return estimation.estimator_moments_uniform(int(rest), theta)
    except ValueError:
        pass
    raise ParseError("expected exp:LAMBDA,N or unif:N", text, 0)


def _cmd_estimate(args) -> Output:
    x = load_sample(args.input)
    rows = [("value", estimation.empirical_cpig(x, args.theta)), ("abs_err", 0.0),
            ("method", measures.CLOSED_FORM), ("sample_size", int(x.size))]
    if args.moments:
        mom = _moments(args.moments, args.theta)
        rows += [("moments.model", mom.model), ("moments.n", mom.n), ("moments.mean", mom.mean),
                 ("moments.variance_paper", mom.variance_paper),
                 ("moments.variance_corrected", mom.variance_corrected)]
        if mom.caveat:
            rows.append(("moments.caveat", mom.caveat))
    return Output(_config(args, "input", "theta", "moments"), rows)


def _cmd_divergence(args) -> Output:
    X, Y = parse_dist(args.dist_x), parse_dist(args.dist_y)
    weights = args.weights or [0.5, 0.5]
    kind = args.kind
    if kind == "d":
        rows = _result_rows(divergence.cpig_divergence(X, Y, args.theta))
    elif kind == "jcpig":
        rows = _result_rows(divergence.jcpig([X, Y], weights, args.theta))
    elif kind == "jfcpe":
        rows = _result_rows(divergence.jfcpe([X, Y], weights, args.q if args.q is not None else args.theta))
    elif kind == "jcpte":
        rows = _result_rows(divergence.jcpte([X, Y], weights, args.q if args.q is not None else args.theta))
    else:
        left, right = divergence.jcpig_mixture_decomposition([X, Y], weights, args.theta)
        rows = [("jcpig", left), ("weighted_divergence", right), ("difference", left - right),
                ("status", "reported-only")]
    return Output(_config(args, "dist_x", "dist_y", "theta", "q", "kind", "weights"), rows)


def _order_rows(rep) -> list:
    rows = [("holds", rep.holds), ("checked_points", rep.checked_points)]
    if rep.witness is not None:
        rows += [("witness.point", rep.witness[0]), ("witness.lhs", rep.witness[1]),
                 ("witness.rhs", rep.witness[2])]
    return rows


def _cmd_order(args) -> Output:
    X, Y = parse_dist(args.dist_x), parse_dist(args.dist_y)
    if args.kind == "disp":
        rep = orders.dispersive_order_check(X, Y)
    elif args.kind == "st":
        rep = orders.stochastic_order_check(X, Y)
    else:
        rep = orders.cpig_order_check(X, Y, args.thetas)
    return Output(_config(args, "dist_x", "dist_y", "kind", "thetas"), _order_rows(rep))


def _cmd_bounds(args) -> Output:
    F = parse_dist(args.dist)
    rows = []
    for rep in bounds.bound_suite(F, args.theta):
        p = f"{rep.name}."
        rows += [(p + "lhs", rep.lhs), (p + "rhs", rep.rhs), (p + "relation", rep.relation),
                 (p + "slack", rep.slack), (p + "status", rep.status)]
        if rep.note:
            rows.append((p + "note", rep.note))
    return Output(_config(args, "dist", "theta"), rows)


def _cmd_simulate(args) -> Output:
    model = parse_dist(args.dist)
    rep = estimation.clt_experiment(model, args.n, args.theta, args.reps, args.seed)
    rows = [("ks_distance", rep.ks_distance), ("ks_pvalue", rep.ks_pvalue),
            ("standardized_mean", rep.standardized_mean),
            ("standardized_variance", rep.standardized_variance),
            ("replicates", rep.replicates), ("method", measures.MONTE_CARLO)]
    return Output(_config(args, "experiment", "dist", "n", "reps", "theta", "seed"), rows)


def _cmd_validate(args) -> Output:
    results = run_battery(args.seed)
    rows = []
    for r in results:
        p = f"case.{r.index:02d}."
        rows += [(p + "claim", r.claim), (p + "status", r.status), (p + "detail", r.detail)]
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "reported-only")}
    rows += [(f"summary.{k}", v) for k, v in counts.items()]
    return Output(_config(args, "seed"), rows, failed=counts[FAIL] > 0)


def _config(args, *names) -> dict:
    cfg = {"command": args.command}
    for n in names:
        if hasattr(args, n):
            v = getattr(args, n)
            cfg[n] = ",".join(_fmt(x) for x in v) if isinstance(v, list) else v
    return cfg


def _seed_default():
    env = os.environ.get(SEED_ENV)
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"cpig: {SEED_ENV} must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default: text)")

    parser = argparse.ArgumentParser(prog="cpig", description="Cumulative past information measures.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("measure", parents=[common], help="compute a single measure")
    p.add_argument("--dist", required=True, help="distribution, e.g. uniform:0,1")
    p.add_argument("--measure", required=True,
                   choices=("cpig", "rcpig", "cigf", "gcpe", "gcre", "cpj", "crj", "gmd",
                            "entropy", "fcpe", "cpte"))
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--dist2", help="second distribution for rcpig")
    p.set_defaults(func=_cmd_measure, parser=p)

    p = sub.add_parser("estimate", parents=[common], help="empirical cpig of a sample file")
    p.add_argument("--input", required=True, help="sample file, one value per line or comma separated")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--moments", help="exact moments under exp:LAMBDA,N or unif:N sampling")
    p.set_defaults(func=_cmd_estimate, parser=p)

    p = sub.add_parser("divergence", parents=[common], help="divergence and Jensen gaps")
    p.add_argument("--dist-x", required=True)
    p.add_argument("--dist-y", required=True)
    p.add_argument("--theta", type=float, required=True, help="theta, or q for jfcpe/jcpte")
    p.add_argument("--q", type=float, help="order for jfcpe/jcpte (defaults to --theta)")
    p.add_argument("--kind", required=True, choices=("d", "jcpig", "jfcpe", "jcpte", "decomposition"))
    p.add_argument("--weights", type=parse_list, help="mixture weights, e.g. 0.25,0.75")
    p.set_defaults(func=_cmd_divergence, parser=p)

    p = sub.add_parser("order", parents=[common], help="stochastic order checks")
    p.add_argument("--dist-x", required=True)
    p.add_argument("--dist-y", required=True)
    p.add_argument("--kind", required=True, choices=("disp", "st", "cpig"))
    p.add_argument("--thetas", type=parse_list, default=[0.5, 1.0, 2.0, 5.0])
    p.set_defaults(func=_cmd_order, parser=p)

    p = sub.add_parser("bounds", parents=[common], help="lower bounds on cpig")
    p.add_argument("--dist", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.set_defaults(func=_cmd_bounds, parser=p)

    p = sub.add_parser("simulate", help="Monte Carlo experiments")
    sim = p.add_subparsers(dest="experiment", required=True, metavar="EXPERIMENT")
    c = sim.add_parser("clt", parents=[common], help="standardised estimator vs N(0,1)")
    c.add_argument("--dist", required=True, help="exp:LAMBDA")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--reps", type=int, required=True)
    c.add_argument("--theta", type=float, required=True)
    c.add_argument("--seed", type=int, default=_seed_default(),
                   help=f"random seed (default: ${SEED_ENV})")
    c.set_defaults(func=_cmd_simulate, parser=c)

    p = sub.add_parser("validate", parents=[common], help="run the identity and inequality battery")
    seed = _seed_default()
    p.add_argument("--seed", type=int, default=0 if seed is None else seed,
                   help=f"random seed (default: ${SEED_ENV} or 0)")
    p.set_defaults(func=_cmd_validate, parser=p)
    return parser


def run_cli(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        # argparse prints usage and help to the process streams
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
            if args.command == "simulate" and args.seed is None:
                args.parser.error(f"--seed is required (or set {SEED_ENV})")
            out = args.func(args)
    except SystemExit as exc:
        code = exc.code
        if isinstance(code, str):
            print(code, file=stderr)
            return EXIT_PARSE
        return EXIT_PARSE if code else EXIT_OK
    except (Divergent, RatioSingularity) as exc:
        print(f"cpig: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_DIVERGENT
    except (CpigError, OSError) as exc:
        print(f"cpig: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_PARSE
    print(out.render(args.format), file=stdout)
    return EXIT_VALIDATION if out.failed else EXIT_OK


def main() -> None:
    sys.exit(run_cli())
