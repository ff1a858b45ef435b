"""Command-line frontend: reproducible reports from one-line commands.

Subcommands: classify, selfbound, bound, tails, counterexample, crossover.
Functions come from a JSON file (--input) or a generator (--generator plus
its parameter flags). Numeric flags parse as exact rationals ("3/2", "0.1").
Identical flags and seed produce byte-identical output; errors exit nonzero
with a machine-readable {"error": {"code", "message"}} object on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import bounds as bounds_mod
from . import dist as dist_mod
from . import selfbound as selfbound_mod
from . import setfn
from .hierarchy import classify as classify_function
from .errors import (
    CapacityError,
    DomainError,
    HypothesisError,
    InputError,
    RangeConditionError,
)
from .rational import fraction_to_json, to_fraction

SCHEMA_VERSION = 1

ERROR_CODES = {
    InputError: ("input-parse", 2),
    argparse.ArgumentError: ("usage", 2),
    CapacityError: ("capacity", 3),
    DomainError: ("domain", 4),
    HypothesisError: ("hypothesis", 5),
    RangeConditionError: ("range-condition", 6),
}


def _error_payload(exc: BaseException) -> tuple[dict, int]:
    for klass, (code, status) in ERROR_CODES.items():
        if isinstance(exc, klass):
            return {"error": {"code": code, "message": str(exc)}}, status
    return {"error": {"code": "internal", "message": str(exc)}}, 1


def _emit(obj, output: Optional[str], as_json: bool = True) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n" if as_json else obj
    if output and output != "-":
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rational(text: str) -> Fraction:
    return to_fraction(text)


def _rational_list(text: str) -> list[Fraction]:
    return [to_fraction(part) for part in text.split(",") if part.strip()]


def _add_function_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="JSON function file")
    parser.add_argument(
        "--generator", choices=sorted(setfn.GENERATORS), help="built-in generator"
    )
    parser.add_argument("--top", type=_rational, help="three-element: value on the full set")
    parser.add_argument("--n", type=int, help="generator ground-set size")
    parser.add_argument("--k", type=int, help="uniform-matroid-rank bound")
    parser.add_argument("--weights", type=_rational_list, help="comma-separated weights")
    parser.add_argument("--budget", type=_rational, help="budget-additive cap")
    parser.add_argument("--values", type=_rational_list, help="explicit table values")
    parser.add_argument(
        "--covers",
        help="coverage sets per element: semicolon-separated space lists, e.g. '1 2;2 3'",
    )
    parser.add_argument("--params-json", help="raw JSON generator params (escape hatch)")


def _resolve_function(args) -> setfn.SetFunction | setfn.SymmetricSetFunction:
    if args.input and args.generator:
        raise InputError("give either --input or --generator, not both")
    if args.input:
        return setfn.load_function(args.input)
    if not args.generator:
        raise InputError("a function is required: --input FILE or --generator NAME")
    if args.params_json:
        params = json.loads(args.params_json, parse_float=Fraction)
    else:
        params = {}
        if args.top is not None:
            params["top"] = args.top
        if args.n is not None:
            params["n"] = args.n
        if args.k is not None:
            params["k"] = args.k
        if args.weights is not None:
            params["weights"] = args.weights
        if args.budget is not None:
            params["budget"] = args.budget
        if args.values is not None:
            params["values"] = args.values
        if args.covers is not None:
            params["covers"] = [
                [int(x) for x in group.split()] for group in args.covers.split(";")
            ]
    return setfn.build_generator(args.generator, params)


def _require_dense(f) -> setfn.SetFunction:
    if isinstance(f, setfn.SetFunction):
        return f
    if f.n <= setfn.DENSE_MAX_N:
        return f.to_dense()
    raise CapacityError("dense-representation", f.n, setfn.DENSE_MAX_N)


# ---------------------------------------------------------------------------
# Subcommand handlers


def _run_classify(args) -> None:
    f = _require_dense(_resolve_function(args))
    report = classify_function(f)
    payload = report.to_json(include_certificate=args.include_certificate)
    payload["schema_version"] = SCHEMA_VERSION
    _emit(payload, args.output)


def _run_selfbound(args) -> None:
    f = _require_dense(_resolve_function(args))
    witness = selfbound_mod.min_extension(f)
    payload: dict = {"schema_version": SCHEMA_VERSION, "n": f.n}
    if args.minimal_a:
        b = args.b if args.b is not None else Fraction(0)
        a_star = selfbound_mod.minimal_a(f, witness, b)
        payload["b"] = fraction_to_json(b)
        payload["minimal_a"] = None if a_star is None else fraction_to_json(a_star)
        payload["unbounded"] = a_star is None
    else:
        if args.a is None:
            raise InputError("selfbound needs --a (with optional --b) or --minimal-a")
        params = selfbound_mod.SelfBoundingParams.of(
            args.a, args.b if args.b is not None else 0
        )
        result = selfbound_mod.certify(f, witness, params)
        payload["a"] = fraction_to_json(params.a)
        payload["b"] = fraction_to_json(params.b)
        payload["certification"] = result.to_json(f.n)
    _emit(payload, args.output)


def _run_bound(args) -> None:
    name = args.name
    payload: dict = {"schema_version": SCHEMA_VERSION, "bound_name": name}
    if name == "subadditive-tail":
        for flag in ("threshold", "p_below", "q", "k"):
            if getattr(args, flag) is None:
                raise InputError(f"subadditive-tail needs --{flag.replace('_', '-')}")
        query = bounds_mod.SubadditiveTailQuery(
            threshold=float(args.threshold),
            p_below=float(args.p_below),
            q=args.q,
            k=args.k,
        )
        result = bounds_mod.subadditive_tail(query, strict_hypothesis=args.strict_hypothesis)
        payload.update(
            bound=result.value,
            log_bound=result.log_value,
            event_threshold=result.event_threshold,
            params={
                "threshold": float(args.threshold),
                "p_below": float(args.p_below),
                "q": args.q,
                "k": args.k,
            },
        )
        if not result.hypothesis_satisfied:
            payload["warning"] = (
                f"q = {args.q} is below the stated hypothesis q >= "
                f"{bounds_mod.SUBADDITIVE_TAIL_MIN_Q}"
            )
        _emit(payload, args.output)
        return

    if args.mean is None:
        raise InputError(f"{name} needs --mean")
    mean = float(args.mean)
    if args.delta is None and args.t is None:
        raise InputError(f"{name} needs --delta or --t")
    side = "lower" if name.endswith("lower") else "upper"
    query = bounds_mod.TailQuery(
        mean=mean,
        side=side,
        delta=float(args.delta) if args.delta is not None else None,
        t=float(args.t) if args.t is not None else None,
    )
    params: dict = {"mean": mean, "delta": query.as_delta, "t": query.as_t}
    if name == "chernoff-upper":
        log_bound = bounds_mod.chernoff_upper_log(mean, query.as_delta)
    elif name == "chernoff-lower":
        log_bound = bounds_mod.chernoff_lower_log(mean, query.as_delta)
    elif name == "alt-upper":
        log_bound = bounds_mod.alt_upper_log(mean, query.as_t)
    else:
        if args.a is None or args.b is None:
            raise InputError(f"{name} needs --a and --b")
        a, b = float(args.a), float(args.b)
        params.update(a=a, b=b)
        if name == "ab-upper":
            log_bound = bounds_mod.ab_upper_log(a, b, mean, query.as_t)
        else:
            log_bound = bounds_mod.ab_lower_log(a, b, mean, query.as_t)
    payload.update(bound=math.exp(log_bound), log_bound=log_bound, params=params)
    _emit(payload, args.output)


def _tails_distribution(args, f) -> dist_mod.Distribution:
    if isinstance(f, setfn.SymmetricSetFunction):
        probs = args.p if args.p is not None else [Fraction(1, 2)]
        if len(set(probs)) != 1:
            raise InputError("symmetric functions need one shared coordinate probability")
        if args.sample:
            bp = dist_mod.BernoulliProduct.uniform(f.n, probs[0])
            return dist_mod.sample(f, bp, args.sample, args.seed)
        return dist_mod.symmetric_distribution(f, probs[0])
    probs = args.p if args.p is not None else [Fraction(1, 2)]
    if len(probs) == 1:
        bp = dist_mod.BernoulliProduct.uniform(f.n, probs[0])
    elif len(probs) == f.n:
        bp = dist_mod.BernoulliProduct.of(probs)
    else:
        raise InputError(f"--p needs 1 or {f.n} probabilities, got {len(probs)}")
    if args.sample:
        return dist_mod.sample(f, bp, args.sample, args.seed)
    return dist_mod.exact_distribution(f, bp)


def _run_tails(args) -> None:
    f = _resolve_function(args)
    d = _tails_distribution(args, f)
    specs = (
        [dist_mod.BoundSpec.parse(s) for s in args.bounds.split(";") if s.strip()]
        if args.bounds
        else []
    )
    rows = dist_mod.tail_table(d, args.deltas, specs, mean_override=args.mean_override)
    if args.format == "csv":
        _emit(dist_mod.tail_rows_to_csv(rows), args.output, as_json=False)
    else:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "mean": dist_mod._value_json(moments_mean(d, args.mean_override)),
            "rows": dist_mod.tail_rows_to_json(rows),
        }
        _emit(payload, args.output)


def moments_mean(d: dist_mod.Distribution, override) -> dist_mod.Value:
    if override is not None:
        return to_fraction(override)
    return dist_mod.moments(d).mean


def _run_counterexample(args) -> None:
    n = args.n
    levels = setfn.staircase_levels(n)  # validates perfect square, root >= 3
    root = math.isqrt(n)
    g = setfn.SymmetricSetFunction(n, levels)
    d = dist_mod.symmetric_distribution(g, Fraction(1, 2))
    mom = dist_mod.moments(d)
    mean = mom.mean
    lo_val = Fraction(root)
    hi_val = Fraction(2 * root)
    pr_lo = sum(
        (p for v, p in zip(d.support, d.probs) if v == lo_val), Fraction(0)
    )
    pr_hi = sum(
        (p for v, p in zip(d.support, d.probs) if v == hi_val), Fraction(0)
    )
    pr_le_lo = d.pr_le(lo_val)
    delta = 1 - lo_val / mean
    bound = bounds_mod.chernoff_lower(float(mean), float(delta))
    if n <= selfbound_mod.MIN_EXTENSION_MAX_N:
        dense = g.to_dense()
        a_star = selfbound_mod.minimal_a(dense, selfbound_mod.min_extension(dense), 0)
        method = "dense-enumeration"
    else:
        a_star = selfbound_mod.minimal_a_symmetric(g, 0)
        method = "symmetric-levels"
    payload = {
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "sqrt_n": root,
        "mean": dist_mod._value_json(mean),
        "stddev": math.sqrt(float(mom.variance)),
        "pr_value_sqrt_n": dist_mod._value_json(pr_lo),
        "pr_value_2sqrt_n": dist_mod._value_json(pr_hi),
        "pr_z_le_sqrt_n": dist_mod._value_json(pr_le_lo),
        "lower_tail_delta": dist_mod._value_json(delta),
        "chernoff_lower_bound": bound,
        "minimal_a": None if a_star is None else fraction_to_json(a_star),
        "minimal_a_method": method,
    }
    _emit(payload, args.output)


def _run_crossover(args) -> None:
    mean = float(args.mean)
    targets = [float(t) for t in args.target]
    rows = []
    for t in targets:
        chern = bounds_mod.min_deviation_for_target("chernoff", mean, t)
        alt = bounds_mod.min_deviation_for_target("alt", mean, t)
        if t < 1 and not chern < alt:
            raise RuntimeError(
                f"expected the Chernoff-form deviation to be smaller, got "
                f"{chern} vs {alt} at target {t}"
            )
        rows.append(
            {"target": t, "chernoff_deviation": chern, "alt_deviation": alt}
        )
    payload = {"schema_version": SCHEMA_VERSION, "mean": mean, "comparisons": rows}
    _emit(payload, args.output)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setconc",
        description="set-function hierarchy classification and concentration checks",
        exit_on_error=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="hierarchy membership with witnesses", exit_on_error=False)
    _add_function_args(p)
    p.add_argument("--include-certificate", action="store_true")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(handler=_run_classify)

    p = sub.add_parser("selfbound", help="min-extension certification", exit_on_error=False)
    _add_function_args(p)
    p.add_argument("--a", type=_rational)
    p.add_argument("--b", type=_rational)
    p.add_argument("--minimal-a", action="store_true", dest="minimal_a")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(handler=_run_selfbound)

    p = sub.add_parser("bound", help="evaluate one closed-form bound", exit_on_error=False)
    p.add_argument(
        "name",
        choices=[
            "chernoff-upper",
            "chernoff-lower",
            "ab-upper",
            "ab-lower",
            "alt-upper",
            "subadditive-tail",
        ],
    )
    p.add_argument("--mean", type=_rational)
    p.add_argument("--delta", type=_rational)
    p.add_argument("--t", type=_rational)
    p.add_argument("--a", type=_rational)
    p.add_argument("--b", type=_rational)
    p.add_argument("--threshold", type=_rational)
    p.add_argument("--p-below", type=_rational, dest="p_below")
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--strict-hypothesis", action="store_true", dest="strict_hypothesis")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(handler=_run_bound)

    p = sub.add_parser("tails", help="exact tails vs bounds table", exit_on_error=False)
    _add_function_args(p)
    p.add_argument("--p", type=_rational_list, help="coordinate probability (or comma list)")
    p.add_argument("--deltas", type=_rational_list, required=True)
    p.add_argument(
        "--bounds",
        help="semicolon list, e.g. 'chernoff-upper;ab-upper:a=2,b=0'",
    )
    p.add_argument("--mean-override", type=_rational, dest="mean_override")
    p.add_argument("--sample", type=int, help="empirical table from this many draws")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(handler=_run_tails)

    p = sub.add_parser("counterexample", help="staircase non-concentration report", exit_on_error=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(handler=_run_counterexample)

    p = sub.add_parser("crossover", help="chernoff vs additive-form deviations", exit_on_error=False)
    p.add_argument("--mean", type=_rational, default=Fraction(1))
    p.add_argument("--target", type=_rational, action="append", required=True)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(handler=_run_crossover)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.handler(args)
        return 0
    except SystemExit:
        raise
    except BaseException as exc:  # noqa: BLE001 - single reporting point
        payload, status = _error_payload(exc)
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
        return status


if __name__ == "__main__":
    sys.exit(main())
