"""Command-line front end.

Group specs are JSON objects with a ``family`` key and exactly the keys that
family needs (unknown keys are rejected)::

    {"family": "cyclic", "m": 5}
    {"family": "cyclic_product", "moduli": [2, 4]}
    {"family": "dihedral", "m": 4}
    {"family": "coxeter_a", "rank": 3}        # also coxeter_b, coxeter_d
    {"family": "coxeter_i2", "m": 5}
    {"family": "coxeter_product", "factors": [{"family": "coxeter_a", "rank": 1}, ...]}

Exit status: 0 success, 1 a ``verify`` check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import braid, ldp, limits, verify
from .cayley import build_cayley, dump_edges, length_function
from .errors import CayleyWalkError
from .groups import GroupSpec, build_group, is_coxeter
from .walk import (
    empirical_vs_limit,
    format_fraction,
    uniform_step_distribution,
    weighted_step_distribution,
)

DEFAULT_SEED = verify.DEFAULT_SEED


class UsageError(Exception):
    pass


def fmt(value: Any) -> str:
    """Rationals as p/q, reals with 12 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, Fraction)):
        return format_fraction(Fraction(value))
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, float) and not math.isfinite(value):
        return fmt(value)
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def render_table(header: Sequence[str], rows: Sequence[Sequence[Any]], fmt_name: str) -> str:
    if fmt_name == "json":
        docs = [{h: _json_value(v) for h, v in zip(header, row)} for row in rows]
        return json.dumps(docs, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_scalar(name: str, value: Any, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps({name: _json_value(value)}) + "\n"
    return fmt(value) + "\n"


def _parse_int_list(text: str) -> list[int]:
    try:
        value = json.loads(text if text.strip().startswith("[") else f"[{text}]")
    except json.JSONDecodeError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None
    if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
        raise UsageError(f"expected a list of integers, got {text!r}")
    return value


def _parse_group(text: str) -> GroupSpec:
    return GroupSpec.from_json(text)


# -- subcommands -------------------------------------------------------------

def cmd_limits(args) -> tuple[str, int]:
    f = args.format
    if args.which == "cyclic":
        value = limits.cyclic_limit(args.m)
        return _limit_out(value, f), 0
    if args.which == "cyclic-product":
        return render_scalar("limit", limits.cyclic_product_limit(_parse_int_list(args.moduli)), f), 0
    if args.which == "coxeter":
        return _limit_out(limits.coxeter_limit(args.type), f), 0
    if args.which == "components":
        even, odd = braid.component_limits(args.n)
        if f == "json":
            return json.dumps({"even": fmt(even), "odd": fmt(odd)}) + "\n", 0
        return f"even={fmt(even)} odd={fmt(odd)}\n", 0
    if args.which == "degrees":
        d = limits.degrees_of(args.type)
        if f == "json":
            return json.dumps({"degrees": d}) + "\n", 0
        return " ".join(map(str, d)) + "\n", 0
    if args.which == "poincare":
        poly = limits.poincare_polynomial(limits.degrees_of(args.type))
        if f == "json":
            return json.dumps({"coefficients": list(poly.coeffs)}) + "\n", 0
        return " ".join(map(str, poly.coeffs)) + "\n", 0
    raise UsageError(args.which)


def _limit_out(value, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps({"even": fmt(value.even), "odd": fmt(value.odd), "split": value.split}) + "\n"
    return f"{value}\n"


def _functional(graph, name: str):
    if name == "length":
        return length_function(graph)
    if name == "one":
        return lambda g: 1
    if name == "cycles":
        if graph.group.spec.family != "coxeter_a":
            raise UsageError("functional 'cycles' needs a coxeter_a group")
        return lambda g: braid.cycle_count(g)
    raise UsageError(f"unknown functional {name!r}")


def cmd_walk(args) -> tuple[str, int]:
    spec = _parse_group(args.group)
    group = build_group(spec)
    graph = build_cayley(group)
    hold = Fraction(args.hold)
    if args.weights:
        per_gen = _parse_int_list(args.weights)
        if len(per_gen) != len(group.generator_names):
            raise UsageError(f"need {len(group.generator_names)} generator weights")
        dist = weighted_step_distribution(
            group, {letter: per_gen[letter[0]] for letter in group.letters()}, hold
        )
    else:
        dist = uniform_step_distribution(group, hold)
    report = empirical_vs_limit(
        graph,
        dist,
        _functional(graph, args.functional),
        args.steps,
        args.trials,
        args.seed,
        threads=args.threads,
    )
    rows = [
        (r.step, r.parity, r.empirical_mean, r.exact_limit, r.tv_distance, r.std_error, r.trials, r.exact_mean, r.exact_tv)
        for r in report.rows
    ]
    return render_table(report.CSV_HEADER, rows, args.format), 0


def cmd_braid(args) -> tuple[str, int]:
    f = args.format
    if args.which == "lift":
        spec = _parse_group(args.group)
        if not is_coxeter(spec):
            raise UsageError("lift needs a Coxeter group")
        group = build_group(spec)
        word = _parse_int_list(args.word)
        if any(not 1 <= x <= len(group.generator_names) for x in word):
            raise UsageError("word letters must be generator numbers 1..rank")
        graph = build_cayley(group)
        b = braid.lift_to_braid(graph, group.evaluate((x - 1, 1) for x in word))
        return (b.to_json() if f != "json" else json.dumps({"strands": b.strands, "word": list(b.letters)})) + "\n", 0
    if args.which == "closure":
        b = braid.BraidWord(args.strands, tuple(_parse_int_list(args.word)))
        return render_scalar("components", braid.closure_components(b), f), 0
    if args.which == "permutation":
        b = braid.BraidWord(args.strands, tuple(_parse_int_list(args.word)))
        return json.dumps(list(braid.underlying_permutation(b))) + "\n", 0
    if args.which == "reduce":
        b = braid.BraidWord(args.strands, tuple(_parse_int_list(args.word)))
        return braid.free_reduce(b).to_json() + "\n", 0
    if args.which == "compose":
        if len(args.word) != len(args.strands):
            raise UsageError("give one --strands value per --word")
        words = [braid.BraidWord(s, tuple(_parse_int_list(w))) for w, s in zip(args.word, args.strands)]
        b = braid.block_diagonal_compose(words)
        if f == "json":
            return json.dumps({"strands": b.strands, "word": list(b.letters)}) + "\n", 0
        return b.to_json() + "\n", 0
    raise UsageError(args.which)


def cmd_ldp(args) -> tuple[str, int]:
    f = args.format
    if args.which == "kappa":
        return render_scalar("kappa", ldp.kappa_exact(args.n, args.j, args.k), f), 0
    if args.which == "rate":
        return render_scalar("I", ldp.rate_I(Fraction(args.x), args.n), f), 0
    if args.which == "logprob":
        value = ldp.exact_logprob(args.model, args.N, args.target, args.n)
        return render_scalar("log_prob", value, f), 0
    if args.which == "report":
        rows = ldp.rate_convergence_report(
            args.n, Fraction(args.x), _parse_int_list(args.N), workers=args.threads
        )
        table = [
            (r.n, r.N, r.x, r.model, r.log_prob, r.neg_log_prob_over_N, r.I_x, r.kappa_asymptotic_log, r.delta)
            for r in rows
        ]
        return render_table(ldp.ReportRow.CSV_HEADER, table, f), 0
    raise UsageError(args.which)


def cmd_verify(args) -> tuple[str, int]:
    keys = None
    if args.only:
        keys = {k.strip().upper() for k in args.only.split(",")}
    results = verify.run_all(keys)
    header = ("id", "claim", "status", "seconds", "detail")
    rows = [(r.key, r.claim, "PASS" if r.ok else "FAIL", f"{r.seconds:.2f}", r.detail) for r in results]
    if args.format == "json" or args.format == "csv":
        text = render_table(header, rows, args.format)
    else:
        width = max(len(r[1]) for r in rows) if rows else 10
        lines = [f"{r[0]:<4} {r[1]:<{width}}  {r[2]}  {r[3]:>7}s  {r[4]}" for r in rows]
        text = "\n".join(lines) + "\n"
    return text, 0 if all(r.ok for r in results) else 1


def cmd_graph(args) -> tuple[str, int]:
    graph = build_cayley(build_group(_parse_group(args.group)))
    buf = io.StringIO()
    dump_edges(graph, buf)
    return buf.getvalue(), 0


# -- parser ------------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--output", "-o", default=default(None), help="write results to this file")
    p.add_argument(
        "--format",
        choices=("csv", "json", "text"),
        default=default(None),
        help="tables default to csv, the verify summary to text",
    )
    p.add_argument("--seed", type=int, default=default(DEFAULT_SEED), help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--threads", type=int, default=default(1), help="worker cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleywalk", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_lim = sub.add_parser("limits", help="closed-form limits")
    lim = p_lim.add_subparsers(dest="which", required=True)
    q = lim.add_parser("cyclic", parents=[common])
    q.add_argument("--m", type=int, required=True)
    q = lim.add_parser("cyclic-product", parents=[common])
    q.add_argument("--moduli", required=True, help="e.g. 2,4 or [2,4]")
    q = lim.add_parser("coxeter", parents=[common])
    q.add_argument("--type", required=True, help="e.g. B3, I2(5), A1xA2")
    q = lim.add_parser("components", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q = lim.add_parser("degrees", parents=[common])
    q.add_argument("--type", required=True)
    q = lim.add_parser("poincare", parents=[common])
    q.add_argument("--type", required=True)
    p_lim.set_defaults(func=cmd_limits)

    p_walk = sub.add_parser("walk", parents=[common], help="Monte Carlo walk vs exact limit")
    p_walk.add_argument("--group", required=True, help="JSON group spec")
    p_walk.add_argument("--steps", type=int, default=200)
    p_walk.add_argument("--trials", type=int, default=10000)
    p_walk.add_argument("--hold", default="0", help="holding probability, e.g. 1/5")
    p_walk.add_argument("--weights", help="relative weight per generator, e.g. [1,2]")
    p_walk.add_argument("--functional", default="length", choices=("length", "one", "cycles"))
    p_walk.set_defaults(func=cmd_walk)

    p_br = sub.add_parser("braid", help="braid words")
    br = p_br.add_subparsers(dest="which", required=True)
    q = br.add_parser("lift", parents=[common])
    q.add_argument("--group", required=True, help="JSON Coxeter group spec")
    q.add_argument("--word", required=True, help="any word in the Coxeter generators, e.g. [2,1,2]")
    for name in ("closure", "permutation", "reduce"):
        q = br.add_parser(name, parents=[common])
        q.add_argument("--word", required=True, help="signed generator list, e.g. [1,-2]")
        q.add_argument("--strands", type=int, required=True)
    q = br.add_parser("compose", parents=[common])
    q.add_argument("--word", action="append", required=True)
    q.add_argument("--strands", type=int, action="append", required=True)
    p_br.set_defaults(func=cmd_braid)

    p_ldp = sub.add_parser("ldp", help="large-deviation oracles")
    ld = p_ldp.add_subparsers(dest="which", required=True)
    q = ld.add_parser("kappa", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q = ld.add_parser("rate", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--x", required=True)
    q = ld.add_parser("logprob", parents=[common])
    q.add_argument("--model", choices=[m.value for m in ldp.Model], required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--target", type=int, required=True)
    q = ld.add_parser("report", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--x", required=True)
    q.add_argument("--N", required=True, help="list of N, e.g. 10,100,1000")
    p_ldp.set_defaults(func=cmd_ldp)

    p_ver = sub.add_parser("verify", parents=[common], help="run all oracle checks")
    p_ver.add_argument("--only", help="comma-separated check ids, e.g. C1,C4")
    p_ver.set_defaults(func=cmd_verify)

    p_graph = sub.add_parser("graph", parents=[common], help="dump a Cayley graph edge list")
    p_graph.add_argument("--group", required=True)
    p_graph.set_defaults(func=cmd_graph)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "text" if args.command == "verify" else "csv"
    try:
        text, code = args.func(args)
    except (UsageError, CayleyWalkError, ValueError, ZeroDivisionError) as exc:
        print(f"cayleywalk: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
