"""``growthlab`` command line.

Machine output goes to stdout, diagnostics to stderr. Exit codes: 0 ok,
1 a proven bound failed or an internal error, 2 usage/parse, 3 budget,
4 domain or precondition.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import re
import sys
from pathlib import Path

from growthlab import __version__
from growthlab.errors import GrowthLabError, ParseError, UsageError
from growthlab.io import encode_scalar, read_set_file, write_set_file
from growthlab.rng import arithmetic_progression, geometric_progression, random_set
from growthlab.setcore import (
    GrowthBudget,
    FiniteSet,
    iterated_product,
    iterated_sumset,
    make_set,
    parse_scalar,
    ratio_set_size,
    signed_combination,
)

_GENERATOR = re.compile(r"^(ap|gp|random):(.*)$")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _kv(text: str, what: str) -> dict:
    out = {}
    if not text.strip():
        return out
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep or not key.strip():
            raise ParseError(f"bad {what} parameter {part!r}, expected key=value")
        out[key.strip()] = value.strip()
    return out


def _int(params: dict, key: str, default=None) -> int:
    if key not in params:
        if default is None:
            raise ParseError(f"missing parameter {key}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {params[key]!r}") from None


def _generate(kind: str, body: str) -> FiniteSet:
    p = _kv(body, kind)
    if kind == "ap":
        known = {"n", "start", "step"}
        A = arithmetic_progression(_int(p, "n"), parse_scalar(p.get("start", "1")), parse_scalar(p.get("step", "1")))
    elif kind == "gp":
        known = {"n", "start", "ratio"}
        A = geometric_progression(_int(p, "n"), parse_scalar(p.get("start", "1")), parse_scalar(p.get("ratio", "2")))
    else:
        known = {"n", "universe", "seed"}
        lo, sep, hi = p.get("universe", "1..1000").partition("..")
        if not sep:
            raise ParseError("universe must look like lo..hi")
        try:
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise ParseError("universe bounds must be integers") from None
        A = random_set(_int(p, "n"), lo, hi, _int(p, "seed", 0))
    extra = set(p) - known
    if extra:
        raise ParseError(f"unknown {kind} parameter(s): {', '.join(sorted(extra))}")
    return A


def load_set(spec: str) -> FiniteSet:
    """A generator spec, an inline list like ``{1,2,5/2}`` or a set file."""
    spec = spec.strip()
    m = _GENERATOR.match(spec)
    if m:
        return _generate(m.group(1), m.group(2))
    if spec.startswith(("{", "[")) or ("," in spec and not os.path.exists(spec)):
        body = spec.strip("{}[] ")
        return make_set(parse_scalar(x) for x in body.split(",") if x.strip())
    return read_set_file(spec)


def _op(spec: str):
    name, _, body = spec.partition(":")
    p = _kv(body, name)
    if name == "sum":
        return f"|{_int(p, 'k')}A|", lambda A, b: len(iterated_sumset(A, _int(p, "k"), b))
    if name == "prod":
        return f"|A^({_int(p, 'k')})|", lambda A, b: len(iterated_product(A, _int(p, "k"), b))
    if name == "signed":
        k, l = _int(p, "k"), _int(p, "l", 0)
        return f"|{k}A-{l}A|", lambda A, b: len(signed_combination(A, k, l, b))
    if name == "ratio":
        k, l = _int(p, "k", 1), _int(p, "l", 1)
        return f"|A^({k})/A^({l})|", lambda A, b: ratio_set_size(A, k, l, b)
    raise ParseError(f"unknown op {name!r} (sum, prod, signed, ratio)")


def _budget(args) -> GrowthBudget:
    kw = {}
    if args.max_result is not None:
        kw["max_result_size"] = args.max_result
    if args.max_work is not None:
        kw["max_pair_evaluations"] = args.max_work
    return GrowthBudget(**kw)


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_compute(args) -> int:
    A = load_set(args.set)
    budget = _budget(args)
    ops = [_op(o) for o in (args.op or ["sum:k=2"])]
    rows = [(o, label, fn(A, budget)) for o, (label, fn) in zip(args.op or ["sum:k=2"], ops)]
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["op", "quantity", "size"])
        w.writerows(rows)
        _emit(args, buf.getvalue())
    else:
        doc = {"n": len(A), "results": [{"op": o, "quantity": q, "size": s} for o, q, s in rows]}
        _emit(args, json.dumps(doc, ensure_ascii=False))
    return 0


def cmd_pipeline(args) -> int:
    from growthlab.convexfn import parse_function
    from growthlab.squeeze import full_pipeline

    A = load_set(args.set)
    f = parse_function(args.fn)
    report = full_pipeline(A, f, _budget(args), max_zeros=args.max_zeros, certify_grid=args.grid)
    _emit(args, report.to_json())
    return 0


def _result_lines(results) -> str:
    return "".join(r.to_json() + "\n" for r in results)


def cmd_verify(args) -> int:
    from growthlab import verify
    from growthlab.convexfn import parse_function

    budget = _budget(args)
    if args.check:
        return _single_check(args, budget)
    if args.suite == "exhaustive":
        report = verify.exhaustive_oracle(args.universe, args.max_size, args.max_fold, jobs=args.jobs)
        text = _result_lines(report.violations)
        text += f"{report.checks} checks\n{len(report.violations)} violations\n"
        _emit(args, text)
        return 1 if report.violations else 0
    if args.suite == "corpus":
        results = verify.run_corpus(args.seed, tuple(args.fn.split(",")), budget)
        bad = [r for r in results if r.name in verify.PROVEN and not r.holds]
        _emit(args, _result_lines(results) + f"{len(results)} results\n{len(bad)} violations\n")
        return 1 if bad else 0
    if not args.set:
        raise UsageError("--suite single needs --set")
    A = load_set(args.set)
    results = verify.check_main(A, parse_function(args.fn), budget)
    bad = [r for r in results if r.name in verify.PROVEN and not r.holds]
    _emit(args, _result_lines(results))
    return 1 if bad else 0


def _single_check(args, budget) -> int:
    from growthlab import verify
    from growthlab.convexfn import parse_function

    if not args.set:
        raise UsageError("--check needs --set")
    A = load_set(args.set)
    name = args.check
    if name == "cor43":
        if args.t is None:
            raise UsageError("cor43 needs --t")
        results = [verify.check_cor43(A, parse_scalar(args.t), budget)]
    elif name == "plunnecke":
        Y = load_set(args.other) if args.other else A
        results = [verify.check_plunnecke(A, Y, args.k, args.l, budget)]
    elif name == "ruzsa":
        Y = load_set(args.other) if args.other else A
        results = [verify.check_ruzsa(A, Y, A, budget)]
    elif name == "enr":
        results = [verify.check_enr(A, parse_function(args.fn), args.k, budget)]
    elif name == "bom":
        results = [verify.check_bom(A, parse_function(args.fn), args.k, budget=budget)]
    elif name == "chain":
        results = verify.reduction_chain(A, parse_function(args.fn), budget)
    elif name == "sum_product":
        results = verify.check_sum_product(A, budget)
    else:
        results = verify.check_main(A, parse_function(args.fn), budget)
    _emit(args, _result_lines(results))
    bad = [r for r in results if r.name in verify.PROVEN and not r.holds]
    return 1 if bad else 0


def cmd_search(args) -> int:
    from growthlab.search import portfolio, read_config

    config = read_config(args.config)
    stem = Path(args.config).with_suffix("")
    trace_path = Path(args.trace) if args.trace else Path(f"{stem}.trace.csv")
    best_path = Path(args.best) if args.best else Path(f"{stem}.best.txt")
    seeds = [config.seed] if not args.seeds else [int(s) for s in args.seeds.split(",")]
    value, seed, best, trace = portfolio(config, seeds, jobs=args.jobs, budget=_budget(args))[0]
    trace_path.write_text(trace.to_csv(), encoding="utf-8")
    write_set_file(best_path, best)
    doc = {
        "objective": config.objective,
        "seed": seed,
        "best_objective": encode_scalar(value, 64),
        "n": len(best),
        "trace": str(trace_path),
        "best_set": str(best_path),
    }
    _emit(args, json.dumps(doc, ensure_ascii=False))
    return 0


def cmd_repr(args) -> int:
    text = Path(args.report).read_text(encoding="utf-8") if args.report != "-" else sys.stdin.read()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError:
            out.append(line)
            continue
        out.append(_pretty(doc))
    _emit(args, "\n".join(out))
    return 0


def _pretty(doc) -> str:
    if isinstance(doc, dict) and "direction" in doc:
        mark = "ok " if doc["holds"] else "BAD"
        params = ", ".join(f"{k}={v}" for k, v in doc.get("parameters", {}).items())
        return f"[{mark}] {doc['name']}: {doc['lhs']} {doc['direction'][3:5]} {doc['rhs']} ({params})"
    if isinstance(doc, dict):
        width = max((len(k) for k in doc), default=0)
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)):
                v = json.dumps(v, ensure_ascii=False)
            lines.append(f"{k.ljust(width)}  {v}")
        return "\n".join(lines)
    return json.dumps(doc, ensure_ascii=False)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _precision(text: str) -> int:
    value = int(text)
    if value < 64:
        raise argparse.ArgumentTypeError("precision must be at least 64 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=_precision, help="working precision in bits (default 128)")
    common.add_argument("--max-result", type=int, help="largest set a kernel may produce")
    common.add_argument("--max-work", type=int, help="kernel work units allowed per operation")
    common.add_argument("-o", "--output", help="write machine output here instead of stdout")

    p = _Parser(prog="growthlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"growthlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", parents=[common], help="cardinalities of sum, product and ratio sets")
    c.add_argument("--set", required=True, help="set file, inline list or generator (ap:, gp:, random:)")
    c.add_argument("--op", action="append", help="sum:k=, prod:k=, signed:k=,l=, ratio:k=,l= (repeatable)")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(run=cmd_compute)

    q = sub.add_parser("pipeline", parents=[common], help="witness report for a set and convex function")
    q.add_argument("--set", required=True)
    q.add_argument("--fn", default="ln", help="ln, exp, cube, square or logshift:lambda=<rational>")
    q.add_argument("--max-zeros", type=int, default=5)
    q.add_argument("--grid", type=int, default=64, help="certification grid nodes")
    q.set_defaults(run=cmd_pipeline)

    v = sub.add_parser("verify", parents=[common], help="check inequalities on concrete sets")
    v.add_argument("--suite", choices=("exhaustive", "corpus", "single"), default="single")
    v.add_argument("--check", choices=("main", "cor43", "plunnecke", "ruzsa", "enr", "bom", "chain", "sum_product"))
    v.add_argument("--set")
    v.add_argument("--other", help="second set for plunnecke / ruzsa")
    v.add_argument("--fn", default="ln")
    v.add_argument("--t", help="shift for cor43")
    v.add_argument("--k", type=int, default=2)
    v.add_argument("--l", type=int, default=1)
    v.add_argument("--universe", type=int, default=6, help="exhaustive: elements range over 0..N")
    v.add_argument("--max-size", type=int, default=3)
    v.add_argument("--max-fold", type=int, default=3)
    v.add_argument("--seed", type=int, default=2024, help="corpus seed")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(run=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="anneal for sets with small growth")
    s.add_argument("--config", required=True)
    s.add_argument("--trace", help="trace CSV path (default <config>.trace.csv)")
    s.add_argument("--best", help="best-set path (default <config>.best.txt)")
    s.add_argument("--seeds", help="comma-separated restart seeds (default: the config seed)")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(run=cmd_search)

    r = sub.add_parser("repr", parents=[common], help="pretty-print a JSON report")
    r.add_argument("report", help="report file, or - for stdin")
    r.set_defaults(run=cmd_repr)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.precision:
            os.environ["GROWTHLAB_PRECISION"] = str(args.precision)
        return args.run(args)
    except GrowthLabError as exc:
        print(f"growthlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"growthlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
