"""Command-line front door.

Subcommands: build-graph (instance file -> graph JSON), check (one
formula or stock property over a graph), props (the whole stock property
battery), oracle-diff (evaluator vs brute force), bench (scaling CSV).

Exit codes: 0 for a true sentence / nonempty set (and for clean
informational runs), 1 for false/empty (or an oracle disagreement), 2
for any error.  Errors print one JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import DEFAULT_SIZES, rows_to_csv, run_bench
from .errors import (
    FormulaSyntaxError,
    IgcheckError,
    InstanceError,
    InvalidArgumentError,
    WellFormednessError,
)
from .evaluator import evaluate
from .graph import ImprovementGraph
from .builders import build_from_instance, load_instance
from .oracle import (
    oracle_acyclic,
    oracle_path_count,
    oracle_sinks,
    oracle_weakly_acyclic,
)
from .parser import load_formula_file, parse, pretty
from .properties import PROPERTY_NAMES, build_property


def _load_graph(path):
    with open(path, "r", encoding="utf-8") as fh:
        return ImprovementGraph.loads(fh.read())


def _write_out(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _query_formula(args):
    """The formula a check run asks for: --formula, --formula-file or --prop."""
    given = [x is not None for x in
             (args.formula, args.formula_file, args.prop)]
    if sum(given) != 1:
        raise InvalidArgumentError(
            "give exactly one of --formula, --formula-file and --prop")
    if args.formula is not None:
        return parse(args.formula)
    if args.formula_file is not None:
        defs = load_formula_file(args.formula_file)
        if args.name is None:
            raise InvalidArgumentError(
                "--formula-file needs --name to pick a definition")
        if args.name not in defs:
            raise InvalidArgumentError(
                f"no definition named {args.name!r}; file defines: "
                + ", ".join(sorted(defs)))
        params, formula = defs[args.name]
        if params:
            raise InvalidArgumentError(
                f"definition {args.name!r} takes parameters "
                f"({', '.join(params)}); only parameterless definitions "
                "can be checked directly")
        return formula
    return build_property(args.prop, k=args.k, bound=args.bound, n=args.n,
                          phi=args.phi, literal=args.literal)


def cmd_build_graph(args):
    inst = load_instance(args.input)
    graph = build_from_instance(
        inst, mode=args.mode, k=args.k, max_coalition=args.max_coalition,
        force=args.force)
    _write_out(graph.dumps(), args.out)
    return 0


def cmd_check(args):
    graph = _load_graph(args.input)
    formula = _query_formula(args)
    verdict = evaluate(graph, formula, backend=args.backend,
                       max_table_vars=args.max_table_vars)
    out = verdict.to_json_dict(graph)
    out["formula"] = pretty(formula)
    _write_out(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return 0 if verdict.truthy else 1


def _battery(graph, bound):
    """The stock property battery for a graph: name -> formula."""
    checks = {"sink": build_property("sink"),
              "acyclic": build_property("acyclic"),
              "weakly-acyclic": build_property("weakly-acyclic"),
              "path-count": build_property("path-count", bound=bound)}
    for k in range(1, graph.n + 1):
        checks[f"sink-{k}"] = build_property("sink-k", k=k)
        checks[f"fip-{k}"] = build_property("k-fip", k=k)
    return checks


def cmd_props(args):
    graph = _load_graph(args.input)
    bound = args.bound if args.bound is not None else graph.node_count
    report = {}
    for name, formula in sorted(_battery(graph, bound).items()):
        verdict = evaluate(graph, formula, backend=args.backend,
                           max_table_vars=args.max_table_vars)
        entry = verdict.to_json_dict(graph)
        entry["formula"] = pretty(formula)
        report[name] = entry
    _write_out(json.dumps(report, indent=2, sort_keys=True) + "\n",
               args.out)
    return 0


def cmd_oracle_diff(args):
    graph = _load_graph(args.input)
    nodes = graph.node_count
    checks = []

    def val(formula):
        return evaluate(graph, formula, backend=args.backend).value

    checks.append(("sink", val(build_property("sink")),
                   oracle_sinks(graph, 1)))
    checks.append(("acyclic", val(build_property("acyclic")),
                   oracle_acyclic(graph, 1)))
    checks.append(("weakly-acyclic",
                   val(build_property("weakly-acyclic")),
                   oracle_weakly_acyclic(graph, 1)))
    for b in sorted({1, 5, nodes} - {0}):
        checks.append((f"path-count-{b}",
                       val(build_property("path-count", bound=b)),
                       oracle_path_count(graph, b, 1)))
    for k in range(1, graph.n + 1):
        checks.append((f"sink-{k}",
                       val(build_property("sink-k", k=k)),
                       oracle_sinks(graph, k)))
        checks.append((f"fip-{k}", val(build_property("k-fip", k=k)),
                       oracle_acyclic(graph, k)))

    for name, got, want in checks:
        if got == want:
            continue
        if isinstance(want, frozenset):
            diff = sorted(got.symmetric_difference(want))
            sys.stdout.write(
                f"DISAGREE {name}: first differing node {diff[0]} "
                f"(evaluator={'in' if diff[0] in got else 'out'}, "
                f"oracle={'in' if diff[0] in want else 'out'})\n")
        else:
            sys.stdout.write(
                f"DISAGREE {name}: evaluator={got} oracle={want}\n")
        return 1
    sys.stdout.write(f"agree on {len(checks)} checks over {nodes} nodes\n")
    return 0


def cmd_bench(args):
    sizes = tuple(int(s) for s in args.sizes.split(","))
    formula = None
    if args.formula is not None:
        formula = parse(args.formula)
    elif args.prop is not None:
        formula = build_property(args.prop, k=args.k, bound=args.bound,
                                 n=args.n, phi=args.phi,
                                 literal=args.literal)
    backends = args.backends.split(",") if args.backends else None
    rows = run_bench(sizes=sizes, seed=args.seed, formula=formula,
                     backends=backends)
    _write_out(rows_to_csv(rows, with_backend=backends is not None),
               args.out)
    return 0


def _add_query_flags(sub):
    sub.add_argument("--formula", help="formula text to evaluate")
    sub.add_argument("--formula-file",
                     help="definitions file (name(params) := body per line)")
    sub.add_argument("--name", help="definition to pick from --formula-file")
    sub.add_argument("--prop", choices=PROPERTY_NAMES,
                     help="stock property name")
    sub.add_argument("--k", type=int, help="coalition bound for k-ary props")
    sub.add_argument("--bound", type=int, help="bound for path-count")
    sub.add_argument("--n", type=int, help="agent count for envy-free or "
                     "literal coalition forms")
    sub.add_argument("--phi", help="target formula for the reachable prop")
    sub.add_argument("--literal", action="store_true",
                     help="spell coalition atoms out instead of using E#k")


def _add_eval_flags(sub):
    sub.add_argument("--backend", choices=("auto", "dense", "packed"),
                     default=None, help="table backend (default: auto)")
    sub.add_argument("--max-table-vars", type=int, default=3,
                     dest="max_table_vars",
                     help="widest table the evaluator may build")


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="igcheck",
        description="Model-check fixpoint+counting formulas over "
                    "improvement graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-graph",
                       help="compile an instance file into a graph file")
    b.add_argument("--input", required=True, help="instance JSON file")
    b.add_argument("--out", help="output path (default: stdout)")
    b.add_argument("--mode", default="unilateral",
                   choices=("unilateral", "coalition", "best-response"),
                   help="deviation mode for game instances")
    b.add_argument("--k", type=int, help="coalition size for --mode coalition")
    b.add_argument("--max-coalition", type=int, dest="max_coalition",
                   help="largest trading coalition for allocation instances")
    b.add_argument("--force", action="store_true",
                   help="override the resource guards")
    b.set_defaults(func=cmd_build_graph)

    c = sub.add_parser("check", help="evaluate one formula or property")
    c.add_argument("--input", required=True, help="graph JSON file")
    c.add_argument("--out", help="output path (default: stdout)")
    _add_query_flags(c)
    _add_eval_flags(c)
    c.set_defaults(func=cmd_check)

    p = sub.add_parser("props", help="run the stock property battery")
    p.add_argument("--input", required=True, help="graph JSON file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--bound", type=int,
                   help="path-count bound (default: node count)")
    _add_eval_flags(p)
    p.set_defaults(func=cmd_props)

    d = sub.add_parser("oracle-diff",
                       help="diff evaluator verdicts against brute force")
    d.add_argument("--input", required=True, help="graph JSON file")
    d.add_argument("--backend", choices=("auto", "dense", "packed"),
                   default=None)
    d.set_defaults(func=cmd_oracle_diff)

    n = sub.add_parser("bench", help="time a property across graph sizes")
    n.add_argument("--sizes", default=",".join(str(s) for s in DEFAULT_SIZES),
                   help="comma-separated node counts (perfect squares)")
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--out", help="output path (default: stdout)")
    n.add_argument("--backends",
                   help="comma-separated backends to compare, e.g. "
                        "packed,dense")
    _add_query_flags(n)
    n.set_defaults(func=cmd_bench)

    return ap


def main(argv=None):
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except IgcheckError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, FormulaSyntaxError):
            payload["line"] = exc.line
            payload["col"] = exc.col
        if isinstance(exc, WellFormednessError):
            payload["code"] = exc.code
        if isinstance(exc, InstanceError) and exc.pointer is not None:
            payload["pointer"] = exc.pointer
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
        return 2
    except OSError as exc:
        sys.stderr.write(json.dumps(
            {"error": "OSError", "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
