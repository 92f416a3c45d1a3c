"""Command-line front end.

Exit status: 0 on success, 1 when violations or structural failures are found,
2 on usage or input errors (diagnostics go to standard error).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .axioms import axiom_set, check_all, results_to_jsonl, summarize, tree_pattern_axioms
from .core import TreeAbox, make_cycle, make_forest, random_tree, validate_structure
from .errors import TreeOdpError
from .export import (
    DEFAULT_NAMESPACE, POSITIVE_INTEGER_MODE, ExportOptions, export_abox_turtle, export_functional,
)
from .expressions import NON_NEGATIVE_INTEGER, parse_expression
from .ingest import parse_abox_turtle, parse_newick, sniff_format, write_newick
from .materialize import MaterializeOptions, materialize
from .query import DescendantAnswer, QueryResult, evaluate, run_cq

NEWICK_SUFFIXES = {".nwk", ".newick", ".tre", ".tree", ".nhx"}
TURTLE_SUFFIXES = {".ttl", ".turtle"}


class UsageError(Exception):
    pass


# -- io ------------------------------------------------------------------------

def _read_input(path: str, fmt: str) -> TreeAbox:
    if path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text(encoding="utf-8")
    if fmt == "auto":
        suffix = Path(path).suffix.lower() if path != "-" else ""
        if suffix in NEWICK_SUFFIXES:
            fmt = "newick"
        elif suffix in TURTLE_SUFFIXES:
            fmt = "turtle"
        else:
            fmt = sniff_format(text)
    return parse_newick(text) if fmt == "newick" else parse_abox_turtle(text)


def _emit(args, text: str) -> None:
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def _fact_records(abox: TreeAbox) -> list[dict]:
    out = []
    for fact in abox.sorted_facts():
        if fact[0] == "concept":
            out.append({"kind": "concept", "node": fact[1], "concept": fact[2]})
        elif fact[0] == "role":
            out.append({"kind": "role", "role": fact[1], "subject": fact[2], "object": fact[3]})
        else:
            out.append({"kind": "data", "node": fact[1], "property": fact[2], "value": fact[3]})
    return out


def _export_options(args, include_irreflexive: bool = True) -> ExportOptions:
    return ExportOptions(namespace=args.namespace, out_degree_datatype=args.datatype,
                         include_irreflexive=include_irreflexive)


def _write_abox(args, abox: TreeAbox, to: str = "turtle") -> None:
    if args.format == "json-lines":
        _emit(args, _jsonl(_fact_records(abox)))
    elif to == "newick":
        _emit(args, write_newick(abox) + "\n")
    else:
        _emit(args, export_abox_turtle(abox, _export_options(args)))


def _materialize_opts(args) -> MaterializeOptions:
    return MaterializeOptions(
        n_bound=getattr(args, "n_bound", None),
        derive_siblings_by_rule=not getattr(args, "no_rule_siblings", False),
        compute_out_degrees=not getattr(args, "no_out_degrees", False),
    )


# -- commands ------------------------------------------------------------------

def cmd_ingest(args) -> int:
    _write_abox(args, _read_input(args.input, args.input_format), args.to)
    return 0


def cmd_materialize(args) -> int:
    interp = materialize(_read_input(args.input, args.input_format), _materialize_opts(args))
    _write_abox(args, interp.to_abox())
    return 0


def cmd_validate(args) -> int:
    report = validate_structure(_read_input(args.input, args.input_format))
    record = report.as_dict()
    if args.arity is not None:
        record[f"isNAry({args.arity})"] = report.is_n_ary(args.arity)
        record[f"isNBounded({args.arity})"] = report.is_n_bounded(args.arity)
    if args.format == "json-lines":
        _emit(args, _jsonl([record]))
    else:
        lines = [
            f"tree: {'yes' if report.is_tree else 'FAILED'}",
            f"roots: {report.root_count} ({', '.join(report.roots) or '-'})",
            f"multiple parents: {', '.join(report.multi_parent) or '-'}",
            f"unreachable: {', '.join(report.unreachable) or '-'}",
            f"arity: {report.arity}",
            f"binary: {'yes' if report.is_binary else 'no'}",
        ]
        if args.arity is not None:
            lines.append(f"{args.arity}-ary: {'yes' if report.is_n_ary(args.arity) else 'no'}")
            lines.append(f"{args.arity}-bounded: {'yes' if report.is_n_bounded(args.arity) else 'no'}")
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report.is_tree else 1


def _format_witness(w) -> str:
    return f"({', '.join(w)})" if isinstance(w, tuple) else w


def _check_lines(results) -> list[str]:
    lines = []
    for r in results:
        if r.satisfied:
            lines.append(f"{r.axiom_id} ok" + (f"  [warning: {r.warning}]" if r.warning else ""))
        else:
            shown = ", ".join(_format_witness(w) for w in r.witnesses)
            more = f" (+{r.total - len(r.witnesses)} more)" if r.total > len(r.witnesses) else ""
            lines.append(f"{r.axiom_id} VIOLATED by {r.total}: {shown}{more}")
    return lines


def cmd_check(args) -> int:
    if args.axioms in ("nbounded", "tree+nbounded") and args.n is None:
        raise UsageError(f"--axioms {args.axioms} needs --n")
    axioms = axiom_set(args.axioms, include_irreflexive=not args.no_irreflexive, n=args.n)
    abox = _read_input(args.input, args.input_format)
    if args.no_materialize:
        from .core import abox_to_interpretation
        interp = abox_to_interpretation(abox)
    else:
        if args.n_bound is None and args.axioms in ("nbounded", "tree+nbounded"):
            args.n_bound = args.n
        interp = materialize(abox, _materialize_opts(args))
    datatype = "positiveInteger" if args.datatype == POSITIVE_INTEGER_MODE else NON_NEGATIVE_INTEGER
    results = check_all(interp, axioms, datatype=datatype,
                        max_witnesses=None if args.all_witnesses else args.max_witnesses)
    if args.format == "json-lines":
        _emit(args, results_to_jsonl(results))
    else:
        _emit(args, "\n".join(_check_lines(results) + [summarize(results)]) + "\n")
    return 0 if all(r.satisfied for r in results) else 1


def cmd_query(args) -> int:
    if (args.cq is None) == (args.expr is None):
        raise UsageError("give exactly one of --cq or --expr")
    interp = materialize(_read_input(args.input, args.input_format), _materialize_opts(args))
    if args.expr is not None:
        answer = evaluate(interp, parse_expression(args.expr))
    else:
        answer = run_cq(interp, args.cq, args.x, args.y)
    if isinstance(answer, DescendantAnswer):
        record = {"related": answer.related, "ancestor": answer.ancestor, "descendant": answer.descendant}
        if args.format == "json-lines":
            text = _jsonl([record])
        elif answer.related:
            text = f"true: {answer.descendant} is a descendant of {answer.ancestor}\n"
        else:
            text = "false\n"
    else:
        assert isinstance(answer, QueryResult)
        if args.format == "json-lines":
            text = _jsonl([{"expression": str(answer.expression), "nodes": list(answer.nodes)}])
        else:
            text = "".join(n + "\n" for n in answer.nodes)
    _emit(args, text)
    return 0


def cmd_export(args) -> int:
    if args.what == "abox":
        if not args.input:
            raise UsageError("export abox needs --input")
        _write_abox(args, _read_input(args.input, args.input_format))
        return 0
    if args.axioms in ("nbounded", "tree+nbounded") and args.n is None:
        raise UsageError(f"--axioms {args.axioms} needs --n")
    axioms = axiom_set(args.axioms, include_irreflexive=True, n=args.n)
    opts = _export_options(args, include_irreflexive=not args.no_irreflexive)
    text = export_functional(axioms, opts)
    if args.format == "json-lines":
        from .export import axiom_statements
        ids = [a.id for a in (axioms if opts.include_irreflexive else axioms.without_irreflexive())]
        text = _jsonl({"axiom": i, "statement": s} for i, s in zip(ids, axiom_statements(text)))
    _emit(args, text)
    return 0


def cmd_gen(args) -> int:
    _write_abox(args, random_tree(args.seed, args.size, args.branching), args.to)
    return 0


def cmd_demo_limits(args) -> int:
    full = tree_pattern_axioms(True)
    owl_dl = tree_pattern_axioms(False)
    records, lines = [], []
    models = [
        ("forest", f"{args.copies} disjoint copies of the example tree", make_forest(args.copies)),
        ("cycle", f"hasChild cycle of length {args.cycle_length}", make_cycle(args.cycle_length)),
    ]
    for name, description, abox in models:
        interp = materialize(abox)
        report = validate_structure(interp)
        lines.append(f"{name}: {description}, {len(interp.domain)} nodes")
        record = {"model": name, "nodes": len(interp.domain), "isTree": report.is_tree,
                  "rootCount": report.root_count}
        for label, axioms in (("tree axioms", full), ("tree axioms without irreflexivity", owl_dl)):
            results = check_all(interp, axioms)
            violated = [r for r in results if not r.satisfied]
            line = f"  {label}: {summarize(results)}"
            if violated:
                line += "; violated " + ", ".join(
                    f"{r.axiom_id} (witness {_format_witness(r.witnesses[0])})" for r in violated)
            lines.append(line)
            record["fullSet" if axioms is full else "irreflexivityFree"] = {
                "satisfied": len(results) - len(violated), "total": len(results),
                "violated": [r.axiom_id for r in violated]}
        verdict = "ok" if report.is_tree else f"FAILED ({report.root_count} roots"
        if not report.is_tree:
            verdict += f": {', '.join(report.roots)})" if report.roots else ")"
        lines.append(f"  tree validation: {verdict}")
        records.append(record)
    lines.append("Neither structure is a rooted tree, yet the forest satisfies every tree axiom "
                 "and the cycle is caught only by irreflexivity of the closure roles.")
    _emit(args, _jsonl(records) if args.format == "json-lines" else "\n".join(lines) + "\n")
    return 1


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json-lines"), default="text")
    common.add_argument("--output", "-o", help="output path (default: standard output)")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", "-i", required=True, help="input file, '-' for standard input")
    source.add_argument("--input-format", choices=("auto", "newick", "turtle"), default="auto")

    serial = argparse.ArgumentParser(add_help=False)
    serial.add_argument("--namespace", default=DEFAULT_NAMESPACE)
    serial.add_argument("--datatype", choices=(NON_NEGATIVE_INTEGER, POSITIVE_INTEGER_MODE),
                        default=NON_NEGATIVE_INTEGER)

    mat = argparse.ArgumentParser(add_help=False)
    mat.add_argument("--n-bound", type=_positive, help="derive Child_i/R_i encoding for n-bounded trees")
    mat.add_argument("--no-rule-siblings", action="store_true",
                     help="do not derive hasSibling from hasParent/hasChild")
    mat.add_argument("--no-out-degrees", action="store_true")

    axioms = argparse.ArgumentParser(add_help=False)
    axioms.add_argument("--axioms", choices=("tree", "list", "sequence", "nbounded", "tree+nbounded"),
                        default="tree")
    axioms.add_argument("--n", type=_positive, help="bound for the n-bounded axioms")
    axioms.add_argument("--no-irreflexive", action="store_true")

    parser = argparse.ArgumentParser(prog="treeodp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common, source, serial], help="parse Newick/Turtle into a canonical ABox")
    p.add_argument("--to", choices=("turtle", "newick"), default="turtle")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("materialize", parents=[common, source, serial, mat], help="derive all pattern facts")
    p.set_defaults(func=cmd_materialize)

    p = sub.add_parser("validate", parents=[common, source], help="check the rooted-tree conditions")
    p.add_argument("--arity", type=_positive, help="also report n-ary / n-bounded for this n")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", parents=[common, source, serial, mat, axioms], help="model-check an axiom set")
    p.add_argument("--max-witnesses", type=_positive, default=10)
    p.add_argument("--all-witnesses", action="store_true")
    p.add_argument("--no-materialize", action="store_true", help="check the asserted facts as given")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("query", parents=[common, source, mat], help="answer a competency question")
    p.add_argument("--cq", type=int, choices=range(1, 10), metavar="{1..9}")
    p.add_argument("--expr", help="class expression in prefix syntax")
    p.add_argument("--x")
    p.add_argument("--y")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("export", parents=[common, serial, axioms], help="serialize a TBox or an ABox")
    p.add_argument("what", choices=("tbox", "abox"))
    p.add_argument("--input", "-i")
    p.add_argument("--input-format", choices=("auto", "newick", "turtle"), default="auto")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("gen", parents=[common, serial], help="generate a random tree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=_positive, default=10)
    p.add_argument("--branching", type=_positive, default=2)
    p.add_argument("--to", choices=("turtle", "newick"), default="turtle")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("demo-limits", parents=[common], help="forest and cycle countermodels")
    p.add_argument("--copies", type=_at_least_two, default=2)
    p.add_argument("--cycle-length", type=_at_least_two, default=3)
    p.set_defaults(func=cmd_demo_limits)
    return parser


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _at_least_two(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("must be >= 2")
    return value


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"treeodp {args.command}: {exc}", file=sys.stderr)
        return 2
    except (TreeOdpError, ValueError, OSError) as exc:
        print(f"treeodp {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
