"""Command-line entry point.

Exit status: 0 success or affirmative verdict, 1 negative verdict, 2 usage or
data error.  Output is JSON on stdout unless ``--pretty`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import axioms as ax
from . import verify as vf
from .chordal import WITNESS_CAP, chordless_cycle_witness, find_peo
from .errors import CapExceededError, GraphFormatError, NotChordalError
from .graph import load_graph, to_dot
from .model import ExplicitModel, graph_model

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(args, obj) -> None:
    _emit(args, json.dumps(obj, indent=2 if getattr(args, "pretty", False) else None))


def _load_model(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        n = int(data.get("n", -1))
        if n > ax.AXIOM_CAP:
            raise CapExceededError("axiom check", n, ax.AXIOM_CAP)
        return ExplicitModel.from_dict(data)
    from .graph import parse_graph

    return graph_model(parse_graph(text))


# -- subcommands --------------------------------------------------------------------


def cmd_chordal(args) -> int:
    g = load_graph(args.graph)
    peo = find_peo(g)
    if peo is not None:
        if args.pretty:
            _emit(args, "chordal: yes\nperfect elimination ordering: " + " ".join(map(str, peo)))
        else:
            _dump(args, {"chordal": True, "peo": peo})
        return EXIT_OK
    witness = chordless_cycle_witness(g) if g.n <= WITNESS_CAP else None
    if args.pretty:
        line = " ".join(map(str, witness)) if witness else "(graph too large for witness search)"
        _emit(args, "chordal: no\nchordless cycle: " + line)
    else:
        _dump(args, {"chordal": False, "witness": witness})
    return EXIT_NEGATIVE


def cmd_axioms(args) -> int:
    selection = [ax.normalize_axiom_name(a) for a in args.axiom] if args.axiom else None
    model = _load_model(args.input)
    if model.n > ax.AXIOM_CAP:
        raise CapExceededError("axiom check", model.n, ax.AXIOM_CAP)
    report = ax.check_all(model, selection)
    if args.pretty:
        lines = [f"{'axiom':<5} {'title':<30} {'holds':<6} violations"]
        for r in report.reports.values():
            lines.append(f"{r.axiom:<5} {r.title:<30} {str(r.holds).lower():<6} {r.violation_count}")
            for v in r.violations[: args.show]:
                lines.append(f"      {json.dumps(v.bindings)}")
        _emit(args, "\n".join(lines))
    else:
        _emit(args, report.to_json())
    return EXIT_OK if report.holds else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    n = args.n
    if args.theorem == 1:
        summary = vf.verify_theorem1(n, args.workers)
    elif args.theorem == 2:
        summary = vf.verify_theorem2(n, args.workers)
    elif args.theorem == 3:
        summary = vf.verify_theorem3(n, args.workers)
    elif args.equivalences:
        summary = vf.verify_equivalences(n, args.workers)
    elif args.perfect_maps:
        summary = vf.verify_perfect_maps(n, args.workers)
    elif args.c7_witness:
        summary = vf.c7_witness_summary(n)
    else:
        summary = vf.verify_oracle_learning(n, args.workers)
    if args.pretty:
        _emit(args, summary.to_table())
    else:
        _emit(args, summary.to_json())
    return EXIT_OK if summary.ok else EXIT_NEGATIVE


def cmd_learn(args) -> int:
    from .learn import LearnConfig, learn_skeleton, load_csv

    config = LearnConfig(
        max_cond_size=args.max_cond_size,
        alpha=args.alpha,
        chordalize=args.chordalize,
        c8_pruning=not args.no_c8,
        c6_rule=not args.no_c6,
    )
    if args.oracle:
        g = load_graph(args.oracle)
        result = learn_skeleton(graph_model(g), g.n, config)
    else:
        data = load_csv(args.csv)
        if data.n_rows == 0:
            raise UsageError(f"{args.csv}: no data rows")
        result = learn_skeleton(data, data.n_vars, config)
    if args.pretty:
        names = result.names or [str(v) for v in range(result.skeleton.n)]
        lines = ["skeleton: " + (", ".join(f"{names[u]}-{names[v]}" for u, v in result.skeleton.edges) or "(empty)")]
        lines.append("fixed: " + (", ".join(f"{names[u]}-{names[v]}" for u, v in result.fixed_edges) or "(none)"))
        lines.append("fill: " + (", ".join(f"{names[u]}-{names[v]}" for u, v in result.fill_edges) or "(none)"))
        lines.append(f"ci tests: {result.ci_tests}")
        _emit(args, "\n".join(lines))
    else:
        _emit(args, result.to_json())
    return EXIT_OK


def cmd_sample(args) -> int:
    from .learn import sample_dataset

    g = load_graph(args.graph)
    arities = args.arities[0] if len(args.arities) == 1 else tuple(args.arities)
    data = sample_dataset(g, arities, args.rows, seed=args.seed)
    _emit(args, data.to_csv())
    return EXIT_OK


def cmd_export_dot(args) -> int:
    _emit(args, to_dot(load_graph(args.graph)))
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _alpha(s):
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {v}")
    return v


def _arities(s):
    try:
        vals = [int(p) for p in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an int or comma list, got {s!r}") from None
    if any(v < 2 for v in vals):
        raise argparse.ArgumentTypeError("arities must be >= 2")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="decomposable", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("chordal", help="chordality verdict with PEO or chordless cycle")
    c.add_argument("graph")
    c.add_argument("--pretty", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_chordal)

    a = sub.add_parser("axioms", help="check C1-C9' on a graph file or model JSON")
    a.add_argument("input", help="graph text file or ExplicitModel JSON")
    a.add_argument("--axiom", action="append", help="axiom to check (repeatable); default all")
    a.add_argument("--show", type=_nonneg_int, default=3, help="violations listed per axiom with --pretty")
    a.add_argument("--pretty", action="store_true")
    a.add_argument("--out")
    a.set_defaults(func=cmd_axioms)

    v = sub.add_parser("verify", help="exhaustive verification sweeps")
    which = v.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", type=int, choices=[1, 2, 3])
    which.add_argument("--equivalences", action="store_true")
    which.add_argument("--perfect-maps", action="store_true")
    which.add_argument("--c7-witness", action="store_true", help="search n = 1..N for a C7 witness")
    which.add_argument("--learning", action="store_true", help="oracle learning on all chordal graphs")
    v.add_argument("--n", type=_positive_int, required=True)
    v.add_argument("--workers", type=_positive_int, default=1)
    v.add_argument("--pretty", action="store_true")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    lr = sub.add_parser("learn", help="learn a chordal skeleton from CSV data or a graph oracle")
    lr.add_argument("csv", nargs="?")
    lr.add_argument("--oracle", metavar="GRAPH", help="use separation in GRAPH instead of data")
    lr.add_argument("--alpha", type=_alpha, default=0.05)
    lr.add_argument("--max-cond-size", type=_nonneg_int)
    lr.add_argument("--chordalize", action="store_true")
    lr.add_argument("--no-c8", action="store_true", help="disable complete-candidate pruning")
    lr.add_argument("--no-c6", action="store_true", help="disable edge fixing")
    lr.add_argument("--pretty", action="store_true")
    lr.add_argument("--out")
    lr.set_defaults(func=cmd_learn)

    s = sub.add_parser("sample", help="sample categorical data from a chordal graph")
    s.add_argument("graph")
    s.add_argument("--arities", type=_arities, default=[2])
    s.add_argument("--rows", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    d = sub.add_parser("export-dot", help="write a graph file as Graphviz DOT")
    d.add_argument("graph")
    d.add_argument("--out")
    d.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "learn" and bool(args.csv) == bool(args.oracle):
        parser.error("learn needs exactly one of a CSV file or --oracle GRAPH")
    try:
        return args.func(args)
    except GraphFormatError as exc:
        path = getattr(args, "graph", None) or getattr(args, "input", None) or getattr(args, "oracle", None)
        print(f"error: {path}: {exc}", file=sys.stderr)
    except (OSError, CapExceededError, NotChordalError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
