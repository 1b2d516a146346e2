"""``prefrep`` command line.

Every command except ``dot`` prints one JSON document on stdout.  Errors go
to stderr as ``{"error": <kind>, "message": <text>}`` with exit status 1
(invalid input), 2 (budget exceeded) or 3 (cyclic priority).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import Instance, is_consistent
from .errors import BudgetExceeded, CyclicPriority, NotARepair, PrefRepError, ValidationError
from .graph import Budget, build_conflict_graph, enumerate_repairs
from .grepair import enumerate_grepairs, is_grepair
from .io import (
    format_fds,
    format_ids,
    format_priority,
    load_instance,
    parse_fds,
    parse_ids,
    parse_priority,
    parse_schema,
    write_instance,
)
from .lrepair import clean, enumerate_lrepairs, is_lrepair
from .postulates import DEFAULT_SAMPLES, EXHAUSTIVE_BELOW, check_postulates
from .priority import EMPTY, has_only_acyclic_extensions, is_acyclic, is_total
from .query import MODES, cqa, parse_query
from .reductions import (
    ENCODINGS,
    parse_dimacs,
    parse_qdimacs,
    reduce_3sat_gcheck,
    reduce_3sat_lcqa,
    reduce_qbf_gcqa,
)

EXIT_CODES = ((ValidationError, 1), (BudgetExceeded, 2), (CyclicPriority, 3))


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input: exit 1, keeping 2 for budget overruns
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": "UsageError", "message": message}) + "\n")
        sys.exit(1)


class Context:
    """Loaded input shared by the data commands."""

    def __init__(self, args: argparse.Namespace):
        data = Path(args.data)
        schema_path = Path(args.schema) if args.schema else data / "schema.txt"
        self.schema = parse_schema(_read(schema_path))
        self.inst: Instance = load_instance(data, self.schema)
        fds_path = Path(args.fds) if args.fds else data / "fds.txt"
        if args.fds or fds_path.exists():
            self.fds = parse_fds(_read(fds_path), self.schema)
        else:
            self.fds = ()
        self.graph = build_conflict_graph(self.inst, self.fds)
        if args.priority:
            self.pri = parse_priority(
                _read(Path(args.priority)), self.inst, self.fds,
                strict=not args.lenient, graph=self.graph,
            )
        else:
            self.pri = EMPTY
        self.budget = Budget(max_repairs=args.budget, max_vertices=args.max_vertices)


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _repairs_json(reps) -> dict:
    return {"count": len(reps), "repairs": [format_ids(r) for r in reps]}


def cmd_repairs(args, out) -> int:
    ctx = Context(args)
    out(_repairs_json(enumerate_repairs(ctx.inst, ctx.fds, ctx.budget)))
    return 0


def cmd_preferred(args, out) -> int:
    ctx = Context(args)
    enum = enumerate_lrepairs if args.mode == "l" else enumerate_grepairs
    reps = enum(ctx.inst, ctx.fds, ctx.pri, budget=ctx.budget, graph=ctx.graph)
    out({"mode": args.mode, **_repairs_json(reps)})
    return 0


def cmd_check(args, out) -> int:
    ctx = Context(args)
    cand = parse_ids(_read(Path(args.repair[1:])) if args.repair.startswith("@") else args.repair)
    doc = {"mode": args.mode, "candidate": format_ids(cand)}
    try:
        if args.mode == "l":
            ok = is_lrepair(ctx.inst, ctx.fds, ctx.pri, cand, graph=ctx.graph)
        else:
            ok = is_grepair(ctx.inst, ctx.fds, ctx.pri, cand, budget=ctx.budget, graph=ctx.graph)
        doc.update(is_repair=True, preferred=ok)
    except NotARepair:
        doc.update(is_repair=False, preferred=False)
    out(doc)
    return 0


def cmd_cqa(args, out) -> int:
    ctx = Context(args)
    text = _read(Path(args.query[1:])).strip() if args.query.startswith("@") else args.query
    q = parse_query(text, ctx.schema)
    answer = cqa(ctx.inst, ctx.fds, ctx.pri, q, mode=args.mode, budget=ctx.budget)
    out({"mode": args.mode, "query": str(q), "answer": answer})
    return 0


def cmd_clean(args, out) -> int:
    ctx = Context(args)
    kept = clean(ctx.inst, ctx.fds, ctx.pri, graph=ctx.graph)
    removed = set(ctx.inst.tuples) - kept
    write_instance(ctx.inst.restrict(kept), args.out)
    out({"out": str(args.out), "kept": format_ids(kept), "removed": format_ids(removed)})
    return 0


def cmd_info(args, out) -> int:
    ctx = Context(args)
    acyclic = is_acyclic(ctx.pri)
    out({
        "tuples": len(ctx.inst),
        "conflicts": [format_ids(e) for e in ctx.graph.edge_list()],
        "consistent": is_consistent(ctx.inst, ctx.fds),
        "priority_pairs": len(ctx.pri),
        "acyclic": acyclic,
        "total": is_total(ctx.pri, ctx.inst, ctx.fds, ctx.graph),
        "only_acyclic_extensions": (
            has_only_acyclic_extensions(ctx.pri, ctx.inst, ctx.fds, ctx.graph) if acyclic else None
        ),
    })
    return 0


def cmd_dot(args, out) -> int:
    ctx = Context(args)
    sys.stdout.write(ctx.graph.to_dot(ctx.pri))
    return 0


def cmd_postulates(args, out) -> int:
    ctx = Context(args)
    families = ["l", "g"] if args.mode == "both" else [args.mode]
    reports = [
        check_postulates(
            ctx.inst, ctx.fds, ctx.pri, fam, budget=ctx.budget,
            exhaustive_below=args.exhaustive_below, samples=args.samples,
            seed=args.seed, graph=ctx.graph,
        )
        for fam in families
    ]
    out({"passed": all(r.passed for r in reports), "families": [r.to_json() for r in reports]})
    return 0


def cmd_reduce(args, out) -> int:
    text = _read(Path(args.formula))
    if args.kind == "3sat-l":
        red = reduce_3sat_lcqa(parse_dimacs(text), positive_query=args.positive_query)
    elif args.kind == "3sat-g":
        red = reduce_3sat_gcheck(parse_dimacs(text), encoding=args.encoding)
    else:
        red = reduce_qbf_gcqa(parse_qdimacs(text), negated_x_query=args.negated_x_query, encoding=args.encoding)
    dest = Path(args.out)
    write_instance(red.instance, dest)
    (dest / "fds.txt").write_text(format_fds(red.fds))
    (dest / "prio.txt").write_text(format_priority(red.priority))
    files = ["schema.txt", "R.csv", "fds.txt", "prio.txt", "labels.json"]
    if red.query_text is not None:
        (dest / "query.txt").write_text(red.query_text + "\n")
        files.append("query.txt")
    if red.candidate is not None:
        (dest / "candidate.txt").write_text(" ".join(format_ids(red.candidate)) + "\n")
        files.append("candidate.txt")
    labels = {name: str(t) for name, t in red.labels.items()}
    (dest / "labels.json").write_text(json.dumps(labels, indent=2) + "\n")
    out({"out": str(dest), "kind": args.kind, "tuples": len(red.instance), "files": sorted(files)})
    return 0


def _data_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--data", required=True, metavar="DIR", help="directory holding <Rel>.csv files")
    p.add_argument("--schema", metavar="FILE", help="schema file (default DIR/schema.txt)")
    p.add_argument("--fds", metavar="FILE", help="FD file (default DIR/fds.txt if present)")
    p.add_argument("--priority", metavar="FILE", help="priority file (default: empty priority)")
    p.add_argument("--lenient", action="store_true",
                   help="drop priority pairs between non-conflicting tuples instead of failing")
    p.add_argument("--budget", type=int, default=20000, metavar="N", help="maximum number of repairs")
    p.add_argument("--max-vertices", type=int, default=64, metavar="N", help="maximum number of tuples")
    p.add_argument("--seed", type=int, default=0, metavar="N", help="seed for sampled checks")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="prefrep",
        description="Repairs and preferred consistent query answers for databases violating FDs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    data = _data_flags()

    p = sub.add_parser("repairs", parents=[data], help="list all repairs")
    p.set_defaults(func=cmd_repairs)

    p = sub.add_parser("preferred", parents=[data], help="list l- or g-preferred repairs")
    p.add_argument("--mode", choices=["l", "g"], required=True)
    p.set_defaults(func=cmd_preferred)

    p = sub.add_parser("check", parents=[data], help="decide whether a set of tuples is a preferred repair")
    p.add_argument("--mode", choices=["l", "g"], required=True)
    p.add_argument("--repair", required=True, metavar="IDS",
                   help="tuple ids such as 'Emp#0 Mgr#2', or @FILE")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cqa", parents=[data], help="consistent answer to a closed query")
    p.add_argument("--mode", choices=MODES, default="all")
    p.add_argument("--query", required=True, help="query text, or @FILE")
    p.set_defaults(func=cmd_cqa)

    p = sub.add_parser("clean", parents=[data], help="apply a total priority and write the cleaned instance")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("info", parents=[data], help="conflicts and priority properties")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("dot", parents=[data], help="conflict graph in DOT format")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser(
        "postulates", parents=[data], help="check postulates P1-P4",
        description=(
            "Checks P1 (non-emptiness), P2 (empty priority gives all repairs), "
            "P3 (extensions only remove repairs) and P4 (total priorities give one repair). "
            "P3/P4 enumerate every acyclic extension when fewer than --exhaustive-below "
            "conflict edges are unoriented; otherwise --samples random orientations are "
            "drawn with --seed."
        ),
    )
    p.add_argument("--mode", choices=["l", "g", "both"], default="both")
    p.add_argument("--exhaustive-below", type=int, default=EXHAUSTIVE_BELOW, metavar="E")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, metavar="N")
    p.set_defaults(func=cmd_postulates)

    p = sub.add_parser("reduce", help="build a fixture directory from a (Q)DIMACS formula")
    p.add_argument("kind", choices=["3sat-l", "3sat-g", "qbf-g"])
    p.add_argument("formula", metavar="FILE", help="DIMACS (3sat-*) or QDIMACS (qbf-g) file")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--positive-query", action="store_true", help="3sat-l: use the positive query variant")
    p.add_argument("--negated-x-query", action="store_true", help="qbf-g: query !R(X) instead of R(Y)")
    p.add_argument("--encoding", choices=ENCODINGS, default="keyed",
                   help="3sat-g/qbf-g: literal encoding of the clause tuples")
    p.set_defaults(func=cmd_reduce)
    return parser


def _print_json(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, _print_json)
    except PrefRepError as exc:
        code = next((c for cls, c in EXIT_CODES if isinstance(exc, cls)), 1)
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err) + "\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
