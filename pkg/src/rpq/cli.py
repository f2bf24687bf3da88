"""Command-line front end.

Exit codes: 0 success, 1 negative answer (member, walk-member), 2 usage or
input error, 3 guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .automaton import parse_automaton
from .coding import coding_expression, coding_expression_no_union, encode_word, no_union_encode
from .enumeration import OpCounter
from .errors import GuardExceeded, RPQError, UnboundedResultError
from .graph import format_id, format_walk, parse_database, parse_walk, serialize_database
from .membership import walk_membership, walk_membership_matching
from .product import build
from .regex import parse_regex, to_text
from .sat import build_reduction, parse_dimacs
from .semantics import Guards, Semantics, evaluate, resolve_query, tuple_membership, tuple_multiplicity

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _graph(args):
    return parse_database(_read(args.graph))


def _query(args):
    if (args.query is None) == (args.automaton is None):
        raise _UsageError("give exactly one of --query and --automaton")
    if args.query is not None:
        return parse_regex(args.query)
    return parse_automaton(_read(args.automaton))


def _endpoints(args, required: bool):
    if (args.from_ is None) != (args.to is None):
        raise _UsageError("--from and --to go together")
    if required and args.from_ is None:
        raise _UsageError("--from and --to are required")
    return None if args.from_ is None else (args.from_, args.to)


def _guards(args) -> Guards:
    return Guards(max_product_vertices=args.max_product_vertices, max_steps=args.max_steps)


def _walk_record(w, mult: int) -> dict:
    return {
        "walk": format_walk(w),
        "vertices": [format_id(v) for v in w.vertices],
        "edges": [format_id(e) for e in w.edges],
        "multiplicity": mult,
    }


def cmd_eval(args, out) -> int:
    d, q, mode = _graph(args), _query(args), Semantics.parse(args.sem)
    ops = OpCounter()
    results = evaluate(d, q, mode, _endpoints(args, False), max_length=args.max_length, guards=_guards(args), ops=ops)
    last = 0
    for w, mult in results:
        if args.trace_delay:
            out.write(f"# ops {ops.count - last}\n")
            last = ops.count
        if args.json:
            out.write(json.dumps(_walk_record(w, mult), ensure_ascii=False) + "\n")
        else:
            out.write(f"{mult}\t{format_walk(w)}\n")
        out.flush()
    return EXIT_OK


def cmd_member(args, out) -> int:
    d, q, mode = _graph(args), _query(args), Semantics.parse(args.sem)
    s, t = _endpoints(args, True)
    ok = tuple_membership(d, q, s, t, mode, guards=_guards(args))
    out.write(("true" if ok else "false") + "\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_count(args, out) -> int:
    d, q, mode = _graph(args), _query(args), Semantics.parse(args.sem)
    s, t = _endpoints(args, True)
    n = tuple_multiplicity(d, q, s, t, mode, max_length=args.max_length, guards=_guards(args))
    out.write(f"{n}\n")
    return EXIT_OK


def cmd_walk_member(args, out) -> int:
    d, q, mode = _graph(args), _query(args), Semantics.parse(args.sem)
    if (args.walk is None) == (args.walk_file is None):
        raise _UsageError("give exactly one of --walk and --walk-file")
    text = args.walk if args.walk is not None else _read(args.walk_file)
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 1:
        raise _UsageError("the walk must be given on a single line")
    w = parse_walk(lines[0], d)
    if args.matching:
        if mode is not Semantics.SIMPLE_RUN or args.query is None:
            raise _UsageError("--matching needs --sem simple-run and --query")
        ok = walk_membership_matching(d, q, w)
    else:
        ok = walk_membership(d, q, w, mode, max_steps=args.max_steps)
    out.write(("true" if ok else "false") + "\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_gen_sat(args, out) -> int:
    d, w = build_reduction(parse_dimacs(_read(args.cnf)))
    graph_text = serialize_database(d)
    walk_text = format_walk(w) + "\n"
    if args.graph_out:
        Path(args.graph_out).write_text(graph_text, encoding="utf-8")
    if args.walk_out:
        Path(args.walk_out).write_text(walk_text, encoding="utf-8")
    if not args.graph_out and not args.walk_out:
        out.write(graph_text)
        out.write("# walk\n# " + walk_text)
    return EXIT_OK


def cmd_encode(args, out) -> int:
    a = parse_automaton(_read(args.automaton))
    if args.no_union:
        if args.word is None:
            out.write(to_text(coding_expression_no_union(a)) + "\n")
        else:
            out.write(" ".join(no_union_encode(a, args.word.split())) + "\n")
        return EXIT_OK
    r, witness = coding_expression(a)
    if args.word is None:
        out.write(to_text(r) + "\n")
    else:
        out.write(" ".join(encode_word(witness, args.word.split())) + "\n")
    return EXIT_OK


def cmd_product_dump(args, out) -> int:
    d, q = _graph(args), _query(args)
    a, _ = resolve_query(q, Semantics.SIMPLE_RUN)
    out.write(build(d, a).dump())
    return EXIT_OK


def _add_common(p, endpoints=True, length=True):
    p.add_argument("--graph", required=True, help="graph file")
    p.add_argument("--query", help="regular expression")
    p.add_argument("--automaton", help="automaton file")
    p.add_argument("--sem", default="simple-run", help="semantics (default: simple-run)")
    if endpoints:
        p.add_argument("--from", dest="from_", help="source vertex")
        p.add_argument("--to", help="target vertex")
    if length:
        p.add_argument("--max-length", type=int, help="keep walks of at most this many edges")
    p.add_argument("--max-product-vertices", type=int, default=Guards.max_product_vertices,
                   help="guard on |V|*|Q| for exhaustive trail and simple-walk search")
    p.add_argument("--max-steps", type=int, default=Guards.max_steps, help="guard on search steps")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rpq", description="Regular path queries over edge-labelled graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="stream the answer walks with multiplicities")
    _add_common(p)
    p.add_argument("--json", action="store_true", help="one JSON object per line")
    p.add_argument("--trace-delay", action="store_true", help="print the operation count before each walk")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("member", help="is there an answer walk between two vertices")
    _add_common(p, length=False)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("count", help="total multiplicity between two vertices")
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("walk-member", help="is a given walk in the answer")
    _add_common(p, endpoints=False, length=False)
    p.add_argument("--walk", help="walk text: v0 -e0-> v1 ...")
    p.add_argument("--walk-file", help="file holding the walk on one line")
    p.add_argument("--matching", action="store_true", help="use the matching algorithm (no concatenation under a star)")
    p.set_defaults(func=cmd_walk_member)

    p = sub.add_parser("gen-sat", help="database and walk for a 3-CNF formula")
    p.add_argument("cnf", help="DIMACS file")
    p.add_argument("--graph-out", help="write the database here")
    p.add_argument("--walk-out", help="write the walk here")
    p.set_defaults(func=cmd_gen_sat)

    p = sub.add_parser("encode", help="coding expression of an automaton, or the code of a word")
    p.add_argument("--automaton", required=True, help="trim automaton file")
    p.add_argument("--word", help="space-separated letters; empty string for the empty word")
    p.add_argument("--no-union", action="store_true", help="use the variant without union under a star")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("product-dump", help="print the run database")
    p.add_argument("--graph", required=True)
    p.add_argument("--query")
    p.add_argument("--automaton")
    p.set_defaults(func=cmd_product_dump)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = make_parser().parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except UnboundedResultError:
        err.write("rpq: under walk semantics the answer may be infinite; pass --max-length\n")
        return EXIT_USAGE
    except GuardExceeded as exc:
        err.write(f"rpq: guard exceeded: {exc}\n")
        return EXIT_GUARD
    except RPQError as exc:
        err.write(f"rpq: {exc}\n")
        return EXIT_USAGE
    except BrokenPipeError:
        # reader closed early (e.g. piped into head)
        sys.stdout = None
        return EXIT_OK
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
