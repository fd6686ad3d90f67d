"""Command line interface.

    liegauss analyze FILE [--tol R] [--seed N] [--lambda R] [--format text|json] [--task NAME ...]
    liegauss builtin NAME [--param k=v ...] [same flags] [--emit-document]

Exit codes: 0 all tasks ran, 2 parse/schema error, 3 precondition violation,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .catalog import BUILTINS, builtin
from .document import TASKS, emit_document, parse_document
from .errors import InputError
from .report import EXIT_INPUT, report_to_json, report_to_text, run_tasks


def _common(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, help="verdict tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, help="random seed (default 42)")
    p.add_argument("--lambda", dest="lam", type=float, help="witness scaling (default 1)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--task", action="append", choices=TASKS, dest="tasks",
                   help="task to run; repeatable (default: tasks listed in the document)")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liegauss",
        description="Harmonicity of the Gauss map for submanifolds of Lie groups with left-invariant metrics.")
    sub = parser.add_subparsers(dest="command", required=True)
    pa = sub.add_parser("analyze", help="run the tasks of a JSON analysis document")
    pa.add_argument("file", help="input document ('-' for stdin)")
    _common(pa)
    pb = sub.add_parser("builtin", help="run a catalog example")
    pb.add_argument("name", choices=sorted(BUILTINS))
    pb.add_argument("--param", action="append", default=[], metavar="K=V",
                    help="builtin parameter, e.g. a=2, n=4, or subspace='1,0,1;0,1,0'")
    pb.add_argument("--emit-document", action="store_true",
                    help="print the builtin as an analysis document and exit")
    _common(pb)
    return parser


def _params(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"--param expects K=V, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            if args.file == "-":
                text = sys.stdin.read()
            else:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            doc = parse_document(text)
        else:
            doc = builtin(args.name, _params(args.param))
            if args.emit_document:
                sys.stdout.write(emit_document(doc))
                return 0
    except (InputError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    report = run_tasks(doc, tol=args.tol, seed=args.seed, lam=args.lam, tasks=args.tasks)
    out = report_to_json(report) if args.format == "json" else report_to_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
