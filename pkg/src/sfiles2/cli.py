"""Command line frontend for batch conversion and checking.

Exit codes: 0 success, 1 check failures, 2 schema errors, 3 graph
invariant or rendering errors, 4 parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .encode import GENERALIZED, NUMBERED, encode
from .errors import EncodeError, GraphInvariantError, SchemaError
from .model import load_json, save_json
from .parse import parse, roundtrip_check
from .validate import REGISTRY, check_graph

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_SCHEMA = 2
EXIT_INVARIANT = 3
EXIT_PARSE = 4


def _print_diagnostics(text: str, diags, out=None) -> None:
    out = out if out is not None else sys.stderr
    for d in diags.entries:
        print(f"{d.level}[{d.code}]: {d.message}", file=out)
        print(f"  {text}", file=out)
        width = max(1, d.end - d.start)
        print("  " + " " * d.start + "^" * width, file=out)


def _add_mode_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument(
        "--generalized",
        dest="mode",
        action="store_const",
        const=GENERALIZED,
        help="emit generalized names such as (hex); the default",
    )
    g.add_argument(
        "--numbered",
        dest="mode",
        action="store_const",
        const=NUMBERED,
        help="emit numbered names such as (hex-1/2)",
    )
    p.set_defaults(mode=GENERALIZED)
    p.add_argument(
        "--legacy-converging",
        action="store_true",
        help="write converging branches in the v1 reversed-chain form",
    )


def _add_strict_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--strict", dest="strict", action="store_true", default=True)
    g.add_argument("--lenient", dest="strict", action="store_false")


def _read_graph(path: str, strict: bool):
    warnings: list[str] = []
    if path == "-":
        data = sys.stdin.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    graph = load_json(data, strict=strict, warnings=warnings)
    for w in warnings:
        print(f"warning: {path}: {w}", file=sys.stderr)
    return graph


def _string_inputs(items: list[str]) -> list[str]:
    out: list[str] = []
    for item in items:
        if item == "-":
            out.extend(line.rstrip("\n") for line in sys.stdin if line.strip())
        else:
            out.append(item)
    return out


def _cmd_encode(args) -> int:
    lines: list[str] = []
    for path in args.paths:
        try:
            graph = _read_graph(path, args.strict)
            s = encode(graph, args.mode, legacy_converging=args.legacy_converging)
        except SchemaError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        except (GraphInvariantError, EncodeError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return EXIT_INVARIANT
        except OSError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        lines.append(str(s))
    _write_output(args.output, lines)
    return EXIT_OK


def _cmd_decode(args) -> int:
    texts = _string_inputs(args.strings)
    docs: list[bytes] = []
    for text in texts:
        graph, diags = parse(text, strict=args.strict)
        if graph is None:
            _print_diagnostics(text, diags)
            return EXIT_PARSE
        if diags.entries:
            _print_diagnostics(text, diags)
        docs.append(save_json(graph))
    if args.output:
        with open(args.output, "wb") as fh:
            for doc in docs:
                fh.write(doc if len(docs) == 1 else _compact(doc))
    else:
        for doc in docs:
            payload = doc if len(docs) == 1 else _compact(doc)
            sys.stdout.write(payload.decode("utf-8"))
    return EXIT_OK


def _compact(doc: bytes) -> bytes:
    return (json.dumps(json.loads(doc), separators=(",", ":")) + "\n").encode("utf-8")


def _cmd_canon(args) -> int:
    texts = _string_inputs(args.strings)
    lines: list[str] = []
    for text in texts:
        graph, diags = parse(text, strict=args.strict)
        if graph is None:
            _print_diagnostics(text, diags)
            return EXIT_PARSE
        if diags.entries:
            _print_diagnostics(text, diags)
        try:
            lines.append(str(encode(graph, args.mode, legacy_converging=args.legacy_converging)))
        except EncodeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVARIANT
    _write_output(args.output, lines)
    return EXIT_OK


def _cmd_check(args) -> int:
    failures = 0
    for path in args.paths:
        try:
            graph = _read_graph(path, strict=False)
        except (SchemaError, GraphInvariantError, OSError) as exc:
            print(f"{path}: FAIL ({exc})")
            failures += 1
            continue
        notes = [
            f"{d.level}[{d.code}] {d.message}" for d in check_graph(graph, strict=False)
        ]
        report = roundtrip_check(graph)
        for problem in report.problems:
            notes.append(f"error[roundtrip] {problem}")
        bad = not report.ok
        status = "FAIL" if bad else "ok"
        suffix = f" ({len(notes)} notes)" if notes else ""
        print(f"{path}: {status}{suffix}")
        for note in notes:
            print(f"  {note}")
        failures += bad
    return EXIT_CHECK if failures else EXIT_OK


def _cmd_registry(args) -> int:
    rows = [
        {
            "category": op.category,
            "label": op.label,
            "term": op.term,
            "inlets": {"min": op.inlets.min, "max": op.inlets.max},
            "outlets": {"min": op.outlets.min, "max": op.outlets.max},
            "extension": op.extension,
        }
        for op in REGISTRY.values()
    ]
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        widths = (8, 24, 26)
        print(f"{'category':<{widths[0]}} {'label':<{widths[1]}} {'term':<{widths[2]}} in       out")
        for op in REGISTRY.values():
            print(
                f"{op.category:<{widths[0]}} {op.label:<{widths[1]}} {op.term:<{widths[2]}} "
                f"{op.inlets.describe():<8} {op.outlets.describe()}"
            )
    return EXIT_OK


def _write_output(path: str | None, lines: list[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")
    else:
        for line in lines:
            print(line)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfiles2",
        description="Convert between flowsheet graph JSON and SFILES 2.0 strings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="graph JSON files to SFILES strings")
    p.add_argument("paths", nargs="+", help="graph JSON files, or - for stdin")
    _add_mode_flags(p)
    _add_strict_flags(p)
    p.add_argument("-o", "--output", help="write the strings to this file")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="SFILES strings to graph JSON")
    p.add_argument("strings", nargs="+", help="SFILES strings, or - for stdin lines")
    _add_strict_flags(p)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("-o", "--output", help="write the JSON to this file")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("canon", help="rewrite SFILES strings in canonical form")
    p.add_argument("strings", nargs="+", help="SFILES strings, or - for stdin lines")
    _add_mode_flags(p)
    _add_strict_flags(p)
    p.add_argument("-o", "--output", help="write the strings to this file")
    p.set_defaults(func=_cmd_canon)

    p = sub.add_parser("check", help="validate graph files and their round trips")
    p.add_argument("paths", nargs="*", help="graph JSON files")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("registry", help="print the unit operation table")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=_cmd_registry)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
