"""Command line entry point ``csi``.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .campaign import ConfigError, export_scatter, load_config, monitor_cmd, run
from .stl import MonitorError, ParseError, TraceFormatError
from .stl.formula import format_number

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _names(text: str) -> frozenset:
    return frozenset(n.strip() for n in text.split(",") if n.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csi", description="Specification-guided falsification of a car-following AEB model.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a falsification campaign")
    p.add_argument("--config", required=True, help="campaign JSON file")
    p.add_argument("--out", required=True, help="results file (JSON lines)")

    p = sub.add_parser("monitor", help="evaluate an STL spec on a CSV trace")
    p.add_argument("--trace", required=True, help="CSV trace with a leading time column")
    p.add_argument("--spec", required=True, help="file containing the STL formula")
    p.add_argument("--inputs", default="", help="comma-separated input variables")
    p.add_argument("--outputs", default="", help="comma-separated output variables")
    p.add_argument("--t", type=int, default=0, help="sample index to evaluate at")

    p = sub.add_parser("scatter", help="export run records as scatter CSV")
    p.add_argument("--results", required=True, help="results file written by 'csi run'")
    p.add_argument("--out", required=True, help="CSV file to write")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    report = run(cfg, args.out)
    best = report.best()
    print(f"runs: {len(report.records)}  falsifying: {report.falsifying_count}")
    if best is not None:
        print(f"best robustness: {format_number(best.robustness)} at {best.x}")
    print(f"wall clock: {report.wall_clock_s:.2f} s", file=sys.stderr)
    return EXIT_OK


def _cmd_monitor(args) -> int:
    with open(args.spec) as fh:
        spec_text = fh.read()
    result = monitor_cmd(args.trace, spec_text, _names(args.inputs), _names(args.outputs), args.t)
    print(f"robustness: {format_number(result.robustness)}")
    print(f"mu: {format_number(result.mu)}")
    print(f"nu: {format_number(result.nu)}")
    print(f"verdict: {result.verdict.value}")
    return EXIT_OK


def _cmd_scatter(args) -> int:
    rows = export_scatter(args.results, args.out)
    print(f"wrote {rows} rows to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    handler = {"run": _cmd_run, "monitor": _cmd_monitor, "scatter": _cmd_scatter}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"csi: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, TraceFormatError, MonitorError, OSError, ValueError) as exc:
        print(f"csi: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
