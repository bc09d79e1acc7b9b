"""crosslab command line: one subcommand per verification suite.

Exit status is 0 when every check passes, 1 when some check fails and 2 on
configuration or runtime errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import ConfigError, CrosslabError
from .reports import emit
from .suites import FORMATS, SUITES, build_config, read_config_file, run_suite

OUT_DIR_ENV = "CROSSLAB_OUT_DIR"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crosslab", description="Run crossing / modular verification suites.")
    sub = parser.add_subparsers(dest="suite", metavar="SUITE")
    sub.required = True
    for name in SUITES:
        p = sub.add_parser(name, help=f"run the {name} suite")
        p.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
        p.add_argument("--out", metavar="PATH",
                       help=f"report path (default: ${OUT_DIR_ENV}/<suite>.<format>, else ./<suite>.<format>)")
        p.add_argument("--format", choices=FORMATS, default=None)
        p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
        p.add_argument("--grid", action="append", default=[], metavar="NAME=SPEC",
                       help="lo:hi:n, lo:hi (integer range) or comma list")
        p.add_argument("--timing", action="store_true", help="include per-check runtimes (not byte-stable)")
        p.add_argument("--quiet", action="store_true")
    return parser


def _output_path(cfg) -> Path:
    if cfg.out:
        return Path(cfg.out)
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / f"{cfg.suite}.{cfg.format}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        entries = read_config_file(args.config) if args.config else {}
        if entries.get("suite", args.suite) != args.suite:
            raise ConfigError(f"config is for suite {entries['suite']!r}, not {args.suite!r}")
        cfg = build_config(args.suite, entries, args.tol, args.grid, args.out, args.format)
        report = run_suite(cfg)
        path = _output_path(cfg)
        emit(report, cfg.format, path, timing=args.timing)
    except (CrosslabError, OSError, ValueError) as exc:
        print(f"crosslab: error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        for line in report.summary_lines():
            print(line)
        print(f"report written to {path}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
