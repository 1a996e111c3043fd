"""Command-line front end.

Subcommands::

    loopspace-lab run <config.json>
    loopspace-lab check-all [--quick] [--output-dir DIR]
    loopspace-lab emit-plots <results.csv> --x <col> --y <col> [<col> ...]

Exit codes: 0 on success, 1 when an assertion fails, 2 on usage errors.
The LOOPSPACE_THREADS environment variable caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, LoopspaceError
from .experiments import (ResultTable, config_from_file, default_configs,
                          emit_plot_data, run_experiment)

EXIT_PASS = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loopspace-lab",
                     description="Fractional-order loop space laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a JSON config")
    run.add_argument("config", help="path to the experiment config JSON")

    check = sub.add_parser("check-all",
                           help="run every bundled experiment suite")
    check.add_argument("--quick", action="store_true",
                       help="smaller resolutions and trial counts")
    check.add_argument("--output-dir", default="loopspace-check",
                       help="root directory for per-experiment artifacts")

    plots = sub.add_parser("emit-plots",
                           help="write a gnuplot script for an existing CSV")
    plots.add_argument("results", help="path to a results.csv file")
    plots.add_argument("--x", required=True, dest="x_column",
                       help="x-axis column name")
    plots.add_argument("--y", required=True, dest="y_columns", nargs="+",
                       help="one or more y-axis column names")
    plots.add_argument("--out", default=None,
                       help="script path (default: alongside the CSV)")
    return parser


def _print_assertions(name: str, metadata: dict) -> None:
    for row in metadata["assertions"]:
        status = "PASS" if row["pass"] else "FAIL"
        print(f"[{status}] {name}: {row['name']} "
              f"(measured {row['measured']:.6g}, bound {row['bound']:.6g})")


def _cmd_run(args) -> int:
    config = config_from_file(args.config)
    table = run_experiment(config)
    _print_assertions(config.experiment, table.metadata)
    if not table.metadata["all_pass"]:
        failing = table.metadata["failing_assertions"]
        print(f"{config.experiment}: {len(failing)} assertion(s) failed "
              f"(indices {failing})", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_PASS


def _cmd_check_all(args) -> int:
    failures = 0
    for config in default_configs(args.output_dir, quick=args.quick):
        table = run_experiment(config)
        _print_assertions(config.experiment, table.metadata)
        if not table.metadata["all_pass"]:
            failures += 1
    if failures:
        print(f"{failures} experiment suite(s) failed", file=sys.stderr)
        return EXIT_ASSERTION
    print("all experiment suites passed")
    return EXIT_PASS


def _cmd_emit_plots(args) -> int:
    if not os.path.exists(args.results):
        print(f"loopspace-lab: no such file: {args.results}", file=sys.stderr)
        return EXIT_USAGE
    table = ResultTable.from_csv(args.results)
    out = args.out or os.path.join(os.path.dirname(args.results) or ".",
                                   "plot.gp")
    try:
        emit_plot_data(table, args.x_column, args.y_columns, out,
                       csv_name=os.path.basename(args.results))
    except LoopspaceError as exc:
        print(f"loopspace-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {out}")
    return EXIT_PASS


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check-all":
            return _cmd_check_all(args)
        return _cmd_emit_plots(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"loopspace-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LoopspaceError as exc:
        print(f"loopspace-lab: {exc}", file=sys.stderr)
        return EXIT_ASSERTION


if __name__ == "__main__":
    raise SystemExit(main())
