"""Command-line experiment driver.

Subcommands: train, landscape, bp-variance, validate, summarize.
Exit status: 0 success, 1 config error, 2 execution error.
The NRQNN_SEED_OFFSET environment variable (integer, default 0) shifts every
seed in the config, for replication studies.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .experiment import (
    ConfigError,
    expand_cells,
    load_config,
    resolve_run_dir,
    run,
    run_validation,
    summarize,
)

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as config errors (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="noisyvqc",
                     description="Density-matrix experiments on variational "
                                 "circuit trainability under noise.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="run the training grid")
    p_train.add_argument("--config", required=True, help="JSON config file")
    p_train.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_train.add_argument("--out", default=None, help="run directory (default: runs/<timestamp>)")

    p_land = sub.add_parser("landscape", help="scan 2-D cost landscapes")
    p_land.add_argument("--config", required=True, help="JSON config file")
    p_land.add_argument("--axis1", type=int, default=0, help="first parameter index")
    p_land.add_argument("--axis2", type=int, default=1, help="second parameter index")
    p_land.add_argument("--resolution", type=int, default=50, help="grid resolution")
    p_land.add_argument("--range", dest="axis_range", type=float, nargs=2,
                        default=(-math.pi, math.pi), metavar=("LO", "HI"),
                        help="axis range in radians")
    p_land.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_land.add_argument("--out", default=None, help="run directory")

    p_bp = sub.add_parser("bp-variance", help="barren-plateau gradient variance probe")
    p_bp.add_argument("--config", required=True, help="JSON config file")
    p_bp.add_argument("--samples", type=int, default=200, help="random draws per cell")
    p_bp.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_bp.add_argument("--out", default=None, help="run directory")

    sub.add_parser("validate", help="CPTP completeness check for all channels")

    p_sum = sub.add_parser("summarize", help="aggregate a train run directory")
    p_sum.add_argument("--runs", required=True, help="run directory to summarize")
    return parser


def _seed_offset() -> int:
    raw = os.environ.get("NRQNN_SEED_OFFSET", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(
            f"NRQNN_SEED_OFFSET must be an integer, got {raw!r}"
        ) from None


def _run_grid_command(args, mode: str) -> int:
    config = load_config(args.config, expected_mode=mode)
    offset = _seed_offset()
    cells = expand_cells(config, offset)
    print(f"planned cells: {len(cells)}")
    run_dir = resolve_run_dir(args.out)
    kwargs = {}
    if mode == "landscape":
        kwargs = {"axis1": args.axis1, "axis2": args.axis2,
                  "resolution": args.resolution,
                  "axis_range": tuple(args.axis_range)}
    elif mode == "bp_variance":
        if args.samples < 2:
            raise ConfigError(f"--samples must be >= 2, got {args.samples}")
        kwargs = {"num_samples": args.samples}
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    records = run(config, out_dir=run_dir, jobs=args.jobs, seed_offset=offset,
                  verbose=True, **kwargs)
    failures = sum(1 for r in records if r.status != "success")
    print(f"run directory: {run_dir}")
    if failures:
        print(f"warning: {failures} of {len(records)} cells failed; see manifest.json")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "validate":
            ok, lines = run_validation()
            for line in lines:
                print(line)
            print("validation passed" if ok else "validation FAILED")
            return 0 if ok else 2
        if args.command == "summarize":
            _, table = summarize(args.runs)
            print(table)
            return 0
        mode = {"train": "train", "landscape": "landscape",
                "bp-variance": "bp_variance"}[args.command]
        return _run_grid_command(args, mode)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
