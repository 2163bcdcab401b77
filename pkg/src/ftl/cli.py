"""Command-line entry point.

    ftl <subcommand> --config <path> [--out <dir>] [--seed <u64>]
        [--workers <n>] [--no-noise]

Subcommands: dynamics, eigenstate, sweep, lifetime, synth, and spectrum
(which re-analyzes an existing summary table).  ``--config`` accepts either
an INI experiment file or a previously written ``manifest.json``.  The
``FTL_WORKERS`` environment variable is the fallback for ``--workers``.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import ExperimentConfig, load_config
from .runner import (
    run_dynamics,
    run_eigenstate,
    run_lifetime,
    run_spectrum,
    run_sweep,
    run_synth,
)

_RUNNERS = {
    "dynamics": run_dynamics,
    "eigenstate": run_eigenstate,
    "sweep": run_sweep,
    "lifetime": run_lifetime,
    "synth": run_synth,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftl", description="driven surface-code simulation experiments"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in (*_RUNNERS, "spectrum"):
        p = sub.add_parser(name)
        if name == "spectrum":
            p.add_argument("--table", required=True, help="existing summary.csv")
        else:
            p.add_argument("--config", required=True, help="INI config or manifest.json")
            p.add_argument("--seed", type=int, default=None, help="override master seed")
            p.add_argument("--no-noise", action="store_true", help="force noiseless run")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--workers", type=int, default=None)
    return parser


def _worker_count(args: argparse.Namespace) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get("FTL_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise SystemExit(f"bad FTL_WORKERS value {env!r}") from exc
    return 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    workers = _worker_count(args)

    if args.subcommand == "spectrum":
        out_dir = Path(args.out) if args.out else Path(args.table).parent
        paths = run_spectrum(Path(args.table), out_dir)
    else:
        try:
            cfg: ExperimentConfig = load_config(args.config)
        except (ValueError, OSError) as exc:
            print(f"ftl: config error: {exc}", file=sys.stderr)
            return 2
        if args.seed is not None:
            cfg.disorder.master_seed = args.seed
        if args.no_noise:
            cfg.noise.enabled = False
        out_dir = Path(args.out) if args.out else Path(cfg.output.directory)
        try:
            paths = _RUNNERS[args.subcommand](cfg, out_dir, workers)
        except ValueError as exc:
            print(f"ftl: {exc}", file=sys.stderr)
            return 1
    for key in sorted(paths):
        print(f"{key}: {paths[key]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
