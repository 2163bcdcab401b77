"""Run the full set of experiment protocols from the bundled configs.

Usage: python scripts/run_paper_protocols.py [--only NAME] [--workers N]

Heavy protocols (sweep, lifetime) take minutes; pass --only to pick one.
"""
import argparse
import sys
from pathlib import Path

from ftl.cli import main as ftl_main

ROOT = Path(__file__).resolve().parents[1]

PROTOCOLS = {
    "dynamics_ideal": ("dynamics", "configs/dynamics_ideal.ini"),
    "dynamics_noisy": ("dynamics", "configs/dynamics_noisy.ini"),
    "eigenstate": ("eigenstate", "configs/eigenstate.ini"),
    "tee_quench": ("eigenstate", "configs/tee_quench.ini"),
    "sweep": ("sweep", "configs/sweep.ini"),
    "lifetime": ("lifetime", "configs/lifetime.ini"),
    "synth_zz": ("synth", "configs/synth_zz.ini"),
}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", choices=sorted(PROTOCOLS), default=None)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    names = [args.only] if args.only else list(PROTOCOLS)
    for name in names:
        sub, config = PROTOCOLS[name]
        print(f"== {name} ({sub}) ==")
        rc = ftl_main(
            [sub, "--config", str(ROOT / config), "--workers", str(args.workers)]
        )
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
