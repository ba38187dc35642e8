#!/usr/bin/env python3
"""Run one checked-in simulation design and write its CSV/JSON artifacts.

Usage:
    python scripts/run_experiment.py gamma_sweep [--out results] [--seed N]
                                                 [--threads K]

Designs map to the config files in configs/; any flag accepted by
`nullfreq simulate` can be appended after the design name.
"""

import argparse
import sys
from pathlib import Path

from nullfreq.cli import main
from nullfreq.experiments import DESIGNS

ROOT = Path(__file__).resolve().parent.parent


def run(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("design", choices=DESIGNS)
    parser.add_argument("--out", default=str(ROOT / "results"))
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)

    cmd = [
        "simulate",
        "--config", str(ROOT / "configs" / f"{args.design}.cfg"),
        "--out", args.out,
    ]
    if args.seed is not None:
        cmd += ["--seed", str(args.seed)]
    if args.threads is not None:
        cmd += ["--threads", str(args.threads)]
    return main(cmd)


if __name__ == "__main__":
    sys.exit(run())
