#!/usr/bin/env python3
"""Run all four simulation designs back to back (several hours at full scale).

Artifacts land in results/<design>.{csv,json}. Pass --seed / --threads through
to every design.
"""

import sys

from run_experiment import run
from nullfreq.experiments import DESIGNS


def main() -> int:
    passthrough = sys.argv[1:]
    for design in DESIGNS:
        print(f"=== {design} ===", flush=True)
        code = run([design, *passthrough])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
