"""Run the three named experiments and print where the outputs went.

    python3 scripts/reproduce_examples.py --out results [--full]
"""

import argparse
import logging
from pathlib import Path

from fracfp.cli import run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results")
    p.add_argument("--full", action="store_true", help="full spatial resolution (nx=20480)")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    for name in ("example1", "example2", "example3"):
        for path in run_experiment(name, Path(args.out) / name, args.full):
            print(path)


if __name__ == "__main__":
    main()
