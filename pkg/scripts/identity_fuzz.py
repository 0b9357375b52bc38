#!/usr/bin/env python3
"""Fuzz all four identity checkers with fresh random exponents.

Every check is an exact equality (or exact zero) of rational functions;
a single counterexample would exit non-zero.

Usage:
    python scripts/identity_fuzz.py [--trials 20] [--seed 42]
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qcongruence.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    worst = 0
    for kind, m in (("andrews", 2), ("andrews", 3), ("watson", 2),
                    ("gasper-km", 2), ("multi-km", 3)):
        worst = max(worst, cli_main([
            "identity", kind, "--m", str(m),
            "--trials", str(args.trials), "--seed", str(args.seed),
        ]))
    return worst


if __name__ == "__main__":
    raise SystemExit(run())
