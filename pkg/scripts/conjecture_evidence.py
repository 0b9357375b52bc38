#!/usr/bin/env python3
"""Gather evidence reports for the three conjectured strengthenings.

Conjecture sweeps are informational: the script always exits 0 and the
per-case verdicts land in the JSON Lines reports.

Usage:
    python scripts/conjecture_evidence.py [--outdir reports] [--d-max 5]
        [--n-max 20] [--jobs 4]
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qcongruence.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="reports")
    parser.add_argument("--d-max", type=int, default=5)
    parser.add_argument("--n-max", type=int, default=20)
    parser.add_argument("--jobs", type=int, default=4)
    args = parser.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for kind in ("conj1", "conj2", "conj3"):
        cli_main([
            "sweep", "--conjecture", kind,
            "--d-max", str(args.d_max), "--n-max", str(args.n_max),
            "--r-min", str(-args.d_max), "--r-max", str(args.d_max),
            "--jobs", str(args.jobs),
            "--output", str(outdir / f"{kind}_evidence.jsonl"),
        ])
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
