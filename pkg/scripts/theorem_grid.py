#!/usr/bin/env python3
"""Run both theorem sweeps over the default grid and write JSON Lines
reports next to this script (or to --outdir).

Usage:
    python scripts/theorem_grid.py [--outdir reports] [--d-max 7]
        [--n-max 20] [--jobs 4] [--oracle]
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qcongruence.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="reports")
    parser.add_argument("--d-max", type=int, default=7)
    parser.add_argument("--n-max", type=int, default=20)
    parser.add_argument("--jobs", type=int, default=4)
    parser.add_argument("--oracle", action="store_true")
    args = parser.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for kind in ("thm1", "thm2"):
        cli_args = [
            "sweep", "--theorem", kind,
            "--d-max", str(args.d_max), "--n-max", str(args.n_max),
            "--r-min", str(-args.d_max), "--r-max", str(args.d_max),
            "--jobs", str(args.jobs),
            "--output", str(outdir / f"{kind}_grid.jsonl"),
        ]
        if args.oracle:
            cli_args.append("--oracle")
        worst = max(worst, cli_main(cli_args))
    return worst


if __name__ == "__main__":
    raise SystemExit(run())
