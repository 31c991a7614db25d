#!/usr/bin/env python3
"""Regenerate the temperature-sweep table (vacuum, thermal, total vs T).

Writes fig1.csv next to this script unless --output is given.  Thin
wrapper over the CLI so the artifact format stays byte-stable.
"""

import argparse
import pathlib
import sys

from negspec.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--output",
                    default=str(pathlib.Path(__file__).parent / "fig1.csv"))
    ns = ap.parse_args()
    sys.exit(cli_main(["fig1", "--k", str(ns.k), "--points", str(ns.points),
                       "--output", ns.output]))
