#!/usr/bin/env python3
"""Print the order-of-limits report for the finite-box mode sum.

Shows the linear cutoff divergence of the equal-time sum next to the
convergent fixed-offset values and their extrapolated limit.
"""

import argparse
import sys

from negspec.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--box-size", type=float, default=None)
    ap.add_argument("--mode-index", type=int, default=None)
    ap.add_argument("--output", default="")
    ns = ap.parse_args()
    argv = ["modesum"]
    if ns.box_size is not None:
        argv += ["--box-size", str(ns.box_size)]
    if ns.mode_index is not None:
        argv += ["--mode-index", str(ns.mode_index)]
    if ns.output:
        argv += ["--output", ns.output]
    sys.exit(cli_main(argv))
