#!/usr/bin/env python3
"""Run the reference-scale invariance scan for the smeared pairing.

Writes a short config for a concentric Gaussian pair, runs the scan,
and emits the CSV table.  The value must not depend on the arbitrary
scale inside the squared-logarithm kernel; the header records the
measured maximum pairwise deviation.
"""

import argparse
import pathlib
import sys
import tempfile

from negspec.cli import main as cli_main

CONFIG = """\
kind1 = gaussian
temporal_width1 = 0.5
spatial_width1 = 1.0
kind2 = gaussian
temporal_width2 = 0.5
spatial_width2 = 1.0
factors = 1,2,5
"""

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mc-samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=20260816)
    ap.add_argument("--output",
                    default=str(pathlib.Path(__file__).parent / "ell_scan.csv"))
    ns = ap.parse_args()
    with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as fh:
        fh.write(CONFIG)
        cfg_path = fh.name
    try:
        sys.exit(cli_main(["smeared", cfg_path,
                           "--mc-samples", str(ns.mc_samples),
                           "--seed", str(ns.seed),
                           "--output", ns.output]))
    finally:
        pathlib.Path(cfg_path).unlink()
