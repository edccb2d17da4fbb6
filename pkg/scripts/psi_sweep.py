#!/usr/bin/env python3
"""Sweep the rejection threshold psi and the induced Type I error over sigma.

Writes one CSV block per scheme (fixed:0.5, robert, kl) at a common Bayesian
threshold, annotating where each scheme's psi domain ends. Handy for eyeballing
how the calibrated error rate moves: flat toward 0 for a fixed mass, saturating
near 0.0441 for the bounded-odds scheme, racing to 1 for the divergent one.

    python scripts/psi_sweep.py --alpha-b 0.05 --out sweeps.csv
"""

import argparse
import math
import sys

from pointnull.calibration import positivity_bound, psi, type_i_error
from pointnull.cli import fmt_float
from pointnull.priors import scheme_from_string

SCHEMES = ("fixed:0.5", "robert", "kl")


def geometric_grid(lo, hi, n):
    step = (hi / lo) ** (1.0 / (n - 1))
    return [lo * step**k for k in range(n)]


def sweep(out, alpha_b, steps):
    for name in SCHEMES:
        scheme = scheme_from_string(name)
        bound = positivity_bound(alpha_b, scheme)
        hi = bound * (1.0 - 1e-9) if bound else 1e3
        out.write(f"# scheme={name} alpha_b={fmt_float(alpha_b)}\n")
        out.write(f"# domain_end={'none' if bound is None else fmt_float(bound)}\n")
        out.write("sigma,psi,type_i_error\n")
        for sigma in geometric_grid(1e-2, hi, steps):
            p = psi(sigma, alpha_b, scheme)
            out.write(
                f"{fmt_float(sigma)},{fmt_float(p)},"
                f"{fmt_float(type_i_error(sigma, alpha_b, scheme))}\n"
            )
        out.write("\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--alpha-b", type=float, default=0.05)
    parser.add_argument("--steps", type=int, default=200)
    parser.add_argument("--out", default=None, help="CSV path (default: stdout)")
    args = parser.parse_args()
    if not 0.0 < args.alpha_b < 1.0 or not math.isfinite(args.alpha_b):
        parser.error("--alpha-b must lie strictly between 0 and 1")
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    if args.out:
        with open(args.out, "w") as handle:
            sweep(handle, args.alpha_b, args.steps)
    else:
        sweep(sys.stdout, args.alpha_b, args.steps)


if __name__ == "__main__":
    main()
