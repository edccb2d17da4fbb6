#!/usr/bin/env python3
"""Show the three limit regimes side by side at a fixed borderline observation.

For each scheme, classify its regime from numeric probes, then sweep sigma and
print how the posterior null probability behaves: climbing to 1 under a fixed
prior mass, levelling at 1/(1+sqrt(2 pi)) under the bounded-odds scheme, and
collapsing to 0 under the divergent self-information scheme.

    python scripts/regime_demo.py --x 1.96
"""

import argparse
import math

from pointnull.cli import fmt_float
from pointnull.priors import classify_regime, paradox_sweep, scheme_from_string

SCHEMES = ("fixed:0.5", "robert", "kl")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--x", type=float, default=1.96, help="held observation")
    args = parser.parse_args()
    if not math.isfinite(args.x):
        parser.error("--x must be finite")

    grid = [10.0**k for k in range(-1, 5)]
    for name in SCHEMES:
        scheme = scheme_from_string(name)
        classified = classify_regime(scheme)
        regime = classified.regime
        tail = f" -> {fmt_float(regime.limit)}" if regime.limit is not None else ""
        print(f"{name}: case ({regime.case_label}), m(sigma) {regime.kind}{tail}")
        print(f"  {'sigma':>10} {'rho0':>12} {'m':>12} {'P(H0|x)':>12}")
        for row in paradox_sweep(scheme, args.x, grid):
            print(
                f"  {row.sigma:>10.1e} {row.rho0:>12.4e} {row.m:>12.4e}"
                f" {row.posterior_h0:>12.6f}"
            )
        print()


if __name__ == "__main__":
    main()
