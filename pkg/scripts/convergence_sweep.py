#!/usr/bin/env python3
"""Grid sweep of the noiseless coder: worst scaled error per epoch over initial states."""

from __future__ import annotations

import argparse
from fractions import Fraction

from uvinfo.channel import load_channel
from uvinfo.coder import build_coder_estimator, simulate_noiseless
from uvinfo.estimation import make_plant
from uvinfo.intervals import to_fraction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--channel", default="data/channel_pentagon.json")
    ap.add_argument("--lam", default="2")
    ap.add_argument("--rho", default="0.95")
    ap.add_argument("--grid", type=int, default=100)
    ap.add_argument("--T", type=int, default=60)
    ap.add_argument("--policy", default="adversarial")
    args = ap.parse_args()

    coder = build_coder_estimator(make_plant([[to_fraction(args.lam)]]), load_channel(args.channel), args.rho, 4)
    print(f"# tau={coder.tau} codebook={len(coder.codebook)} cells={coder.cells} contraction={coder.contraction:.6f}")
    grid = [Fraction(-1) + Fraction(2 * j, args.grid - 1) for j in range(args.grid)]
    sup = None
    for x0 in grid:
        tr = simulate_noiseless(coder, x0, args.T, policy=args.policy)
        e = tr.exact_scaled_errors()[:: coder.tau]
        sup = e if sup is None else [max(a, b) for a, b in zip(sup, e)]
    print("epoch,t,sup_scaled_err,ratio")
    for k, s in enumerate(sup):
        ratio = float(s / sup[k - 1]) if k and sup[k - 1] else float("nan")
        print(f"{k},{k * coder.tau},{float(s):.10g},{ratio:.7f}")


if __name__ == "__main__":
    main()
