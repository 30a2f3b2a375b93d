#!/usr/bin/env python3
"""Disturbed coder at rho = 1: simulated sup error against the analytic envelope and its fixed point."""

from __future__ import annotations

import argparse
from fractions import Fraction

from uvinfo.channel import load_channel
from uvinfo.coder import build_coder_estimator, error_envelope, fixed_point_error_bound, simulate_disturbed
from uvinfo.estimation import make_plant
from uvinfo.intervals import to_fraction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--channel", default="data/channel_pentagon.json")
    ap.add_argument("--lam", default="2")
    ap.add_argument("--c", nargs="+", default=["0.001", "0.01", "0.05"])
    ap.add_argument("--grid", type=int, default=100)
    ap.add_argument("--T", type=int, default=200)
    ap.add_argument("--noise-policy", default="adversarial")
    args = ap.parse_args()

    grid = [Fraction(-1) + Fraction(2 * j, args.grid - 1) for j in range(args.grid)]
    print("c,fixed_point_bound,sup_all_t,sup_after_burn_in,envelope_max")
    for c_text in args.c:
        c = to_fraction(c_text)
        coder = build_coder_estimator(make_plant([[to_fraction(args.lam)]], c=c), load_channel(args.channel), 1, 4)
        bound = fixed_point_error_bound(coder, c)
        env = error_envelope(coder, c, args.T // coder.tau + 1)
        sup = [Fraction(0)] * (args.T + 1)
        for x0 in grid:
            tr = simulate_disturbed(coder, x0, args.T, c=c, noise_policy=args.noise_policy)
            sup = [max(a, b) for a, b in zip(sup, tr.exact_errors)]
        burn = args.T // 4
        print(f"{c_text},{float(bound):.6f},{float(max(sup)):.6f},{float(max(sup[burn:])):.6f},{float(max(env)):.6f}")


if __name__ == "__main__":
    main()
