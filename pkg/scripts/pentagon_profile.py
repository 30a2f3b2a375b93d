#!/usr/bin/env python3
"""Capacity lower-bound profile for cycle channels, with search timings."""

from __future__ import annotations

import argparse
import time

from uvinfo.channel import c0_lower_profile, make_channel
from uvinfo.errors import SearchBudgetExceeded


def cycle_channel(n: int):
    return make_channel(range(n), range(n), {i: [i, (i + 1) % n] for i in range(n)})


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 7])
    ap.add_argument("--tmax", type=int, default=2)
    ap.add_argument("--time-budget", type=float, default=60.0)
    args = ap.parse_args()

    print("n,tau,alpha,rate_bits,seconds")
    for n in args.sizes:
        C = cycle_channel(n)
        t0 = time.perf_counter()

        def show(rec):
            print(f"{n},{rec.tau},{rec.alpha},{rec.rate_bits:.6f},{time.perf_counter() - t0:.2f}", flush=True)

        try:
            c0_lower_profile(C, args.tmax, args.time_budget, search_cap=1000, on_record=show)
        except SearchBudgetExceeded as exc:
            print(f"# n={n}: {exc}")


if __name__ == "__main__":
    main()
