#!/usr/bin/env python3
"""Peak maximin information versus independence numbers on random small channels."""

from __future__ import annotations

import argparse
import random

from uvinfo.channel import confusability_graph, make_channel, peak_maximin
from uvinfo.graphs import max_independent_set, strong_power


def random_channel(rng: random.Random, max_in: int, max_out: int):
    nx, ny = rng.randint(1, max_in), rng.randint(1, max_out)
    T = {x: set(rng.sample(range(ny), rng.randint(1, ny))) for x in range(nx)}
    for y in range(ny):
        if not any(y in s for s in T.values()):
            T[rng.randrange(nx)].add(y)
    return make_channel(range(nx), range(ny), T)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    agree = 0
    for i in range(args.count):
        C = random_channel(rng, 4, 4)
        G = confusability_graph(C)
        row = []
        for tau in (1, 2):
            alpha = max_independent_set(strong_power(G, tau))[0]
            peak = peak_maximin(C, tau)[0]
            row.append((alpha, peak))
        same = all(a == p for a, p in row)
        agree += same
        print(f"channel {i}: |X|={len(C.inputs)} |Y|={len(C.outputs)} (alpha, peak) by tau: {row} {'ok' if same else 'MISMATCH'}")
    print(f"{agree}/{args.count} channels agree at tau = 1, 2")


if __name__ == "__main__":
    main()
