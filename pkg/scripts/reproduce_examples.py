#!/usr/bin/env python3
"""Reproduce the worked examples: two small ensembles, the pentagon profile, and the packing counts."""

from __future__ import annotations

import math
from pathlib import Path

from uvinfo.channel import c0_lower_profile, pentagon
from uvinfo.estimation import necessity_witness
from uvinfo.measures import klir_transmission, maximin_info, zero_info_uv
from uvinfo.uv import is_unrelated, load_ensemble

DATA = Path(__file__).resolve().parent.parent / "data"


def main() -> None:
    E = load_ensemble(DATA / "ensemble_iiib.json")
    print(f"shared-symbol ensemble: I*[Y;X] = {maximin_info(E, 'Y', 'X')}, "
          f"I0[Y;X] = {zero_info_uv(E, 'Y', 'X'):.5f} (log2 3/2 = {math.log2(1.5):.5f})")

    E = load_ensemble(DATA / "ensemble_iiid.json")
    print(f"staircase ensemble: unrelated = {is_unrelated(E, ['X', 'Y'])}, I* = {maximin_info(E, 'X', 'Y')}, "
          f"T = {klir_transmission(E, 'X', 'Y'):.5f}")

    for tau, alpha, rate in c0_lower_profile(pentagon(), 2).rows():
        print(f"pentagon tau={tau}: alpha={alpha}, rate={rate:.5f} bits/use")

    for eigs, eps, tau in [([2], "1/4", 4), ([2], "1/20", 1), ([2, 3], "1/10", 2)]:
        W = necessity_witness(eigs, 1, eps, tau)
        print(f"packing eigs={eigs} eps={eps} tau={tau}: k={list(W.k)}, count={W.count}, bits={W.bound_bits:.4f}")


if __name__ == "__main__":
    main()
