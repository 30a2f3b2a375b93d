"""Acceptance criteria 1-9, each at its stated tolerance and time limit.

Every test records a one-line PASS/FAIL verdict; the lines are printed in the
terminal summary of a pytest run, or directly when this file is executed as
a script (``python3 tests/test_acceptance.py``).
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import generators as gen  # noqa: E402
from oracles import (  # noqa: E402
    channel_peak_count,
    mis_bruteforce,
    overlap_connected_pairs,
    packing_count,
    set_partitions,
    strong_adjacent,
    taxicab_blocks,
)
from uvinfo.channel import (  # noqa: E402
    block_ensemble,
    c0_lower_profile,
    complete_confusion,
    confusability_graph,
    erasure,
    make_channel,
    noiseless,
    peak_maximin,
    pentagon,
    reverse_map,
)
from uvinfo.coder import build_coder_estimator, fixed_point_error_bound, simulate_disturbed, simulate_noiseless  # noqa: E402
from uvinfo.estimation import make_plant, necessity_witness  # noqa: E402
from uvinfo.graphs import max_independent_set, strong_power  # noqa: E402
from uvinfo.measures import maximin_count, maximin_info, maximin_partitions, overlap_partition, zero_info_uv  # noqa: E402
from uvinfo.uv import (  # noqa: E402
    conditional_family,
    conditional_range,
    is_markov_chain,
    is_unrelated,
    joint_range,
    load_ensemble,
    marginal_range,
)

DATA = Path(__file__).resolve().parent.parent / "data"
RESULTS: dict = {}


def record(n: int, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    ok = ok and elapsed < limit
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.2f}s / limit {limit:g}s]"
    if __name__ == "__main__":
        print(RESULTS[n])


# ----------------------------------------------------------------- 1 and 2


def test_criterion_1_shared_symbol_example():
    t0 = time.perf_counter()
    E = load_ensemble(DATA / "ensemble_iiib.json")
    count = maximin_count(E, "Y", "X")
    fam = conditional_family(E, "Y", "X")
    ratio = Fraction(len(marginal_range(E, "Y")), max(len(s) for s in fam.sets))
    i0 = zero_info_uv(E, "Y", "X")
    elapsed = time.perf_counter() - t0
    ok = count == 1 and maximin_info(E, "Y", "X") == 0.0 and ratio == Fraction(3, 2) and abs(i0 - math.log2(1.5)) <= 1e-12
    record(1, ok, f"I* blocks={count}, I0 ratio={ratio}, I0={i0!r}", elapsed, 1)
    assert ok and elapsed < 1


def test_criterion_2_related_but_zero_maximin():
    t0 = time.perf_counter()
    E = load_ensemble(DATA / "ensemble_iiid.json")
    related = not is_unrelated(E, ["X", "Y"])
    bits = maximin_info(E, "X", "Y")
    elapsed = time.perf_counter() - t0
    ok = joint_range(E, ["X", "Y"]) == {(0, 0), (0, 1), (1, 1)} and related and bits == 0.0
    record(2, ok, f"related={related}, I*={bits}", elapsed, 1)
    assert ok and elapsed < 1


# ----------------------------------------------------------------------- 3


def test_criterion_3_pentagon_profile():
    t0 = time.perf_counter()
    C = pentagon()
    G = confusability_graph(C)
    prof = c0_lower_profile(C, 2)
    alphas = [r.alpha for r in prof.records]
    rates = [r.rate_bits for r in prof.records]
    # tau=1: every subset of the five inputs
    brute1 = max(
        bin(m).count("1")
        for m in range(1, 32)
        if all(not (m >> u & 1 and m >> v & 1 and G.adjacent(u, v)) for u in range(5) for v in range(5))
    )
    P = strong_power(G, 2)
    brute2 = mis_bruteforce(P.vertices, lambda u, v: strong_adjacent(G.adjacent, u, v))[0]
    bb2 = max_independent_set(P)[0]
    elapsed = time.perf_counter() - t0
    ok = (
        alphas == [2, 5]
        and brute1 == 2
        and brute2 == bb2 == 5
        and rates[0] == 1.0
        and abs(rates[1] - math.log2(5) / 2) <= 1e-12
    )
    record(3, ok, f"alpha={alphas}, rates={rates}, exhaustive=({brute1},{brute2})", elapsed, 10)
    assert ok and elapsed < 10


# ----------------------------------------------------------------------- 4


def curated_channels() -> list:
    """Small channels (at most 4 inputs and outputs) covering the structural cases."""
    out = [
        ("noiseless1", noiseless(1)),
        ("noiseless2", noiseless(2)),
        ("noiseless3", noiseless(3)),
        ("noiseless4", noiseless(4)),
        ("confusion2", complete_confusion(2)),
        ("confusion3", complete_confusion(3)),
        ("confusion4", complete_confusion(4)),
        ("erasure", erasure()),
        ("erasure3", make_channel([0, 1, 2], [0, 1, 2, "e"], {0: [0, "e"], 1: [1, "e"], 2: [2, "e"]})),
        ("z", make_channel([0, 1], [0, 1], {0: [0], 1: [0, 1]})),
        ("pent-path3", make_channel(range(3), range(4), {i: [i, i + 1] for i in range(3)})),
        ("pent-path4", make_channel(range(4), range(4), {0: [0, 1], 1: [1, 2], 2: [2, 3], 3: [3]})),
        ("pent-cycle4", make_channel(range(4), range(4), {i: [i, (i + 1) % 4] for i in range(4)})),
        ("pent-cycle3", make_channel(range(3), range(3), {i: [i, (i + 1) % 3] for i in range(3)})),
        ("star", make_channel(range(4), range(4), {0: [0, 1, 2, 3], 1: [1], 2: [2], 3: [3]})),
        ("two-pairs", make_channel(range(4), range(2), {0: [0], 1: [0], 2: [1], 3: [1]})),
        ("paw", make_channel(range(4), range(4), {0: [0, 1], 1: [1, 2], 2: [0, 2], 3: [3, 2]})),
        ("ternary-skip", make_channel(range(3), range(3), {0: [0, 1], 1: [1], 2: [2]})),
        ("wide-out", make_channel(range(2), range(4), {0: [0, 1], 1: [2, 3]})),
        ("shared-tail", make_channel(range(4), range(3), {0: [0], 1: [0, 1], 2: [1, 2], 3: [2]})),
        ("diamond", make_channel(range(4), range(4), {0: [0, 1], 1: [1, 2], 2: [2, 3], 3: [3, 0, 2]})),
    ]
    rng = random.Random(20240501)
    for i in range(10):
        out.append((f"random{i}", gen.channel(rng, max_in=4, max_out=4)))
    return out


def test_criterion_4_capacity_equals_peak_maximin():
    t0 = time.perf_counter()
    channels = curated_channels()
    mismatches = []
    cross_checked = 0
    for name, C in channels:
        assert len(C.inputs) <= 4 and len(C.outputs) <= 4
        G = confusability_graph(C)
        for tau in (1, 2):
            alpha = max_independent_set(strong_power(G, tau))[0]
            peak, best_range = peak_maximin(C, tau)
            if peak != alpha or maximin_count(block_ensemble(C, best_range), "X", "Y") != peak:
                mismatches.append((name, tau, peak, alpha))
            if len(C.inputs) ** tau <= 9:
                cross_checked += 1
                if channel_peak_count(C.inputs, C.transition, tau) != alpha:
                    mismatches.append((name, tau, "oracle"))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and len(channels) >= 20
    record(
        4, ok, f"{len(channels)} channels x tau in (1,2), {cross_checked} oracle cross-checks, mismatches={mismatches}",
        elapsed, 300,
    )
    assert ok and elapsed < 300


# ----------------------------------------------------------------------- 5


def test_criterion_5_property_suites():
    t0 = time.perf_counter()
    rng = random.Random(5)
    violations: dict = {}

    def bad(key):
        violations[key] = violations.get(key, 0) + 1

    for _ in range(1000):
        E = gen.ensemble(rng)
        nxy, nyx = maximin_count(E, "X", "Y"), maximin_count(E, "Y", "X")
        if nxy != nyx:
            bad("symmetry")
        if nxy > min(len(marginal_range(E, "X")), len(marginal_range(E, "Y"))):
            bad("hartley bound")
        if nxy > maximin_count(E, "X", ["Y", "Z"]):
            bad("more data")
        overlap, taxicab = maximin_partitions(E, "X", "Y")
        if set(taxicab.blocks) != taxicab_blocks(joint_range(E, ["X", "Y"])) or [
            frozenset(p[0] for p in b) for b in taxicab.blocks
        ] != list(overlap.blocks):
            bad("projection")

        M = gen.markov_chain(rng)
        if not is_markov_chain(M, "X", "Y", "Z") or maximin_count(M, "X", "Z") > maximin_count(M, "X", "Y"):
            bad("data processing")

        C = gen.channel(rng)
        tau = rng.randint(1, 2)
        S = gen.input_range(rng, C, tau)
        B = block_ensemble(C, S)
        R = reverse_map(C)
        for y in marginal_range(B, "Y"):
            expect = {x for x in S if all(xi in R[yi] for xi, yi in zip(x, y))}
            if conditional_range(B, "X", {"Y": y}) != expect:
                bad("reverse map")

        D = gen.split_ensemble(rng)
        if not is_unrelated(D, ["Y1", "Y2"], given="X"):
            bad("split generator")
        for y1, y2 in joint_range(D, ["Y1", "Y2"]):
            if conditional_range(D, "X", {"Y1": y1, "Y2": y2}) != (
                conditional_range(D, "X", {"Y1": y1}) & conditional_range(D, "X", {"Y2": y2})
            ):
                bad("split")
    elapsed = time.perf_counter() - t0
    ok = not violations
    record(5, ok, f"1000 ensembles, violations={violations}", elapsed, 120)
    assert ok and elapsed < 120


# ----------------------------------------------------------------------- 6


def test_criterion_6_overlap_partition_is_maximal():
    t0 = time.perf_counter()
    rng = random.Random(6)
    failures = 0
    largest_checked = 0
    n_partitions = n_isolated = 0
    for _ in range(500):
        F = gen.family(rng)
        pts, conn = overlap_connected_pairs(F)
        star = set(overlap_partition(F).blocks)
        for part in set_partitions(pts):
            n_partitions += 1
            isolated = all(
                not conn[a, b] for i, A in enumerate(part) for B in part[i + 1:] for a in A for b in B
            )
            if not isolated:
                continue
            n_isolated += 1
            largest_checked = max(largest_checked, len(pts))
            if len(part) > len(star):
                failures += 1
            elif len(part) == len(star) and {frozenset(b) for b in part} != star:
                failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0
    record(6, ok, f"500 families (ground up to {largest_checked} points), {n_partitions} partitions enumerated, "
        f"{n_isolated} overlap-isolated, failures={failures}", elapsed, 120)
    assert ok and elapsed < 120


# ----------------------------------------------------------------------- 7

RHO = Fraction(19, 20)
GRID = [Fraction(-1) + Fraction(2 * j, 99) for j in range(100)]


def test_criterion_7_estimation_convergence():
    t0 = time.perf_counter()
    coder = build_coder_estimator(make_plant([[2]]), pentagon(), RHO, 4)
    sup = None
    for x0 in GRID:
        tr = simulate_noiseless(coder, x0, 60, policy="adversarial")
        e = [tr.exact_scaled_errors()[t] for t in range(0, 61, coder.tau)]
        sup = e if sup is None else [max(a, b) for a, b in zip(sup, e)]
    limit = Fraction(4432, 5000) + Fraction(1, 100)
    factors = [b / a for a, b in zip(sup[1:], sup[2:]) if a > 0]
    worst = max(factors)
    final_ratio = sup[-1] / sup[0]
    elapsed = time.perf_counter() - t0
    factor_ok = worst <= limit
    final_ok = final_ratio < Fraction(1, 100)
    ok = factor_ok and final_ok
    record(
        7, ok,
        f"per-epoch factor max={float(worst):.7f} (<= {float(limit)}: {factor_ok}); "
        f"final/initial={float(final_ratio):.6f} (< 0.01: {final_ok})",
        elapsed, 30,
    )
    assert factor_ok, f"per-epoch factor {float(worst)} exceeds {float(limit)}"
    assert final_ok, f"final/initial scaled error {float(final_ratio):.6f} is not below 0.01"
    assert elapsed < 30


# ----------------------------------------------------------------------- 8


def test_criterion_8_disturbed_boundedness():
    t0 = time.perf_counter()
    c = Fraction(1, 100)
    coder = build_coder_estimator(make_plant([[2]], c=c), pentagon(), 1, 4)
    bound = fixed_point_error_bound(coder, c)
    sup_by_t = [Fraction(0)] * 201
    for x0 in GRID:
        tr = simulate_disturbed(coder, x0, 200, c=c, noise_policy="adversarial", policy="adversarial")
        sup_by_t = [max(a, b) for a, b in zip(sup_by_t, tr.exact_errors)]
    sup_all = max(sup_by_t)
    limit = bound * Fraction(105, 100)
    first_ok = next(t for t in range(201) if all(e <= limit for e in sup_by_t[t:]))
    elapsed = time.perf_counter() - t0
    ok = sup_all <= limit
    record(
        8, ok,
        f"sup_t<=200 |E|={float(sup_all):.6f} at t={sup_by_t.index(sup_all)}, bound x1.05={float(limit):.6f}; "
        f"within bound for all t>={first_ok} (sup there {float(max(sup_by_t[first_ok:])):.6f})",
        elapsed, 60,
    )
    assert ok, f"sup error {float(sup_all)} exceeds {float(limit)}"
    assert elapsed < 60


# ----------------------------------------------------------------------- 9


def test_criterion_9_witness_packing():
    t0 = time.perf_counter()
    cases = [([2], "1/4", 4, 5), ([2], "1/20", 1, 1), ([2, 3], "1/10", 2, 21)]
    got = []
    ok = True
    for eigs, eps, tau, count in cases:
        W = necessity_witness(eigs, 1, eps, tau)
        ks, total = packing_count(eigs, 1, Fraction(eps), tau)
        got.append(W.count)
        ok &= W.count == total == count and list(W.k) == ks and W.bound_bits == math.log2(count)
    elapsed = time.perf_counter() - t0
    record(9, ok, f"counts={got} (expected [5, 1, 21]), bound_bits[0]={math.log2(5):.4f}", elapsed, 1)
    assert ok and elapsed < 1


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
