"""Stationary memoryless uncertain channels and zero-error coding.

A channel is a set-valued map ``T: X -> 2^Y``. Two input blocks can be
confused iff, symbol by symbol, their output sets intersect; valid zero-error
codebooks of block length ``tau`` are therefore exactly the independent sets
of the ``tau``-th strong power of the single-letter confusability graph.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InputError, InvariantError
from .graphs import (
    DEFAULT_SEARCH_CAP,
    DEFAULT_VERTEX_CAP,
    Graph,
    max_independent_set,
    strong_power,
)
from .measures import log2_exact, maximin_count
from .uv import Ensemble, build_ensemble, encode_value, normalize_value, sorted_values, value_key, value_label


@dataclass(frozen=True)
class Channel:
    inputs: tuple
    outputs: tuple
    transition: Mapping

    def __call__(self, x) -> frozenset:
        return self.transition[x]


def make_channel(inputs: Iterable, outputs: Iterable, transition: Mapping) -> Channel:
    xs = tuple(sorted_values({normalize_value(x) for x in inputs}))
    ys = tuple(sorted_values({normalize_value(y) for y in outputs}))
    T = {normalize_value(k): frozenset(normalize_value(y) for y in v) for k, v in transition.items()}
    for x in xs:
        if x not in T:
            raise InputError(f"no transition row for input {x!r}")
        if not T[x]:
            raise InputError(f"input {x!r} has an empty output set")
        stray = T[x] - set(ys)
        if stray:
            raise InputError(f"input {x!r} maps to undeclared outputs {sorted_values(stray)}")
    extra = set(T) - set(xs)
    if extra:
        raise InputError(f"transition rows for undeclared inputs {sorted_values(extra)}")
    reached = frozenset().union(*T.values())
    unreachable = set(ys) - reached
    if unreachable:
        raise InputError(f"outputs {sorted_values(unreachable)} are not reachable from any input")
    return Channel(xs, ys, {x: T[x] for x in xs})


def adjoint(mapping: Mapping) -> dict:
    """Flip a set-valued map: ``x in result[y]`` iff ``y in mapping[x]``."""
    out: dict = {}
    for x, ys in mapping.items():
        for y in ys:
            out.setdefault(y, set()).add(x)
    return {y: frozenset(out[y]) for y in sorted_values(out)}


def reverse_map(C: Channel) -> dict:
    """``R(y)``: the inputs that can produce output ``y``."""
    return adjoint(C.transition)


def block_conditional_range(C: Channel, input_range: Iterable, y_seq: Sequence) -> frozenset:
    """Input blocks consistent with the observed output block: the prior range cut by the product of ``R(y_i)``."""
    R = reverse_map(C)
    y_seq = tuple(normalize_value(y) for y in y_seq)
    out = set()
    for x_seq in input_range:
        if len(x_seq) != len(y_seq):
            raise InputError(f"input block {x_seq!r} and output block {y_seq!r} differ in length")
        if all(x in R.get(y, ()) for x, y in zip(x_seq, y_seq)):
            out.add(tuple(x_seq))
    return frozenset(out)


def block_ensemble(C: Channel, input_range: Iterable) -> Ensemble:
    """Ensemble with one sample per (input block, admissible output block) pair, columns ``X`` and ``Y``."""
    rows = []
    for x_seq in sorted_values(set(map(tuple, input_range))):
        for y_seq in product(*(sorted_values(C(x)) for x in x_seq)):
            rows.append({"X": x_seq, "Y": tuple(y_seq)})
    return build_ensemble(rows)


# -------------------------------------------------------------- capacity


def confusability_graph(C: Channel) -> Graph:
    """Inputs are adjacent iff their output sets intersect."""
    edges = [
        (x, x2)
        for i, x in enumerate(C.inputs)
        for x2 in C.inputs[i + 1:]
        if C(x) & C(x2)
    ]
    return Graph.from_edges(C.inputs, edges)


def known_capacity(C: Channel) -> float | None:
    """Exact zero-error capacity in the two trivial cases, else ``None``.

    Complete confusability is preserved by strong powers (capacity 0); an
    edgeless graph stays edgeless (capacity log|X|).
    """
    G = confusability_graph(C)
    n = len(G.vertices)
    if len(G.edges) == n * (n - 1) // 2:
        return 0.0
    if not G.edges:
        return log2_exact(n)
    return None


@dataclass(frozen=True)
class ProfileRecord:
    tau: int
    alpha: int
    witness: tuple = field(compare=False, repr=False)

    @property
    def rate_bits(self) -> float:
        return log2_exact(self.alpha) / self.tau


@dataclass(frozen=True)
class CapacityProfile:
    """Certified lower bounds on the zero-error capacity, one per block length."""

    records: tuple

    @property
    def best_rate(self) -> float:
        return max(r.rate_bits for r in self.records)

    @property
    def best(self) -> ProfileRecord:
        # exact comparison of alpha^(1/tau): alpha1^tau2 vs alpha2^tau1
        best = self.records[0]
        for r in self.records[1:]:
            if r.alpha ** best.tau > best.alpha ** r.tau:
                best = r
        return best

    def is_superadditive(self) -> bool:
        """alpha(m+n) >= alpha(m) * alpha(n) wherever all three block lengths are present."""
        by_tau = {r.tau: r.alpha for r in self.records}
        return all(
            by_tau[m + n] >= by_tau[m] * by_tau[n]
            for m in by_tau
            for n in by_tau
            if m + n in by_tau
        )

    def rows(self) -> list:
        return [(r.tau, r.alpha, r.rate_bits) for r in self.records]


def c0_lower_profile(
    C: Channel,
    t_max: int,
    time_budget: float | None = None,
    search_cap: int = DEFAULT_SEARCH_CAP,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    on_record: Callable | None = None,
) -> CapacityProfile:
    """Independence numbers of the confusability graph's strong powers for ``tau = 1..t_max``."""
    if t_max < 1:
        raise InputError("t_max must be >= 1")
    G = confusability_graph(C)
    records = []
    for tau in range(1, t_max + 1):
        alpha, witness = max_independent_set(strong_power(G, tau, vertex_cap), time_budget, search_cap)
        rec = ProfileRecord(tau, alpha, witness)
        records.append(rec)
        if on_record is not None:
            on_record(rec)
    return CapacityProfile(tuple(records))


def codebook_witness(C: Channel, tau: int, time_budget: float | None = None) -> tuple:
    """Maximum zero-error codebook and the maximin information it carries.

    Feeds the codebook through the block channel as an input range, computes
    the maximin information between input and output blocks, and checks it
    equals ``log2 |F|``. Returns ``(codebook, bits)``.
    """
    alpha, F = max_independent_set(strong_power(confusability_graph(C), tau), time_budget)
    count = maximin_count(block_ensemble(C, F), "X", "Y")
    if count != alpha:
        raise InvariantError(f"codebook of size {alpha} yields {count} overlap blocks, not singletons")
    return F, log2_exact(count)


def _reverse_block_masks(C: Channel, blocks: Sequence, tau: int) -> list:
    """Bitmask over ``blocks`` of each nonempty reverse block set ``R(y_0) x ... x R(y_tau-1)``."""
    R = reverse_map(C)
    masks = set()
    for y_seq in product(C.outputs, repeat=tau):
        m = 0
        for i, x_seq in enumerate(blocks):
            if all(x in R[y] for x, y in zip(x_seq, y_seq)):
                m |= 1 << i
        if m:
            masks.add(m)
    return sorted(masks)


def _overlap_count(S: int, rmasks: list) -> int:
    comps: list = []
    for r in rmasks:
        m = S & r
        if not m:
            continue
        keep = []
        for c in comps:
            if c & m:
                m |= c
            else:
                keep.append(c)
        keep.append(m)
        comps = keep
    return len(comps)


def peak_maximin(C: Channel, tau: int) -> tuple:
    """Exhaustive max over every nonempty input range in ``X^tau`` of the overlap-block count.

    Returns ``(count, best_range)``; ``log2(count)`` is the best maximin
    information any input achieves at this block length. Exponential in
    ``|X|^tau``; meant for alphabets of a handful of symbols.
    """
    blocks = list(product(C.inputs, repeat=tau))
    if len(blocks) > 20:
        raise InputError(f"{len(blocks)} input blocks is too many for exhaustive range search")
    rmasks = _reverse_block_masks(C, blocks, tau)
    best, best_S = 0, 0
    for S in range(1, 1 << len(blocks)):
        k = _overlap_count(S, rmasks)
        if k > best:
            best, best_S = k, S
    return best, tuple(b for i, b in enumerate(blocks) if best_S >> i & 1)


def range_maximin_count(C: Channel, input_range: Iterable, tau: int) -> int:
    """Overlap-block count for one input range, by the same bitmask route as :func:`peak_maximin`."""
    blocks = list(product(C.inputs, repeat=tau))
    index = {b: i for i, b in enumerate(blocks)}
    S = 0
    for b in input_range:
        S |= 1 << index[tuple(b)]
    return _overlap_count(S, _reverse_block_masks(C, blocks, tau))


# ------------------------------------------------------------ transmission

POLICIES = ("first", "adversarial", "uniform")


def max_output(t: int, x, outputs: frozenset):
    """Default adversary: always emit the largest admissible output."""
    return max(outputs, key=value_key)


def transmit(
    C: Channel,
    input_seq: Sequence,
    policy: str = "first",
    seed: int = 0,
    adversary: Callable | None = None,
) -> tuple:
    """Push a sequence through the channel; every output is drawn from ``T(x(t))``.

    ``first`` takes the smallest admissible output, ``adversarial`` asks
    ``adversary(t, x, T(x))`` (default: largest output), ``uniform`` draws
    from a ``random.Random(seed)`` stream.
    """
    if policy not in POLICIES:
        raise InputError(f"unknown channel policy {policy!r}; choose from {POLICIES}")
    rng = random.Random(seed)
    pick = adversary or max_output
    out = []
    for t, x in enumerate(input_seq):
        x = normalize_value(x)
        if x not in C.transition:
            raise InputError(f"input {x!r} is outside the channel alphabet")
        ys = C(x)
        if policy == "first":
            y = min(ys, key=value_key)
        elif policy == "adversarial":
            y = pick(t, x, ys)
            if y not in ys:
                raise InputError(f"adversary returned {y!r}, not in T({x!r})")
        else:
            y = rng.choice(sorted_values(ys))
        out.append(y)
    return tuple(out)


# ------------------------------------------------------------------- JSON


def channel_from_json(text: str) -> Channel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"channel file is not valid JSON: {exc}") from None
    for key in ("inputs", "outputs", "transition"):
        if key not in doc:
            raise InputError(f'channel JSON is missing "{key}"')
    inputs = [normalize_value(x) for x in doc["inputs"]]
    by_label = {value_label(x): x for x in inputs}
    transition = {}
    for key, ys in doc["transition"].items():
        if key not in by_label:
            raise InputError(f"transition row {key!r} does not name a declared input")
        transition[by_label[key]] = ys
    return make_channel(inputs, doc["outputs"], transition)


def channel_to_json(C: Channel) -> str:
    doc = {
        "inputs": [encode_value(x) for x in C.inputs],
        "outputs": [encode_value(y) for y in C.outputs],
        "transition": {value_label(x): [encode_value(y) for y in sorted_values(C(x))] for x in C.inputs},
    }
    return json.dumps(doc)


def load_channel(path) -> Channel:
    with open(path) as fh:
        return channel_from_json(fh.read())


# ------------------------------------------------------------- catalogue


def noiseless(k: int = 2) -> Channel:
    return make_channel(range(k), range(k), {i: [i] for i in range(k)})


def complete_confusion(k: int = 2) -> Channel:
    """Every input can produce every output (the zero-capacity "binary symmetric" pattern for k=2)."""
    return make_channel(range(k), range(k), {i: range(k) for i in range(k)})


def erasure() -> Channel:
    return make_channel([0, 1], [0, 1, "e"], {0: [0, "e"], 1: [1, "e"]})


def pentagon() -> Channel:
    return make_channel(range(5), range(5), {i: [i, (i + 1) % 5] for i in range(5)})
