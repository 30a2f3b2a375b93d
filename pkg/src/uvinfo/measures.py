"""Nonstochastic entropies, 0-information, and maximin information.

Sets come in two kinds: finite ``frozenset`` ranges of exact values, and
:class:`~uvinfo.intervals.IntervalUnion` ranges on the real line. Every
quantity is computed from exact counts or measures and only converted to
bits (``float``, base 2) at the end.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import InputError, InvariantError
from .intervals import IntervalUnion
from .uv import (
    Ensemble,
    Names,
    SetFamily,
    column_of,
    conditional_family,
    encode_value,
    marginal_range,
    normalize_value,
    value_key,
    value_label,
)


def log2_exact(x) -> float:
    """log2 of a nonnegative int/Fraction without overflow; 0 maps to -inf."""
    if x < 0:
        raise ValueError("log of a negative quantity")
    if x == 0:
        return -math.inf
    if isinstance(x, Fraction):
        return math.log2(x.numerator) - math.log2(x.denominator)
    return math.log2(x)


def _size(s):
    return s.measure if isinstance(s, IntervalUnion) else len(s)


def _kind(s) -> str:
    return "interval" if isinstance(s, IntervalUnion) else "discrete"


def union_all(sets: Sequence):
    if not sets:
        raise InputError("empty family")
    if isinstance(sets[0], IntervalUnion):
        return IntervalUnion.of(iv for s in sets for iv in s.intervals)
    return frozenset().union(*sets)


def _members(F) -> list:
    """Normalize a family to ``[(label, set), ...]``; unlabelled members get their index."""
    if isinstance(F, SetFamily):
        members = list(F.members)
    else:
        members = []
        for i, item in enumerate(F):
            if isinstance(item, tuple) and len(item) == 2 and isinstance(item[1], (frozenset, set, IntervalUnion)):
                label, s = item
            else:
                label, s = i, item
            if isinstance(s, set):
                s = frozenset(s)
            members.append((label, s))
    if not members:
        raise InputError("empty family")
    kinds = {_kind(s) for _, s in members}
    if len(kinds) != 1:
        raise InputError("family mixes discrete and interval sets")
    for label, s in members:
        if not s:
            raise InputError(f"family member {label!r} is empty")
    return members


# --------------------------------------------------------------- entropies


def hartley(S) -> float:
    if not S:
        raise InputError("Hartley entropy of an empty range")
    return log2_exact(len(S))


def renyi0(S: IntervalUnion) -> float:
    return log2_exact(S.measure)


def conditional_entropy0(F) -> float:
    """Worst-case log-size over the family (plain max; the family is finite)."""
    return log2_exact(max(_size(s) for _, s in _members(F)))


def zero_info(marginal, F) -> float:
    """Prior log-size minus worst posterior log-size."""
    members = _members(F)
    sets = [s for _, s in members]
    if union_all(sets) != (marginal if not isinstance(marginal, set) else frozenset(marginal)):
        raise InputError("family does not cover the marginal range exactly")
    return log2_exact(Fraction(_size(marginal)) / max(_size(s) for s in sets))


def klir_transmission(E: Ensemble, X: Names, Y: Names) -> float:
    xs, ys = column_of(E, X), column_of(E, Y)
    ratio = Fraction(len(set(xs)) * len(set(ys)), len(set(zip(xs, ys))))
    return log2_exact(ratio)


# -------------------------------------------------------------- partitions


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # smaller root wins, so groupings are independent of merge order
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri

    def groups(self) -> list:
        out: dict = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return list(out.values())


@dataclass(frozen=True)
class Partition:
    """Blocks of a partition plus which input label landed in which block."""

    blocks: tuple
    provenance: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def bits(self) -> float:
        return log2_exact(len(self.blocks))

    def block_of(self, x) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise KeyError(x)


def _block_key(b):
    if isinstance(b, IntervalUnion):
        return b.intervals[0]
    return value_key(min(b, key=value_key))


def _assemble(groups: list, sets: list, labels: list) -> Partition:
    blocks = [union_all([sets[i] for i in g]) for g in groups]
    order = sorted(range(len(blocks)), key=lambda k: _block_key(blocks[k]))
    rank = {k: r for r, k in enumerate(order)}
    provenance = {}
    for k, g in enumerate(groups):
        for i in g:
            provenance[labels[i]] = rank[k]
    return Partition(tuple(blocks[k] for k in order), provenance)


def overlap_partition(F) -> Partition:
    """Merge family members that (transitively) share a point; blocks are the merged unions."""
    members = _members(F)
    labels = [label for label, _ in members]
    sets = [s for _, s in members]
    uf = UnionFind(len(sets))
    if isinstance(sets[0], IntervalUnion):
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if sets[i].intersects(sets[j]):
                    uf.union(i, j)
    else:
        owner: dict = {}
        for i, s in enumerate(sets):
            for x in s:
                if x in owner:
                    uf.union(owner[x], i)
                else:
                    owner[x] = i
    return _assemble(uf.groups(), sets, labels)


def taxicab_partition(J: Iterable) -> Partition:
    """Components of a set of (x, y) points joined along shared coordinates.

    ``provenance`` maps each y-coordinate to its block; since all points with
    one y share a block, an observation y pins down exactly one block.
    """
    points = sorted({tuple(p) for p in J}, key=value_key)
    if not points:
        raise InputError("taxicab partition of an empty set")
    uf = UnionFind(len(points))
    first_x: dict = {}
    first_y: dict = {}
    for i, (x, y) in enumerate(points):
        if x in first_x:
            uf.union(first_x[x], i)
        else:
            first_x[x] = i
        if y in first_y:
            uf.union(first_y[y], i)
        else:
            first_y[y] = i
    groups = uf.groups()
    sets = [frozenset([p]) for p in points]
    part = _assemble(groups, sets, list(range(len(points))))
    provenance = {y: part.block_of(points[i]) for y, i in first_y.items()}
    return Partition(part.blocks, provenance)


def project(block: frozenset, axis: int) -> frozenset:
    return frozenset(p[axis] for p in block)


def maximin_partitions(E: Ensemble, X: Names, Y: Names) -> tuple:
    """Overlap partition of X given Y, and the taxicab partition of their joint range."""
    overlap = overlap_partition(conditional_family(E, X, Y))
    taxicab = taxicab_partition(zip(column_of(E, X), column_of(E, Y)))
    if len(overlap) != len(taxicab):
        raise InvariantError(
            f"overlap partition has {len(overlap)} blocks but taxicab partition has {len(taxicab)}"
        )
    return overlap, taxicab


def maximin_count(E: Ensemble, X: Names, Y: Names) -> int:
    return len(maximin_partitions(E, X, Y)[0])


def maximin_info(E: Ensemble, X: Names, Y: Names) -> float:
    return log2_exact(maximin_count(E, X, Y))


def zero_info_uv(E: Ensemble, X: Names, Y: Names) -> float:
    """0-information between two columns of an ensemble."""
    return zero_info(marginal_range(E, X), conditional_family(E, X, Y))


# ------------------------------------------------------------------- JSON


def family_from_json(text: str) -> list:
    """Parse ``{"ground": ..., "members": [{"label": v, "set": [...]}]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"family file is not valid JSON: {exc}") from None
    ground = doc.get("ground") if isinstance(doc, dict) else None
    if ground not in ("discrete", "interval") or "members" not in doc:
        raise InputError('family JSON needs "ground" of "discrete"|"interval" and "members"')
    members = []
    for m in doc["members"]:
        label = normalize_value(m["label"])
        if ground == "interval":
            s = IntervalUnion.of(m["set"])
        else:
            s = frozenset(normalize_value(v) for v in m["set"])
        members.append((label, s))
    return _members(members)


def _encode_set(s: Any):
    if isinstance(s, IntervalUnion):
        return s.to_json()
    return [encode_value(v) for v in sorted(s, key=value_key)]


def partition_to_json(P: Partition) -> str:
    doc = {
        "blocks": [_encode_set(b) for b in P.blocks],
        "provenance": {value_label(k): v for k, v in P.provenance.items()},
        "bits": P.bits,
    }
    return json.dumps(doc, sort_keys=True)
