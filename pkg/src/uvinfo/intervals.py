"""Finite unions of closed intervals with exact rational endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InputError


def to_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, ``"p/q"``/decimal string, or float (by its repr)."""
    if isinstance(x, bool):
        raise InputError(f"not a number: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise InputError(f"not a rational number: {x!r}") from None
    raise InputError(f"not a number: {x!r}")


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, pairwise-disjoint closed intervals; touching intervals are merged."""

    intervals: tuple

    @classmethod
    def of(cls, pairs: Iterable) -> "IntervalUnion":
        items = []
        for pair in pairs:
            a, b = (to_fraction(v) for v in pair)
            if a > b:
                raise InputError(f"interval [{a}, {b}] has a > b")
            items.append((a, b))
        items.sort()
        merged: list = []
        for a, b in items:
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        return cls(tuple(merged))

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def intersects(self, other: "IntervalUnion") -> bool:
        i = j = 0
        A, B = self.intervals, other.intervals
        while i < len(A) and j < len(B):
            a0, a1 = A[i]
            b0, b1 = B[j]
            if a0 <= b1 and b0 <= a1:
                return True
            if a1 < b1:
                i += 1
            else:
                j += 1
        return False

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion.of(self.intervals + other.intervals)

    def contains(self, other: "IntervalUnion") -> bool:
        return all(any(a <= c and d <= b for a, b in self.intervals) for c, d in other.intervals)

    def to_json(self) -> list:
        return [[_frac_str(a), _frac_str(b)] for a, b in self.intervals]


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
