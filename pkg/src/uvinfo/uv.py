"""Uncertain variables over a finite sample space.

An :class:`Ensemble` is a table: each row is a sample ``omega`` and each
column an uncertain variable evaluated on it. Every range (marginal,
conditional, joint) is derived from the table on demand; nothing is cached
independently, so the ranges can never disagree with each other.

Values are exact tokens: ``int``, :class:`fractions.Fraction`, ``str`` or
tuples of these. Floats are rejected because range equality has to be
decidable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Iterable, Iterator, Mapping, Sequence, Union

from .errors import EmptyConditionError, InputError, UnknownVariableError

Value = Union[int, Fraction, str, tuple]
Names = Union[str, Sequence[str]]

_RATIONAL = re.compile(r"^-?\d+/\d+$")


# ---------------------------------------------------------------- values


def normalize_value(v: Any) -> Value:
    """Coerce ``v`` to a canonical exact token.

    Integral fractions become ints, ``"p/q"`` strings become fractions and
    lists become tuples, so equal values always hash equal.
    """
    if isinstance(v, bool):
        raise InputError(f"booleans are not accepted as values: {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, str):
        if _RATIONAL.match(v):
            return normalize_value(Fraction(v))
        return v
    if isinstance(v, (list, tuple)):
        return tuple(normalize_value(x) for x in v)
    raise InputError(f"unsupported value {v!r} ({type(v).__name__}); use int, 'p/q', str or list")


def value_key(v: Value):
    """Total order over mixed values: numbers < strings < tuples."""
    if isinstance(v, tuple):
        return (2, tuple(value_key(x) for x in v))
    if isinstance(v, str):
        return (1, v)
    return (0, v)


def sorted_values(values: Iterable[Value]) -> list:
    return sorted(values, key=value_key)


def encode_value(v: Value):
    """JSON-ready form of a value (inverse of :func:`normalize_value`)."""
    if isinstance(v, tuple):
        return [encode_value(x) for x in v]
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def value_label(v: Value) -> str:
    """String form used for JSON object keys."""
    enc = encode_value(v)
    if isinstance(enc, str):
        return enc
    return json.dumps(enc, separators=(",", ":"))


# -------------------------------------------------------------- ensemble


@dataclass(frozen=True)
class Ensemble:
    variables: tuple
    columns: tuple

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise InputError(f"duplicate variable names in {self.variables}")
        if len(self.columns) != len(self.variables):
            raise InputError("one column per variable required")
        lengths = {len(c) for c in self.columns}
        if len(lengths) != 1 or 0 in lengths:
            raise InputError("all columns must have the same nonzero length")

    @property
    def n_samples(self) -> int:
        return len(self.columns[0])

    def column(self, name: str) -> tuple:
        try:
            return self.columns[self.variables.index(name)]
        except ValueError:
            raise UnknownVariableError(f"unknown variable {name!r}; have {list(self.variables)}") from None

    def rows(self) -> Iterator[dict]:
        for i in range(self.n_samples):
            yield {name: col[i] for name, col in zip(self.variables, self.columns)}

    def with_column(self, name: str, values: Sequence[Any]) -> "Ensemble":
        """New ensemble with one more column (e.g. a function of others)."""
        if len(values) != self.n_samples:
            raise InputError("new column length must match the sample count")
        col = tuple(normalize_value(v) for v in values)
        return Ensemble(self.variables + (name,), self.columns + (col,))


def build_ensemble(rows: Sequence[Mapping[str, Any]]) -> Ensemble:
    """Build an ensemble from a list of ``{variable: value}`` rows."""
    if not rows:
        raise InputError("an ensemble needs at least one sample")
    names = tuple(rows[0].keys())
    for i, row in enumerate(rows):
        if set(row.keys()) != set(names):
            raise InputError(f"row {i} has variables {sorted(row)}; expected {sorted(names)}")
    columns = tuple(tuple(normalize_value(row[n]) for row in rows) for n in names)
    return Ensemble(names, columns)


def ensemble_from_columns(columns: Mapping[str, Sequence[Any]]) -> Ensemble:
    names = tuple(columns)
    return Ensemble(names, tuple(tuple(normalize_value(v) for v in columns[n]) for n in names))


def _as_names(names: Names) -> tuple:
    return (names,) if isinstance(names, str) else tuple(names)


def column_of(E: Ensemble, X: Names) -> list:
    """Values of ``X`` per sample; a list of names yields the merged tuple variable."""
    if isinstance(X, str):
        return list(E.column(X))
    cols = [E.column(n) for n in X]
    if not cols:
        raise InputError("empty variable list")
    return list(zip(*cols))


# ---------------------------------------------------------------- ranges


def marginal_range(E: Ensemble, X: Names) -> frozenset:
    return frozenset(column_of(E, X))


def conditional_range(E: Ensemble, X: Names, cond: Mapping[str, Any]) -> frozenset:
    """Range of ``X`` over the samples matching every ``name == value`` in ``cond``."""
    xs = column_of(E, X)
    keys = list(cond)
    cols = [E.column(k) for k in keys]
    want = [normalize_value(cond[k]) for k in keys]
    out = {x for i, x in enumerate(xs) if all(c[i] == w for c, w in zip(cols, want))}
    if not out:
        raise EmptyConditionError(f"no sample satisfies {dict(zip(keys, want))}")
    return frozenset(out)


def joint_range(E: Ensemble, names: Sequence[str]) -> frozenset:
    names = _as_names(names)
    if not names:
        raise InputError("joint_range needs at least one variable")
    return frozenset(column_of(E, list(names)))


@dataclass(frozen=True)
class SetFamily:
    """Labelled family of nonempty sets, e.g. the conditional ranges of X given Y."""

    members: tuple

    def __post_init__(self):
        for label, s in self.members:
            if not s:
                raise InputError(f"family member {label!r} is empty")

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def sets(self) -> list:
        return [s for _, s in self.members]

    @property
    def labels(self) -> list:
        return [label for label, _ in self.members]

    def union(self) -> frozenset:
        return frozenset().union(*self.sets)


def conditional_family(E: Ensemble, X: Names, Y: Names) -> SetFamily:
    """The family of ranges of X conditioned on each realized value of Y."""
    xs, ys = column_of(E, X), column_of(E, Y)
    groups: dict = {}
    for x, y in zip(xs, ys):
        groups.setdefault(y, set()).add(x)
    members = tuple((y, frozenset(groups[y])) for y in sorted_values(groups))
    return SetFamily(members)


# ------------------------------------------------------------ predicates


def is_unrelated(E: Ensemble, names: Sequence[str], given: Names | None = None) -> bool:
    """Joint range equals the product of marginals (optionally given each x)."""
    names = _as_names(names)
    if len(names) < 2:
        raise InputError("unrelatedness needs at least two variables")
    if given is None:
        groups = {(): list(range(E.n_samples))}
    else:
        groups = {}
        for i, g in enumerate(column_of(E, given)):
            groups.setdefault(g, []).append(i)
    cols = [E.column(n) for n in names]
    for idx in groups.values():
        joint = {tuple(c[i] for c in cols) for i in idx}
        size = 1
        for c in cols:
            size *= len({c[i] for i in idx})
        # joint is always a subset of the product, so comparing sizes suffices
        if len(joint) != size:
            return False
    return True


def is_markov_chain(E: Ensemble, X: Names, Y: Names, Z: Names) -> bool:
    """``X <-> Y <-> Z``: for every realized (y, z), the range of X given (y, z) equals that given y."""
    xs, ys, zs = column_of(E, X), column_of(E, Y), column_of(E, Z)
    given_y: dict = {}
    given_yz: dict = {}
    for x, y, z in zip(xs, ys, zs):
        given_y.setdefault(y, set()).add(x)
        given_yz.setdefault((y, z), set()).add(x)
    return all(s == given_y[y] for (y, _), s in given_yz.items())


# ------------------------------------------------------------------ JSON


def ensemble_to_json(E: Ensemble) -> str:
    doc = {
        "variables": list(E.variables),
        "samples": [[encode_value(v) for v in row] for row in zip(*E.columns)],
    }
    return json.dumps(doc, separators=(",", ":"))


def ensemble_from_json(text: str) -> Ensemble:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"ensemble file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "variables" not in doc or "samples" not in doc:
        raise InputError('ensemble JSON needs "variables" and "samples"')
    names = doc["variables"]
    samples = doc["samples"]
    if not samples:
        raise InputError("an ensemble needs at least one sample")
    for i, row in enumerate(samples):
        if len(row) != len(names):
            raise InputError(f"sample {i} has {len(row)} values; expected {len(names)}")
    _reject_floats(samples)
    columns = tuple(tuple(normalize_value(row[j]) for row in samples) for j in range(len(names)))
    return Ensemble(tuple(names), columns)


def _reject_floats(obj) -> None:
    if isinstance(obj, float):
        raise InputError(f"floating-point value {obj!r} not allowed; write it as 'p/q'")
    if isinstance(obj, list):
        for x in obj:
            _reject_floats(x)


def load_ensemble(path) -> Ensemble:
    with open(path) as fh:
        return ensemble_from_json(fh.read())


def product_ensemble(ranges: Mapping[str, Iterable[Any]]) -> Ensemble:
    """Ensemble whose samples are every combination of the given ranges (mutually unrelated)."""
    names = list(ranges)
    rows = [dict(zip(names, combo)) for combo in product(*(list(ranges[n]) for n in names))]
    return build_ensemble(rows)
