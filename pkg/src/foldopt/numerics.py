"""Exact rational scalars, vectors and matrices over unordered index sets.

Scalars are :class:`fractions.Fraction`.  Vectors and matrices are indexed by
arbitrary hashable labels; the insertion order of labels is kept only so that
printing is stable, and no computation in this module depends on it.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Any, Hashable, Iterable, Iterator, Mapping

Rational = Fraction

_LITERAL = re.compile(r"^-?\d+(/\d+)?$")


def to_rational(value: Any) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats.

    Strings must be rational literals ("p/q" or "p"); see :func:`parse_rational`.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'p/q'")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" with an optional leading "-".  Decimals are rejected."""
    text = text.strip()
    if not _LITERAL.match(text):
        raise ValueError(f"malformed rational literal {text!r}")
    if text.endswith("/0"):
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_size(q: Fraction) -> int:
    """Encoding length 1 + ceil(log2(|p|+1)) + ceil(log2(q+1))."""
    # ceil(log2(n + 1)) == n.bit_length() for n >= 0
    return 1 + abs(q.numerator).bit_length() + q.denominator.bit_length()


def denominator_lcm(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = lcm(out, v.denominator)
    return out


class RationalVector(Mapping):
    """Immutable vector ``V -> Q`` over a finite set of hashable labels."""

    __slots__ = ("_index", "_entries", "_hash")

    def __init__(self, entries: Mapping[Hashable, Any] | Iterable[tuple[Hashable, Any]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[Hashable, Fraction] = {}
        for key, value in items:
            if key in data:
                raise ValueError(f"duplicate index {key!r}")
            data[key] = to_rational(value)
        self._entries = data
        self._index = tuple(data)
        self._hash = None

    @classmethod
    def zeros(cls, index: Iterable[Hashable]) -> RationalVector:
        return cls((i, 0) for i in index)

    @classmethod
    def constant(cls, index: Iterable[Hashable], value: Any) -> RationalVector:
        q = to_rational(value)
        return cls((i, q) for i in index)

    @classmethod
    def from_sequence(cls, values: Iterable[Any]) -> RationalVector:
        """Vector over the ordered index set ``[k] = {0, ..., k-1}``."""
        return cls(enumerate(values))

    @property
    def index(self) -> tuple:
        return self._index

    @property
    def index_set(self) -> frozenset:
        return frozenset(self._index)

    def __getitem__(self, key: Hashable) -> Fraction:
        return self._entries[key]

    def __iter__(self) -> Iterator:
        return iter(self._index)

    def __len__(self) -> int:
        return len(self._index)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {format_rational(v)}" for k, v in self._entries.items())
        return f"RationalVector({{{body}}})"

    def values_in(self, order: Iterable[Hashable]) -> list[Fraction]:
        return [self._entries[k] for k in order]

    def _check_same_index(self, other: RationalVector) -> None:
        if self._entries.keys() != other._entries.keys():
            raise ValueError("index-set mismatch")

    def __add__(self, other: RationalVector) -> RationalVector:
        self._check_same_index(other)
        return RationalVector((k, v + other._entries[k]) for k, v in self._entries.items())

    def __sub__(self, other: RationalVector) -> RationalVector:
        self._check_same_index(other)
        return RationalVector((k, v - other._entries[k]) for k, v in self._entries.items())

    def __neg__(self) -> RationalVector:
        return RationalVector((k, -v) for k, v in self._entries.items())

    def scale(self, alpha: Any) -> RationalVector:
        a = to_rational(alpha)
        return RationalVector((k, a * v) for k, v in self._entries.items())

    def __rmul__(self, alpha: Any) -> RationalVector:
        return self.scale(alpha)

    def is_zero(self) -> bool:
        return not any(self._entries.values())

    def relabel(self, mapping: Mapping[Hashable, Hashable]) -> RationalVector:
        """Return the vector with every index ``i`` renamed to ``mapping[i]``."""
        return RationalVector((mapping[k], v) for k, v in self._entries.items())


class RationalMatrix:
    """Immutable matrix ``C x V -> Q``; rows and columns are label sets."""

    __slots__ = ("_rows", "_cols", "_entries")

    def __init__(
        self,
        rows: Iterable[Hashable],
        cols: Iterable[Hashable],
        entries: Mapping[Hashable, Mapping[Hashable, Any]] | None = None,
    ):
        self._rows = tuple(rows)
        self._cols = tuple(cols)
        if len(set(self._rows)) != len(self._rows) or len(set(self._cols)) != len(self._cols):
            raise ValueError("duplicate row or column label")
        entries = entries or {}
        unknown = set(entries) - set(self._rows)
        if unknown:
            raise ValueError(f"entries for unknown rows {sorted(map(repr, unknown))}")
        col_set = set(self._cols)
        table: dict[Hashable, RationalVector] = {}
        for r in self._rows:
            given = entries.get(r, {})
            if set(given) - col_set:
                raise ValueError(f"row {r!r} has entries outside the column set")
            table[r] = RationalVector((c, given.get(c, 0)) for c in self._cols)
        self._entries = table

    @classmethod
    def from_rows(cls, cols: Iterable[Hashable], rows: Mapping[Hashable, RationalVector]) -> RationalMatrix:
        cols = tuple(cols)
        return cls(rows.keys(), cols, {r: dict(v) for r, v in rows.items()})

    @property
    def row_labels(self) -> tuple:
        return self._rows

    @property
    def col_labels(self) -> tuple:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), len(self._cols)

    def row(self, r: Hashable) -> RationalVector:
        return self._entries[r]

    def __getitem__(self, rc: tuple[Hashable, Hashable]) -> Fraction:
        r, c = rc
        return self._entries[r][c]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return set(self._cols) == set(other._cols) and self._entries == other._entries

    def __repr__(self) -> str:
        return f"RationalMatrix({len(self._rows)}x{len(self._cols)})"

    def apply(self, x: RationalVector) -> RationalVector:
        """Matrix-vector product ``Ax`` indexed by the row set."""
        return RationalVector((r, dot(self._entries[r], x)) for r in self._rows)


def inf_norm(v: RationalVector) -> Fraction:
    if len(v) == 0:
        raise ValueError("empty vector")
    return max(abs(x) for x in v.values())


def bit_size(v: RationalVector) -> int:
    return sum(rational_size(x) for x in v.values())


def dot(u: RationalVector, v: RationalVector) -> Fraction:
    if u.index_set != v.index_set:
        raise ValueError("index-set mismatch")
    return sum((x * v[k] for k, x in u.items()), Fraction(0))
