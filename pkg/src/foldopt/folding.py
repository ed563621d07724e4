"""Index maps over unordered variable sets, folding and refinement.

An index map ``sigma`` sends each variable ``v`` of a finite set ``V`` onto a
class number in ``[k] = {0, ..., k-1}``.  Folding averages a vector over each
class, almost-folding sums it, and unfolding copies class values back onto
the members.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from foldopt.numerics import RationalVector


class IndexMap:
    """Onto map ``V -> [k]``.

    Args:
        assignment: mapping from each variable to its class number.  The
            class numbers used must be exactly ``0, ..., k-1``.
    """

    __slots__ = ("_assign", "_k", "_classes")

    def __init__(self, assignment: Mapping[Hashable, int]):
        assign = dict(assignment)
        used = set(assign.values())
        k = len(used)
        if used != set(range(k)):
            raise ValueError("index map must be onto an initial segment [k]")
        self._assign = assign
        self._k = k
        classes: list[list[Hashable]] = [[] for _ in range(k)]
        for v, i in assign.items():
            classes[i].append(v)
        self._classes = tuple(tuple(c) for c in classes)

    @classmethod
    def constant(cls, variables: Iterable[Hashable]) -> IndexMap:
        """The one-class map ``0^V``."""
        return cls({v: 0 for v in variables})

    @property
    def source(self) -> frozenset:
        return frozenset(self._assign)

    @property
    def class_count(self) -> int:
        return self._k

    @property
    def classes(self) -> tuple[tuple, ...]:
        """Members of each class; within a class the order carries no meaning."""
        return self._classes

    def __getitem__(self, v: Hashable) -> int:
        return self._assign[v]

    def items(self):
        return self._assign.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexMap):
            return NotImplemented
        return self._assign == other._assign

    def __hash__(self) -> int:
        return hash(frozenset(self._assign.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{v!r}: {i}" for v, i in self._assign.items())
        return f"IndexMap({{{body}}})"

    def relabel(self, mapping: Mapping[Hashable, Hashable]) -> IndexMap:
        """``sigma o pi^-1`` for a bijection ``pi`` given as ``{v: pi(v)}``."""
        return IndexMap({mapping[v]: i for v, i in self._assign.items()})


def _check(x: RationalVector, sigma: IndexMap) -> None:
    if x.index_set != sigma.source:
        raise ValueError("index-set mismatch between vector and index map")


def almost_fold(x: RationalVector, sigma: IndexMap) -> RationalVector:
    """Class sums: ``(almost_fold x)_i = sum of x_v over sigma(v) = i``."""
    _check(x, sigma)
    return RationalVector(
        (i, sum((x[v] for v in members), Fraction(0))) for i, members in enumerate(sigma.classes)
    )


def fold(x: RationalVector, sigma: IndexMap) -> RationalVector:
    """Class averages: ``(fold x)_i = (sum of x_v over class i) / |class i|``."""
    _check(x, sigma)
    return RationalVector(
        (i, sum((x[v] for v in members), Fraction(0)) / len(members))
        for i, members in enumerate(sigma.classes)
    )


def unfold(xbar: RationalVector, sigma: IndexMap) -> RationalVector:
    """``(unfold xbar)_v = xbar_{sigma(v)}``."""
    if xbar.index_set != frozenset(range(sigma.class_count)):
        raise ValueError("folded vector must be indexed by [k]")
    return RationalVector((v, xbar[i]) for v, i in sigma.items())


def agrees_with(x: RationalVector, sigma: IndexMap) -> bool:
    """True when ``x`` is constant on every class of ``sigma``."""
    _check(x, sigma)
    for members in sigma.classes:
        first = x[members[0]]
        if any(x[v] != first for v in members[1:]):
            return False
    return True


def refine(sigma: IndexMap, d: RationalVector) -> IndexMap:
    """Split every class of ``sigma`` by the values of ``d``.

    Classes keep their relative order; inside a class the new subclasses are
    ordered by ascending ``d`` value.  The result equals ``sigma`` exactly when
    ``d`` agrees with it.
    """
    _check(d, sigma)
    out: dict[Hashable, int] = {}
    nxt = 0
    for members in sigma.classes:
        values = sorted({d[v] for v in members})
        rank = {q: nxt + j for j, q in enumerate(values)}
        for v in members:
            out[v] = rank[d[v]]
        nxt += len(values)
    return IndexMap(out)
