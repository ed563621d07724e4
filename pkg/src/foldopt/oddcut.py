"""Marked symmetric graphs and minimum odd marked cuts.

A *marked cut* of ``(V, c, M)`` is a set ``C`` such that both ``C`` and its
complement contain a marked vertex; it is *odd* when ``|C & M|`` is odd.
:func:`min_odd_marked_cut` finds a minimum odd marked cut using only canonical
``(s, t)``-cuts for marked ``s, t``: some of those cuts are always minimum odd
marked cuts, so filtering them for oddness and then for minimum value is
enough.  :func:`wit_min_odd_cut` exhibits such a pair ``(s, t)`` starting from
a known minimum odd marked cut, by repeatedly contracting basic minimum marked
cuts.  It enumerates subsets and is meant for verification on small graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Iterator

from foldopt.flow import CapacitatedGraph, Cut, canonical_min_cut, cut_value

BRUTE_FORCE_LIMIT = 16


class MarkingParityError(ValueError):
    """The marked set is empty or has odd size."""

    def __init__(self, msg: str = "marking parity: |M| must be even and nonzero"):
        super().__init__(msg)


@dataclass(frozen=True)
class MarkedGraph:
    base: CapacitatedGraph
    marked: frozenset

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(self.marked))
        if not self.marked <= set(self.base.vertices):
            raise ValueError("marked vertices must belong to the graph")
        if not self.base.is_symmetric():
            raise ValueError("marked graphs must be symmetric")

    @property
    def vertices(self) -> tuple:
        return self.base.vertices

    def value(self, side: Iterable[Hashable]) -> Fraction:
        return cut_value(self.base, side)

    def is_marked_cut(self, side: Iterable[Hashable]) -> bool:
        side = frozenset(side)
        return bool(side & self.marked) and bool(self.marked - side)

    def is_odd_marked_cut(self, side: Iterable[Hashable]) -> bool:
        side = frozenset(side)
        return self.is_marked_cut(side) and len(side & self.marked) % 2 == 1

    def relabel(self, mapping) -> MarkedGraph:
        return MarkedGraph(self.base.relabel(mapping), frozenset(mapping[v] for v in self.marked))


def _check_parity(G: MarkedGraph) -> None:
    if not G.marked or len(G.marked) % 2:
        raise MarkingParityError()


def collapse(G: MarkedGraph, D: Iterable[Hashable], z: Hashable) -> MarkedGraph:
    """Contract ``D`` into the fresh vertex ``z``.

    Capacities between ``z`` and an outside vertex are the sums over ``D``;
    capacities inside ``D`` disappear and ``z`` is unmarked.
    """
    D = frozenset(D)
    if not D:
        raise ValueError("cannot collapse an empty set")
    if z in G.vertices:
        raise ValueError(f"collapse label {z!r} is already a vertex")
    if not D <= set(G.vertices):
        raise ValueError("collapsed set must consist of graph vertices")
    rest = [v for v in G.vertices if v not in D]
    caps: dict[tuple, Fraction] = {}
    for (u, v), q in G.base.arcs().items():
        if u in D and v in D:
            continue
        a = z if u in D else u
        b = z if v in D else v
        caps[(a, b)] = caps.get((a, b), Fraction(0)) + q
    return MarkedGraph(CapacitatedGraph(rest + [z], caps, symmetric=True), G.marked - D)


def substitute_in(C: Iterable[Hashable], D: Iterable[Hashable], z: Hashable) -> frozenset:
    """``C(z/D)``: replace ``D`` by ``z`` in a set that contains or avoids ``D``."""
    C, D = frozenset(C), frozenset(D)
    if D <= C:
        return (C - D) | {z}
    if not C & D:
        return C
    raise ValueError("set partitions the collapsed set")


def expand(C: Iterable[Hashable], D: Iterable[Hashable], z: Hashable) -> frozenset:
    """``C(D/z)``: the inverse of :func:`substitute_in`."""
    C = frozenset(C)
    return (C - {z}) | frozenset(D) if z in C else C


def _sort_key(side: frozenset):
    return (len(side), sorted(map(str, side)))


def odd_cut_candidates(G: MarkedGraph, backend: str = "aug") -> tuple[Fraction, frozenset]:
    """Minimum value and the set of surviving canonical cuts.

    For every ordered pair of distinct marked ``s, t`` the canonical minimum
    ``(s, t)``-cut is computed; cuts with an even number of marked vertices
    are dropped, and of the rest only those of minimum value are kept.
    """
    _check_parity(G)
    marked = [v for v in G.vertices if v in G.marked]
    odd: dict[frozenset, Fraction] = {}
    for s in marked:
        for t in marked:
            if s == t:
                continue
            side = canonical_min_cut(G.base, s, t, backend).side
            if len(side & G.marked) % 2 == 1 and side not in odd:
                odd[side] = G.value(side)
    if not odd:  # pragma: no cover - ruled out by the existence argument
        raise RuntimeError("no odd canonical cut found")
    best = min(odd.values())
    return best, frozenset(side for side, v in odd.items() if v == best)


def min_odd_marked_cut(G: MarkedGraph, backend: str = "aug") -> tuple[Cut, Fraction]:
    """A minimum odd marked cut and its value.

    The value is determined by ``G``.  The cut is chosen among the surviving
    canonical cuts (see :func:`odd_cut_candidates`): the one contained in all
    others if there is one, otherwise the smallest, with ties broken by the
    sorted vertex names.

    Raises:
        MarkingParityError: ``|M|`` is odd or zero.
    """
    best, sides = odd_cut_candidates(G, backend)
    common = frozenset.intersection(*sides)
    chosen = common if common in sides else min(sides, key=_sort_key)
    return Cut(G.base, chosen), best


# -- subset enumeration ------------------------------------------------------


def _subsets(vertices: tuple) -> Iterator[frozenset]:
    if len(vertices) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"subset enumeration is limited to {BRUTE_FORCE_LIMIT} vertices")
    for r in range(1, len(vertices)):
        for combo in combinations(vertices, r):
            yield frozenset(combo)


def marked_cuts(G: MarkedGraph) -> list[frozenset]:
    return [C for C in _subsets(G.vertices) if G.is_marked_cut(C)]


def minimum_cuts(G: MarkedGraph, cuts: Iterable[frozenset]) -> list[frozenset]:
    cuts = list(cuts)
    if not cuts:
        return []
    values = {C: G.value(C) for C in cuts}
    best = min(values.values())
    return [C for C in cuts if values[C] == best]


def basic_cuts(cuts: Iterable[frozenset]) -> list[frozenset]:
    """Members of the family containing no other member as a strict subset."""
    cuts = list(cuts)
    return [C for C in cuts if not any(D < C for D in cuts)]


def basic_min_marked_cut(G: MarkedGraph, avoid: Iterable[Hashable]) -> Cut:
    """A basic minimum marked cut ``D`` with ``D`` inside ``avoid`` or disjoint from it.

    Found by enumeration, so ``|V|`` is limited to :data:`BRUTE_FORCE_LIMIT`.

    Raises:
        ValueError: no such cut exists (``avoid`` is then not a basic minimum
            odd marked cut).
    """
    avoid = frozenset(avoid)
    found = [
        D
        for D in basic_cuts(minimum_cuts(G, marked_cuts(G)))
        if D <= avoid or not D & avoid
    ]
    if not found:
        raise ValueError("no basic minimum marked cut avoids the given cut")
    return Cut(G.base, min(found, key=_sort_key))


def _fresh_label(G: MarkedGraph, i: int) -> Hashable:
    label = ("collapsed", i)
    while label in G.vertices:
        label = label + ("'",)
    return label


def wit_min_odd_cut(G: MarkedGraph, C: Cut | Iterable[Hashable]) -> tuple[Hashable, Hashable]:
    """Marked ``(s, t)`` whose canonical cut is a minimum odd marked cut.

    ``C`` must be a minimum odd marked cut of ``G``; this is checked by
    enumeration.  If ``C`` is not basic it is first replaced by a basic minimum
    odd marked cut inside it.  Each round picks a basic minimum marked cut
    ``D`` not partitioned by the current cut; an odd ``D`` yields the answer
    and an even one is contracted.

    Raises:
        MarkingParityError: ``|M|`` is odd or zero.
        ValueError: ``C`` is not a minimum odd marked cut.
    """
    _check_parity(G)
    side = frozenset(C.side if isinstance(C, Cut) else C)
    odd_min = minimum_cuts(G, [D for D in marked_cuts(G) if G.is_odd_marked_cut(D)])
    if side not in odd_min:
        raise ValueError("given cut is not a minimum odd marked cut")
    inner = [D for D in basic_cuts(odd_min) if D <= side]
    current = min(inner, key=_sort_key)

    graph = G
    for i in range(len(G.vertices) // 2 + 1):
        D = basic_min_marked_cut(graph, current).side
        if graph.is_odd_marked_cut(D):
            order = [v for v in graph.vertices if v in graph.marked]
            s = next(v for v in order if v in D)
            t = next(v for v in order if v not in D)
            return s, t
        z = _fresh_label(graph, i)
        current = substitute_in(current, D, z)
        graph = collapse(graph, D, z)
    raise RuntimeError("witness search did not terminate")  # pragma: no cover
