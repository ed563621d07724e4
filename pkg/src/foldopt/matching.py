"""Fractional b-matching with odd-set constraints.

The polytope over edge variables ``y`` is

    y >= 0,   A y <= b,   y(W) <= (b(W) - 1) / 2  for every W with b(W) odd,

where ``y(W)`` sums the edges inside ``W``.  Its vertices are integral, so its
maximum under ``c`` equals the maximum weight b-matching.  Separation of the
odd-set rows goes through the slack graph: with ``s = b - A y`` the row for
``W`` is violated exactly when ``y(W : V - W) + s(W) < 1``, i.e. when ``W``
is an odd marked cut of value below 1 in the graph that joins every vertex
``v`` to an extra vertex ``z`` with capacity ``s_v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping

from foldopt.flow import CapacitatedGraph, canonical_min_cut
from foldopt.numerics import RationalVector, rational_size, to_rational
from foldopt.oddcut import MarkedGraph
from foldopt.optstar import opt_star
from foldopt.polytope import INSIDE, Optimal, SeparationAnswer, SeparationOracle, sum_of_violated


class SlackVertex:
    """The extra vertex of a slack graph; never equal to a user label."""

    def __repr__(self) -> str:
        return "z*"

    def __str__(self) -> str:
        return "z*"


@dataclass(frozen=True)
class MatchingInstance:
    """An undirected graph with vertex bounds ``b`` and edge weights ``c``.

    ``edges`` maps an edge label to its two distinct end vertices.  Missing
    bounds default to 1 and missing weights to 1.
    """

    vertices: tuple
    edges: Mapping[Hashable, tuple[Hashable, Hashable]]
    b: Mapping[Hashable, int] = field(default_factory=dict)
    c: Mapping[Hashable, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        vset = set(vertices)
        if len(vset) != len(vertices):
            raise ValueError("duplicate vertex label")
        edges = dict(self.edges)
        seen = set()
        for label, (u, v) in edges.items():
            if u not in vset or v not in vset:
                raise ValueError(f"edge {label!r} uses an unknown vertex")
            if u == v:
                raise ValueError(f"edge {label!r} is a loop")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"parallel edge between {u!r} and {v!r}")
            seen.add(key)
        b = {}
        for v in vertices:
            raw = self.b.get(v, 1)
            q = to_rational(raw) if not isinstance(raw, int) else Fraction(raw)
            if q.denominator != 1 or q < 0:
                raise ValueError(f"bound for {v!r} must be a nonnegative integer")
            b[v] = int(q)
        if set(self.b) - vset:
            raise ValueError("bounds given for unknown vertices")
        c = {}
        for e in edges:
            q = to_rational(self.c.get(e, 1))
            if q < 0:
                raise ValueError(f"weight for {e!r} must be nonnegative")
            c[e] = q
        if set(self.c) - set(edges):
            raise ValueError("weights given for unknown edges")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_edge_list(cls, vertices: Iterable[Hashable], pairs: Iterable[tuple], **kw) -> MatchingInstance:
        """Edges labelled by their end-vertex pair ``(u, v)``."""
        return cls(tuple(vertices), {(u, v): (u, v) for u, v in pairs}, **kw)

    def weight_vector(self) -> RationalVector:
        return RationalVector(self.c)

    def incident(self, v: Hashable) -> list:
        return [e for e, ends in self.edges.items() if v in ends]

    def relabel(self, vmap: Mapping, emap: Mapping) -> MatchingInstance:
        return MatchingInstance(
            tuple(vmap[v] for v in self.vertices),
            {emap[e]: (vmap[u], vmap[v]) for e, (u, v) in self.edges.items()},
            {vmap[v]: q for v, q in self.b.items()},
            {emap[e]: q for e, q in self.c.items()},
        )


def slack_graph(inst: MatchingInstance, y: RationalVector, z: Hashable | None = None) -> MarkedGraph:
    """Marked graph on ``V + {z}`` with capacities ``y_e`` and ``s_v = b_v - (Ay)_v``.

    Odd-bound vertices are marked, and ``z`` too when that count is odd.
    ``y`` must satisfy ``y >= 0`` and ``A y <= b``.
    """
    z = SlackVertex() if z is None else z
    caps: dict[tuple, Fraction] = {}
    load = {v: Fraction(0) for v in inst.vertices}
    for e, (u, v) in inst.edges.items():
        caps[(u, v)] = y[e]
        load[u] += y[e]
        load[v] += y[e]
    for v in inst.vertices:
        caps[(z, v)] = inst.b[v] - load[v]
    marked = {v for v in inst.vertices if inst.b[v] % 2 == 1}
    if len(marked) % 2 == 1:
        marked.add(z)
    graph = CapacitatedGraph(list(inst.vertices) + [z], caps, symmetric=True)
    return MarkedGraph(graph, frozenset(marked))


def odd_set_row(inst: MatchingInstance, W: Iterable[Hashable]) -> tuple[RationalVector, Fraction]:
    """``y(W) <= (b(W) - 1) / 2`` as an edge-indexed normal and right-hand side."""
    W = frozenset(W)
    normal = RationalVector((e, 1 if u in W and v in W else 0) for e, (u, v) in inst.edges.items())
    return normal, Fraction(sum(inst.b[v] for v in W) - 1, 2)


def violated_odd_sets(inst: MatchingInstance, y: RationalVector, backend: str = "aug") -> list[frozenset]:
    """Vertex sets ``W`` whose odd-set row is violated, found via canonical cuts.

    For every ordered pair of marked vertices of the slack graph the canonical
    cut is taken; odd cuts of value below 1 are turned into the side without
    the slack vertex.  Duplicates are removed.
    """
    z = SlackVertex()
    H = slack_graph(inst, y, z)
    marked = [v for v in H.vertices if v in H.marked]
    found: list[frozenset] = []
    for s in marked:
        for t in marked:
            if s == t:
                continue
            K = canonical_min_cut(H.base, s, t, backend).side
            if len(K & H.marked) % 2 == 0 or H.value(K) >= 1:
                continue
            W = K if z not in K else frozenset(H.vertices) - K
            if W not in found:
                found.append(W)
    return found


class MatchingOracle(SeparationOracle):
    """Separation oracle for the b-matching polytope of ``inst``.

    The nonnegativity and degree rows are checked first; a violation there is
    answered with the sum of the violated rows.  Only when they all hold are
    odd-set rows searched, and all violated ones found are summed.  Every
    ``Violated`` answer has infinity norm 1 and carries the summed bound.
    """

    def __init__(self, inst: MatchingInstance, backend: str = "aug"):
        edges = tuple(inst.edges)
        max_b = max(inst.b.values(), default=0)
        # every row has 0/1 coefficients and a right-hand side at most sum(b)
        phi = 3 * len(edges) + rational_size(Fraction(sum(inst.b.values())))
        # vertices are integral and bounded by max b
        super().__init__(edges, phi, vertex_bits=max_b.bit_length() + 1)
        self.inst = inst
        self.backend = backend
        self._explicit = []
        for e in edges:
            self._explicit.append((RationalVector((f, -1 if f == e else 0) for f in edges), Fraction(0)))
        for v in inst.vertices:
            inc = set(inst.incident(v))
            self._explicit.append(
                (RationalVector((f, 1 if f in inc else 0) for f in edges), Fraction(inst.b[v]))
            )

    def separate(self, y: RationalVector) -> SeparationAnswer:
        if y.index_set != frozenset(self.variables):
            raise ValueError("index-set mismatch between point and edge set")
        ans = sum_of_violated(self._explicit, y)
        if ans is not None:
            return ans
        rows = [odd_set_row(self.inst, W) for W in violated_odd_sets(self.inst, y, self.backend)]
        ans = sum_of_violated(rows, y)
        return INSIDE if ans is None else ans


def build_matching_polytope_oracle(inst: MatchingInstance, backend: str = "aug") -> MatchingOracle:
    return MatchingOracle(inst, backend)


def max_b_matching_value(inst: MatchingInstance, *, trace=None) -> Fraction:
    """Maximum of ``c.y`` over the b-matching polytope, via :func:`opt_star`."""
    if not inst.edges:
        return Fraction(0)
    oracle = MatchingOracle(inst)
    outcome = opt_star(oracle, inst.weight_vector(), trace=trace)
    if not isinstance(outcome, Optimal):  # pragma: no cover - 0 is feasible and b bounds the polytope
        raise RuntimeError(f"matching LP returned {outcome!r}")
    return outcome.value


def has_perfect_matching(inst: MatchingInstance) -> bool:
    """Whether the graph has a perfect matching (``b = 1`` and ``c = 1`` assumed)."""
    if any(q != 1 for q in inst.b.values()) or any(q != 1 for q in inst.c.values()):
        raise ValueError("perfect matching needs unit bounds and unit weights")
    n = len(inst.vertices)
    if n % 2:
        return False
    return max_b_matching_value(inst) == Fraction(n, 2)


def cardinality_instance(vertices: Iterable[Hashable], pairs: Iterable[tuple[Any, Any]]) -> MatchingInstance:
    return MatchingInstance.from_edge_list(vertices, pairs)
