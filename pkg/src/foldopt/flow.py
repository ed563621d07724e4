"""Capacitated graphs, maximum flows and canonical minimum cuts.

Three max-flow backends give the same flow value:

* ``"lp"`` solves the flow LP exactly with :func:`optimize_explicit`;
* ``"aug"`` runs shortest augmenting paths in exact rationals;
* ``"sym"`` solves the flow LP through :func:`opt_star`, which returns a flow
  that is invariant under every automorphism of the graph fixing ``s`` and
  ``t``.  It is much slower and meant for small graphs.

The canonical minimum cut is the set of vertices reachable from ``s`` in the
residual graph of any maximum flow; it is the intersection of all minimum
``(s, t)``-cuts and so does not depend on the backend.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping

from foldopt.numerics import RationalVector, to_rational
from foldopt.polytope import ExplicitOracle, ExplicitPolytope, Optimal, optimize_explicit

BACKENDS = ("lp", "aug", "sym")


class CapacitatedGraph:
    """Vertex set with a nonnegative rational capacity on ordered pairs.

    Args:
        vertices: vertex labels.
        capacities: ``{(u, v): c}``; missing pairs have capacity 0 and
            self-loops are ignored.  Repeated pairs are not allowed.
        symmetric: if true, each ``(u, v)`` also sets ``(v, u)`` and the graph
            is undirected.
    """

    def __init__(
        self,
        vertices: Iterable[Hashable],
        capacities: Mapping[tuple[Hashable, Hashable], Any] | Iterable = (),
        symmetric: bool = False,
    ):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex label")
        vset = set(self.vertices)
        items = capacities.items() if isinstance(capacities, Mapping) else capacities
        cap: dict[tuple, Fraction] = {}
        for (u, v), value in items:
            q = to_rational(value)
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u!r}, {v!r}) uses an unknown vertex")
            if q < 0:
                raise ValueError(f"negative capacity on ({u!r}, {v!r})")
            if u == v:
                continue
            pairs = [(u, v), (v, u)] if symmetric else [(u, v)]
            for p in pairs:
                if p in cap and not (symmetric and cap[p] == q):
                    raise ValueError(f"capacity for {p!r} given twice")
                cap[p] = q
        self._cap = {p: q for p, q in cap.items() if q != 0}
        self.symmetric = symmetric

    def capacity(self, u: Hashable, v: Hashable) -> Fraction:
        return self._cap.get((u, v), Fraction(0)) if u != v else Fraction(0)

    def arcs(self) -> dict[tuple, Fraction]:
        """Ordered pairs with positive capacity."""
        return dict(self._cap)

    def is_symmetric(self) -> bool:
        return all(self.capacity(v, u) == q for (u, v), q in self._cap.items())

    def edges(self) -> list[tuple[Hashable, Hashable, Fraction]]:
        """Positive-capacity edges; each undirected edge once if symmetric."""
        order = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for (u, v), q in self._cap.items():
            if self.symmetric and order[u] > order[v]:
                continue
            out.append((u, v, q))
        return out

    def relabel(self, mapping: Mapping[Hashable, Hashable]) -> CapacitatedGraph:
        return CapacitatedGraph(
            [mapping[v] for v in self.vertices],
            {(mapping[u], mapping[v]): q for (u, v), q in self._cap.items()},
            symmetric=self.symmetric,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CapacitatedGraph):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self._cap == other._cap

    def __repr__(self) -> str:
        kind = "symmetric " if self.symmetric else ""
        return f"CapacitatedGraph({kind}|V|={len(self.vertices)}, arcs={len(self._cap)})"


@dataclass(frozen=True)
class Flow:
    graph: CapacitatedGraph
    source: Hashable
    sink: Hashable
    values: Mapping[tuple, Fraction]

    def __getitem__(self, pair: tuple) -> Fraction:
        return self.values.get(pair, Fraction(0))

    @property
    def value(self) -> Fraction:
        t = self.sink
        return sum(
            (self[v, t] - self[t, v] for v in self.graph.vertices if v != t), Fraction(0)
        )

    def is_feasible(self) -> bool:
        g = self.graph
        for (u, v), q in self.values.items():
            if q < 0 or q > g.capacity(u, v):
                return False
        for u in g.vertices:
            if u in (self.source, self.sink):
                continue
            net = sum((self[v, u] - self[u, v] for v in g.vertices if v != u), Fraction(0))
            if net != 0:
                return False
        return True

    def combine(self, other: Flow, alpha: Fraction) -> Flow:
        """``alpha * self + (1 - alpha) * other``."""
        keys = set(self.values) | set(other.values)
        vals = {p: alpha * self[p] + (1 - alpha) * other[p] for p in keys}
        return Flow(self.graph, self.source, self.sink, {p: q for p, q in vals.items() if q})


@dataclass(frozen=True)
class Cut:
    graph: CapacitatedGraph
    side: frozenset

    @property
    def value(self) -> Fraction:
        return cut_value(self.graph, self.side)


def cut_value(G: CapacitatedGraph, side: Iterable[Hashable]) -> Fraction:
    """Total capacity of arcs leaving ``side``."""
    side = set(side)
    return sum((q for (u, v), q in G.arcs().items() if u in side and v not in side), Fraction(0))


def _check_terminals(G: CapacitatedGraph, s, t) -> None:
    if s == t:
        raise ValueError("source and sink must differ")
    if s not in G.vertices or t not in G.vertices:
        raise ValueError("source and sink must be vertices of the graph")


def build_flow_lp(G: CapacitatedGraph, s: Hashable, t: Hashable) -> tuple[ExplicitPolytope, RationalVector]:
    """The flow LP over variables ``f(u, v)`` for ordered pairs of distinct vertices.

    Rows: ``f(u,v) <= c(u,v)`` and ``-f(u,v) <= 0`` for every pair, and flow
    conservation at every ``u`` other than ``s, t`` written as two
    inequalities.  That is ``2|V|^2 - 4`` rows.  The objective is the net flow
    into ``t``.
    """
    _check_terminals(G, s, t)
    V = G.vertices
    pairs = [(u, v) for u in V for v in V if u != v]
    rows: dict[Hashable, tuple[dict, Fraction]] = {}
    for p in pairs:
        rows[("ub",) + p] = ({p: 1}, G.capacity(*p))
        rows[("lb",) + p] = ({p: -1}, Fraction(0))
    for u in V:
        if u in (s, t):
            continue
        inflow = {}
        for v in V:
            if v != u:
                inflow[(v, u)] = 1
                inflow[(u, v)] = -1
        rows[("in", u)] = (inflow, Fraction(0))
        rows[("out", u)] = ({p: -q for p, q in inflow.items()}, Fraction(0))
    objective = RationalVector(
        (p, 1 if p[1] == t else -1 if p[0] == t else 0) for p in pairs
    )
    return ExplicitPolytope.from_rows(pairs, rows), objective


def _flow_from_point(G, s, t, point: RationalVector) -> Flow:
    return Flow(G, s, t, {p: q for p, q in point.items() if q != 0})


def _max_flow_lp(G, s, t) -> Flow:
    P, c = build_flow_lp(G, s, t)
    outcome = optimize_explicit(P, c)
    if not isinstance(outcome, Optimal):  # pragma: no cover - the zero flow is feasible and capacities bound it
        raise RuntimeError(f"flow LP returned {outcome!r}")
    return _flow_from_point(G, s, t, outcome.point)


def _max_flow_sym(G, s, t) -> Flow:
    from foldopt.optstar import opt_star

    P, c = build_flow_lp(G, s, t)
    outcome = opt_star(ExplicitOracle(P), c)
    if not isinstance(outcome, Optimal):  # pragma: no cover
        raise RuntimeError(f"flow LP returned {outcome!r}")
    return _flow_from_point(G, s, t, outcome.point)


def _max_flow_aug(G, s, t) -> Flow:
    """Shortest augmenting paths on the residual graph, net-flow bookkeeping."""
    V = G.vertices
    cap = G.arcs()
    adj: dict[Hashable, list] = {v: [] for v in V}
    order = {v: i for i, v in enumerate(V)}
    for u, v in cap:
        adj[u].append(v)
        adj[v].append(u)
    for u in adj:
        adj[u] = sorted(set(adj[u]), key=order.__getitem__)
    net: dict[tuple, Fraction] = {}

    def residual(u, v) -> Fraction:
        return cap.get((u, v), Fraction(0)) - net.get((u, v), Fraction(0))

    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and residual(u, v) > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            break
        path = []
        v = t
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        delta = min(residual(u, v) for u, v in path)
        for u, v in path:
            net[(u, v)] = net.get((u, v), Fraction(0)) + delta
            net[(v, u)] = net.get((v, u), Fraction(0)) - delta
    return Flow(G, s, t, {p: q for p, q in net.items() if q > 0})


def max_flow(G: CapacitatedGraph, s: Hashable, t: Hashable, backend: str = "lp") -> Flow:
    """A maximum ``(s, t)``-flow of ``G``.

    Args:
        G: capacitated graph.
        s: source.
        t: sink.
        backend: ``"lp"``, ``"aug"`` or ``"sym"`` (see module docstring).
    """
    _check_terminals(G, s, t)
    if backend == "lp":
        return _max_flow_lp(G, s, t)
    if backend == "aug":
        return _max_flow_aug(G, s, t)
    if backend == "sym":
        return _max_flow_sym(G, s, t)
    raise ValueError(f"unknown flow backend {backend!r}")


def normalize_flow(f: Flow) -> Flow:
    """Cancel opposite flow: ``f'(u,v) = max(0, f(u,v) - f(v,u))``."""
    out = {}
    for (u, v), q in f.values.items():
        d = q - f[v, u]
        if d > 0:
            out[(u, v)] = d
    return Flow(f.graph, f.source, f.sink, out)


def residual_reachable(G: CapacitatedGraph, f: Flow, s: Hashable) -> frozenset:
    """Vertices reachable from ``s`` along arcs of positive residual capacity.

    The residual capacity of ``(u, v)`` is ``c(u,v) - f(u,v) + f(v,u)``: an
    arc is usable if it has spare capacity or if flow on the reverse arc can
    be pushed back.
    """
    V = G.vertices
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in V:
            if v in seen or v == u:
                continue
            if G.capacity(u, v) - f[u, v] + f[v, u] > 0:
                seen.add(v)
                queue.append(v)
    return frozenset(seen)


def canonical_min_cut(G: CapacitatedGraph, s: Hashable, t: Hashable, backend: str = "lp") -> Cut:
    """The inclusion-minimal minimum ``(s, t)``-cut.

    Computed as the residual-reachable set of a normalised maximum flow, which
    equals the intersection of all minimum cuts whatever flow is used.
    """
    f = normalize_flow(max_flow(G, s, t, backend))
    return Cut(G, residual_reachable(G, f, s))
