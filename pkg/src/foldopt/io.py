"""Text formats for LPs, capacitated graphs, marked graphs and matching instances.

All formats are line based.  A ``#`` that starts a token begins a comment
running to the end of the line; blank lines are ignored.  Rationals are
written ``p/q`` or ``p``.

LP::

    lp <|V|> <|C|>
    <variable names>
    a_1 ... a_|V| <= b          (|C| lines)
    max c_1 ... c_|V|

Graph (``sym`` makes every listed edge undirected; ``marked`` only for
marked graphs)::

    graph <|V|> [sym]
    <vertex names>
    u v p/q
    marked v1 v2 ...

Matching (edge weight defaults to 1, bounds to 1)::

    match <|V|> <|E|>
    <vertex names>
    u v [c]                     (|E| lines)
    b v k
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from foldopt.flow import CapacitatedGraph
from foldopt.matching import MatchingInstance
from foldopt.numerics import RationalVector, format_rational, parse_rational
from foldopt.oddcut import MarkedGraph
from foldopt.polytope import ExplicitPolytope


class ParseError(ValueError):
    """Malformed input; ``line`` is 1-based (0 when the input ended early)."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        where = f"line {line}" if line else "end of input"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class LPInstance:
    polytope: ExplicitPolytope
    objective: RationalVector


def _lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        tokens = []
        for tok in raw.split():
            if tok.startswith("#"):
                break
            tokens.append(tok)
        if tokens:
            out.append((no, tokens))
    return out


class _Reader:
    def __init__(self, text: str):
        self.lines = _lines(text)
        self.pos = 0

    def next(self, what: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.lines):
            raise ParseError(0, f"expected {what}")
        item = self.lines[self.pos]
        self.pos += 1
        return item

    def peek(self) -> tuple[int, list[str]] | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def done(self) -> bool:
        return self.pos >= len(self.lines)


def _count(no: int, tok: str, what: str) -> int:
    if not tok.isdigit():
        raise ParseError(no, f"{what} must be a nonnegative integer, got {tok!r}")
    return int(tok)


def _rational(no: int, tok: str) -> Fraction:
    try:
        return parse_rational(tok)
    except ValueError as exc:
        raise ParseError(no, str(exc)) from None


def _names(reader: _Reader, n: int, what: str) -> list[str]:
    if n == 0:
        return []
    no, toks = reader.next(f"{n} {what} names")
    if len(toks) != n:
        raise ParseError(no, f"expected {n} {what} names, got {len(toks)}")
    if len(set(toks)) != n:
        raise ParseError(no, f"duplicate {what} name")
    return toks


def _header(reader: _Reader, keyword: str) -> tuple[int, list[str]]:
    no, toks = reader.next(f"'{keyword}' header")
    if toks[0] != keyword:
        raise ParseError(no, f"expected '{keyword}' header, got {toks[0]!r}")
    return no, toks


# -- LP ---------------------------------------------------------------------


def parse_lp(text: str) -> LPInstance:
    reader = _Reader(text)
    no, toks = _header(reader, "lp")
    if len(toks) != 3:
        raise ParseError(no, "header must be 'lp <|V|> <|C|>'")
    n = _count(no, toks[1], "|V|")
    m = _count(no, toks[2], "|C|")
    names = _names(reader, n, "variable")
    rows = {}
    for i in range(m):
        no, toks = reader.next(f"constraint {i + 1} of {m}")
        if len(toks) != n + 2 or toks[n] != "<=":
            raise ParseError(no, f"constraint must be {n} coefficients, '<=', and a bound")
        coeffs = {v: _rational(no, t) for v, t in zip(names, toks[:n])}
        rows[i] = (coeffs, _rational(no, toks[n + 1]))
    no, toks = reader.next("objective line")
    if toks[0] != "max" or len(toks) != n + 1:
        raise ParseError(no, f"objective must be 'max' followed by {n} coefficients")
    objective = RationalVector((v, _rational(no, t)) for v, t in zip(names, toks[1:]))
    if not reader.done():
        raise ParseError(reader.peek()[0], "unexpected content after objective")
    return LPInstance(ExplicitPolytope.from_rows(names, rows), objective)


def write_lp(inst: LPInstance) -> str:
    P = inst.polytope
    names = [str(v) for v in P.variables]
    lines = [f"lp {len(names)} {len(P.constraints)}", " ".join(names)]
    for r in P.constraints:
        coeffs = " ".join(format_rational(q) for q in P.A.row(r).values_in(P.variables))
        lines.append(f"{coeffs} <= {format_rational(P.b[r])}".lstrip())
    obj = " ".join(format_rational(q) for q in inst.objective.values_in(P.variables))
    lines.append(f"max {obj}".rstrip())
    return "\n".join(lines) + "\n"


# -- graphs -----------------------------------------------------------------


def _parse_graph_body(text: str, allow_marked: bool) -> tuple[CapacitatedGraph, frozenset | None]:
    reader = _Reader(text)
    no, toks = _header(reader, "graph")
    if len(toks) not in (2, 3) or (len(toks) == 3 and toks[2] != "sym"):
        raise ParseError(no, "header must be 'graph <|V|> [sym]'")
    n = _count(no, toks[1], "|V|")
    symmetric = len(toks) == 3
    names = _names(reader, n, "vertex")
    vset = set(names)
    caps: dict[tuple, Fraction] = {}
    marked = None
    while not reader.done():
        no, toks = reader.next("edge")
        if toks[0] == "marked":
            if not allow_marked:
                raise ParseError(no, "'marked' line in a plain graph")
            if marked is not None:
                raise ParseError(no, "repeated 'marked' line")
            unknown = [v for v in toks[1:] if v not in vset]
            if unknown:
                raise ParseError(no, f"unknown marked vertex {unknown[0]!r}")
            if len(set(toks[1:])) != len(toks) - 1:
                raise ParseError(no, "vertex marked twice")
            marked = frozenset(toks[1:])
            continue
        if len(toks) != 3:
            raise ParseError(no, "edge line must be 'u v capacity'")
        u, v, q = toks
        for w in (u, v):
            if w not in vset:
                raise ParseError(no, f"unknown vertex {w!r}")
        cap = _rational(no, q)
        if cap < 0:
            raise ParseError(no, "capacity must be nonnegative")
        key = frozenset((u, v)) if symmetric else (u, v)
        if key in caps:
            raise ParseError(no, f"edge {u} {v} listed twice")
        caps[key] = cap
    pairs = {tuple(k) if not symmetric else _pair(k): q for k, q in caps.items()}
    try:
        graph = CapacitatedGraph(names, pairs, symmetric=symmetric)
    except ValueError as exc:  # pragma: no cover - checked line by line above
        raise ParseError(0, str(exc)) from None
    return graph, marked


def _pair(key: frozenset) -> tuple:
    items = tuple(key)
    return items if len(items) == 2 else items * 2


def parse_graph(text: str) -> CapacitatedGraph:
    return _parse_graph_body(text, allow_marked=False)[0]


def parse_marked_graph(text: str) -> MarkedGraph:
    graph, marked = _parse_graph_body(text, allow_marked=True)
    if not graph.symmetric:
        raise ParseError(1, "marked graphs must be declared 'sym'")
    return MarkedGraph(graph, marked or frozenset())


def write_graph(G: CapacitatedGraph) -> str:
    header = f"graph {len(G.vertices)}" + (" sym" if G.symmetric else "")
    lines = [header, " ".join(map(str, G.vertices))]
    for u, v, q in G.edges():
        lines.append(f"{u} {v} {format_rational(q)}")
    return "\n".join(lines) + "\n"


def write_marked_graph(G: MarkedGraph) -> str:
    marked = [v for v in G.vertices if v in G.marked]
    return write_graph(G.base) + "marked " + " ".join(map(str, marked)) + "\n"


# -- matching ---------------------------------------------------------------


def parse_matching(text: str) -> MatchingInstance:
    reader = _Reader(text)
    no, toks = _header(reader, "match")
    if len(toks) != 3:
        raise ParseError(no, "header must be 'match <|V|> <|E|>'")
    n = _count(no, toks[1], "|V|")
    m = _count(no, toks[2], "|E|")
    names = _names(reader, n, "vertex")
    vset = set(names)
    edges, weights, seen = {}, {}, set()
    for i in range(m):
        no, toks = reader.next(f"edge {i + 1} of {m}")
        if len(toks) not in (2, 3):
            raise ParseError(no, "edge line must be 'u v [weight]'")
        u, v = toks[:2]
        for w in (u, v):
            if w not in vset:
                raise ParseError(no, f"unknown vertex {w!r}")
        if u == v:
            raise ParseError(no, "loops are not allowed")
        if frozenset((u, v)) in seen:
            raise ParseError(no, f"edge {u} {v} listed twice")
        seen.add(frozenset((u, v)))
        edges[(u, v)] = (u, v)
        if len(toks) == 3:
            q = _rational(no, toks[2])
            if q < 0:
                raise ParseError(no, "weights must be nonnegative")
            weights[(u, v)] = q
    bounds = {}
    while not reader.done():
        no, toks = reader.next("bound line")
        if toks[0] != "b" or len(toks) != 3:
            raise ParseError(no, "expected 'b <vertex> <k>'")
        if toks[1] not in vset:
            raise ParseError(no, f"unknown vertex {toks[1]!r}")
        if toks[1] in bounds:
            raise ParseError(no, f"bound for {toks[1]} given twice")
        bounds[toks[1]] = _count(no, toks[2], "bound")
    return MatchingInstance(tuple(names), edges, bounds, weights)


def write_matching(inst: MatchingInstance) -> str:
    lines = [f"match {len(inst.vertices)} {len(inst.edges)}", " ".join(map(str, inst.vertices))]
    for e, (u, v) in inst.edges.items():
        w = inst.c[e]
        lines.append(f"{u} {v}" + ("" if w == 1 else f" {format_rational(w)}"))
    for v in inst.vertices:
        if inst.b[v] != 1:
            lines.append(f"b {v} {inst.b[v]}")
    return "\n".join(lines) + "\n"


def matching_from_graph(G: CapacitatedGraph) -> MatchingInstance:
    """Unit-bound, unit-weight instance on the positive-capacity edges of ``G``."""
    pairs = []
    seen = set()
    for u, v, _ in G.edges():
        key = frozenset((u, v))
        if key not in seen:
            seen.add(key)
            pairs.append((u, v))
    return MatchingInstance.from_edge_list(G.vertices, pairs)


def parse_any_matching(text: str) -> MatchingInstance:
    """Accept either the matching format or a graph file (unit bounds and weights)."""
    first = next(iter(_lines(text)), None)
    if first is not None and first[1][0] == "graph":
        return matching_from_graph(parse_graph(text))
    return parse_matching(text)


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def names_in_order(order: Iterable, members: Iterable) -> list:
    members = set(members)
    return [v for v in order if v in members]
