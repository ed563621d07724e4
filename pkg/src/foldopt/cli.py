"""Command-line front end.

Exit status: 0 on success, 1 when the LP is infeasible or the marking has the
wrong parity, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from foldopt.flow import canonical_min_cut, max_flow
from foldopt.io import (
    ParseError,
    names_in_order,
    parse_any_matching,
    parse_graph,
    parse_lp,
    parse_marked_graph,
    read_text,
)
from foldopt.matching import MatchingOracle, has_perfect_matching
from foldopt.numerics import format_rational
from foldopt.oddcut import MarkingParityError, min_odd_marked_cut
from foldopt.optstar import opt_star
from foldopt.polytope import Empty, ExplicitOracle, Optimal, Unbounded, optimize_explicit

EXIT_OK, EXIT_INFEASIBLE, EXIT_MALFORMED = 0, 1, 2


class _Report:
    def __init__(self, args):
        self.args = args
        self.lines: list[str] = []
        self.data: dict = {}
        self.trace: list | None = [] if args.trace else None

    def sink(self, iteration, sigma, event):
        if self.trace is not None:
            classes = [sorted(map(str, members)) for members in sigma.classes]
            self.trace.append({"iteration": iteration, "event": event, "classes": classes})

    def value(self, label: str, q: Fraction) -> None:
        text = f"{label} = {format_rational(q)}"
        if self.args.approx:
            text += f"  (approx {float(q):.6g})"
        self.lines.append(text)
        self.data["value"] = format_rational(q)
        if self.args.approx:
            self.data["approx"] = f"{float(q):.6g}"

    def emit(self, out) -> None:
        if self.args.json:
            if self.trace is not None:
                self.data["trace"] = self.trace
            json.dump(self.data, out, indent=2, ensure_ascii=False)
            out.write("\n")
            return
        if self.trace is not None:
            for item in self.trace:
                classes = " | ".join(" ".join(c) for c in item["classes"])
                out.write(f"trace {item['iteration']} {item['event']}: {classes}\n")
        for line in self.lines:
            out.write(line + "\n")


def _fmt_set(names) -> str:
    return "{" + ", ".join(map(str, names)) + "}"


def _cmd_optimize(args, rep: _Report) -> int:
    inst = parse_lp(read_text(args.file))
    if args.backend == "lp":
        outcome = optimize_explicit(inst.polytope, inst.objective)
    else:
        outcome = opt_star(ExplicitOracle(inst.polytope), inst.objective, trace=rep.sink)
    if isinstance(outcome, Empty):
        rep.data["outcome"] = "empty"
        rep.lines.append("infeasible: the polytope is empty")
        return EXIT_INFEASIBLE
    if isinstance(outcome, Unbounded):
        rep.data["outcome"] = "unbounded"
        rep.lines.append("unbounded")
        return EXIT_OK
    assert isinstance(outcome, Optimal)
    rep.data["outcome"] = "optimal"
    rep.value("optimal value", outcome.value)
    order = inst.polytope.variables
    rep.data["point"] = {str(v): format_rational(outcome.point[v]) for v in order}
    rep.lines.append("point: " + ", ".join(f"{v} = {format_rational(outcome.point[v])}" for v in order))
    return EXIT_OK


def _terminals(args, G):
    names = {str(v): v for v in G.vertices}
    for flag, name in (("--source", args.source), ("--sink", args.sink)):
        if name is None:
            raise ParseError(0, f"{flag} is required")
        if name not in names:
            raise ParseError(0, f"{flag} {name!r} is not a vertex")
    return names[args.source], names[args.sink]


def _flow_backend(args) -> str:
    return args.backend or "lp"


def _cmd_maxflow(args, rep: _Report) -> int:
    G = parse_graph(read_text(args.file))
    s, t = _terminals(args, G)
    f = max_flow(G, s, t, _flow_backend(args))
    rep.data["outcome"] = "optimal"
    rep.value("value", f.value)
    order = {v: i for i, v in enumerate(G.vertices)}
    arcs = sorted(((p, q) for p, q in f.values.items() if q), key=lambda pq: (order[pq[0][0]], order[pq[0][1]]))
    rep.data["flow"] = [[str(u), str(v), format_rational(q)] for (u, v), q in arcs]
    rep.lines.extend(f"flow {u} -> {v} = {format_rational(q)}" for (u, v), q in arcs)
    return EXIT_OK


def _cmd_mincut(args, rep: _Report) -> int:
    G = parse_graph(read_text(args.file))
    s, t = _terminals(args, G)
    cut = canonical_min_cut(G, s, t, _flow_backend(args))
    side = names_in_order(G.vertices, cut.side)
    rep.data["outcome"] = "optimal"
    rep.data["cut"] = [str(v) for v in side]
    rep.lines.append(f"cut = {_fmt_set(side)}")
    rep.value("value", cut.value)
    return EXIT_OK


def _cmd_oddcut(args, rep: _Report) -> int:
    G = parse_marked_graph(read_text(args.file))
    backend = args.backend or "aug"
    try:
        cut, value = min_odd_marked_cut(G, backend)
    except MarkingParityError as exc:
        rep.data["outcome"] = "parity-error"
        rep.lines.append(f"error: {exc}")
        return EXIT_INFEASIBLE
    side = names_in_order(G.vertices, cut.side)
    rep.data["outcome"] = "optimal"
    rep.data["cut"] = [str(v) for v in side]
    rep.lines.append(f"cut = {_fmt_set(side)}")
    rep.value("value", value)
    return EXIT_OK


def _cmd_matching(args, rep: _Report) -> int:
    inst = parse_any_matching(read_text(args.file))
    if inst.edges:
        outcome = opt_star(MatchingOracle(inst, args.backend or "aug"), inst.weight_vector(), trace=rep.sink)
        assert isinstance(outcome, Optimal)
        value = outcome.value
    else:
        value = Fraction(0)
    rep.data["outcome"] = "optimal"
    rep.value("max_matching_value", value)
    unit = all(q == 1 for q in inst.b.values()) and all(q == 1 for q in inst.c.values())
    if unit:
        n = len(inst.vertices)
        perfect = n % 2 == 0 and value == Fraction(n, 2)
        rep.data["perfect"] = perfect
        rep.lines.append(f"perfect = {'true' if perfect else 'false'}")
    return EXIT_OK


COMMANDS = {
    "optimize": (_cmd_optimize, "maximise an explicit LP", ("opt", "lp")),
    "maxflow": (_cmd_maxflow, "maximum (s,t)-flow of a capacitated graph", ("lp", "aug", "sym")),
    "mincut": (_cmd_mincut, "canonical minimum (s,t)-cut", ("lp", "aug", "sym")),
    "oddcut": (_cmd_oddcut, "minimum odd marked cut of a marked symmetric graph", ("lp", "aug")),
    "matching": (_cmd_matching, "maximum b-matching value", ("lp", "aug")),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foldopt", description="Exact LP, flow, cut and matching tools.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, backends) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="input file")
        p.add_argument("--backend", choices=backends, default=None,
                       help=f"solver backend ({', '.join(backends)})")
        p.add_argument("--trace", action="store_true", help="print the index-map refinement trace")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--approx", action="store_true", help="also print a decimal approximation")
        if name in ("maxflow", "mincut"):
            p.add_argument("--source", "-s", help="source vertex")
            p.add_argument("--sink", "-t", help="sink vertex")
    return parser


def run_cli(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = build_parser().parse_args(argv)
    rep = _Report(args)
    handler = COMMANDS[args.command][0]
    try:
        status = handler(args, rep)
    except ParseError as exc:
        err.write(f"{args.file}: {exc}\n")
        return EXIT_MALFORMED
    except OSError as exc:
        err.write(f"{args.file}: {exc.strerror or exc}\n")
        return EXIT_MALFORMED
    except ValueError as exc:
        err.write(f"{args.file}: invalid input: {exc}\n")
        return EXIT_MALFORMED
    rep.emit(out)
    return status


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(run_cli())


if __name__ == "__main__":  # pragma: no cover
    main()
