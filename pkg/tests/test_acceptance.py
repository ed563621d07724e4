"""Acceptance criteria 1 to 9, each at its stated size and time limit."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

from foldopt.flow import CapacitatedGraph, canonical_min_cut, max_flow
from foldopt.folding import IndexMap, almost_fold, fold, unfold
from foldopt.matching import (
    MatchingInstance,
    build_matching_polytope_oracle,
    has_perfect_matching,
    max_b_matching_value,
)
from foldopt.numerics import RationalVector, dot, inf_norm
from foldopt.oddcut import MarkedGraph, min_odd_marked_cut, odd_cut_candidates
from foldopt.optstar import opt_star
from foldopt.polytope import INSIDE, ExplicitOracle, ExplicitPolytope, Optimal, Violated, optimize_explicit

from oracles import (
    basic,
    in_matching_polytope,
    matching_polytope_vertices,
    max_matching_size,
    min_marked_cuts,
    min_odd_marked_value,
    min_st_cuts,
    proper_subsets,
    random_connected_graph,
    random_permutation,
)


def rational(rng, bound=100):
    return F(rng.randint(-bound, bound), rng.randint(1, bound))


def random_index_map(rng, labels):
    raw = [rng.randrange(len(labels)) for _ in labels]
    used = sorted(set(raw))
    return IndexMap({v: used.index(r) for v, r in zip(labels, raw)})


def random_lp(rng):
    n = rng.randint(1, 5)
    V = [f"x{i}" for i in range(n)]
    rows = {j: ({v: rng.randint(-3, 3) for v in V}, rng.randint(-3, 3)) for j in range(rng.randint(1, 10))}
    return ExplicitPolytope.from_rows(V, rows), RationalVector({v: rng.randint(-3, 3) for v in V})


def random_digraph(rng, n, caps, density=0.6):
    V = list(range(n))
    arcs = {(u, v): rng.choice(caps) for u, v in itertools.permutations(V, 2) if rng.random() < density}
    return CapacitatedGraph(V, arcs)


def random_marked_graph(rng, n, caps=(0, 1, 2, 3)):
    V = list(range(n))
    edges = {(u, v): rng.choice(caps) for u, v in itertools.combinations(V, 2)}
    M = frozenset(rng.sample(V, rng.randrange(2, n + 1, 2)))
    return MarkedGraph(CapacitatedGraph(V, edges, symmetric=True), M)


def test_criterion_1_folding_algebra(criterion):
    rng = random.Random(101)
    with criterion(1, "folding identities on 1000 random triples", 5):
        for _ in range(1000):
            labels = [f"v{i}" for i in range(rng.randint(1, 8))]
            sigma = random_index_map(rng, labels)
            x = RationalVector({v: rational(rng) for v in labels})
            per_class = [rational(rng) for _ in range(sigma.class_count)]
            c = RationalVector({v: per_class[sigma[v]] for v in labels})
            assert dot(c, unfold(fold(x, sigma), sigma)) == dot(c, x) == dot(almost_fold(c, sigma), fold(x, sigma))


def test_criterion_2_opt_star_matches_explicit(criterion):
    rng = random.Random(102)
    with criterion(2, "OPT* agrees with explicit optimisation on 200 LPs", 60):
        for _ in range(200):
            P, c = random_lp(rng)
            events = []
            got = opt_star(ExplicitOracle(P), c, trace=lambda i, sigma, event: events.append(event))
            want = optimize_explicit(P, c)
            assert type(got) is type(want)
            if isinstance(want, Optimal):
                assert got.value == want.value
            assert events.count("abort") <= len(P.variables)


def test_criterion_3_max_flow_equals_min_cut(criterion):
    rng = random.Random(103)
    with criterion(3, "max flow equals brute-force min cut on 500 graphs", 60):
        for _ in range(500):
            n = rng.randint(2, 6)
            G = random_digraph(rng, n, (0, 1, 2))
            s, t = rng.sample(range(n), 2)
            best, _ = min_st_cuts(G.vertices, G.arcs(), s, t)
            f = max_flow(G, s, t)
            assert f.is_feasible() and f.value == best


def test_criterion_4_canonical_cut(criterion):
    rng = random.Random(104)
    with criterion(4, "canonical cut is the intersection of minimum cuts on 300 graphs", 120):
        for _ in range(300):
            n = rng.randint(2, 8)
            G = random_digraph(rng, n, (0, 1, 2, 3, F(1, 2)))
            s, t = rng.sample(range(n), 2)
            best, cuts = min_st_cuts(G.vertices, G.arcs(), s, t)
            want = frozenset.intersection(*cuts)
            via_lp = canonical_min_cut(G, s, t, "lp")
            via_aug = canonical_min_cut(G, s, t, "aug")
            assert via_lp.side == via_aug.side == want
            assert via_lp.value == best


def test_criterion_5_min_odd_marked_cut(criterion):
    rng = random.Random(105)
    with criterion(5, "minimum odd marked cut value on 300 marked graphs", 120):
        for _ in range(300):
            G = random_marked_graph(rng, rng.randint(2, 7))
            cut, value = min_odd_marked_cut(G)
            assert value == min_odd_marked_value(G.vertices, G.base.arcs(), G.marked)
            assert G.is_odd_marked_cut(cut.side) and G.value(cut.side) == value


def _uncrossing_holds(G):
    """Basic minimum (s,t)-cuts and basic minimum marked cuts nest, are disjoint, or the latter holds s or t."""
    arcs = G.base.arcs()
    _, mins = min_marked_cuts(G.vertices, arcs, G.marked)
    basic_marked = basic(mins)
    for s, t in itertools.permutations(sorted(G.marked), 2):
        _, st = min_st_cuts(G.vertices, arcs, s, t)
        for C in basic(st):
            for D in basic_marked:
                if not (D <= C or not C & D or {s, t} & D):
                    return False
    return True


def _odd_cut_has_compatible_marked_cut(G):
    """Every basic minimum odd marked cut contains or avoids some minimum marked cut."""
    odd = [C for C in proper_subsets(G.vertices) if G.is_odd_marked_cut(C)]
    best = min(G.value(C) for C in odd)
    _, mins = min_marked_cuts(G.vertices, G.base.arcs(), G.marked)
    return all(any(D <= C or not C & D for D in mins) for C in basic([C for C in odd if G.value(C) == best]))


def test_criterion_6_basic_cut_structure(criterion):
    rng = random.Random(106)
    with criterion(6, "basic cut nesting properties on 200 marked graphs", 120):
        for _ in range(200):
            G = random_marked_graph(rng, rng.randint(2, 6))
            assert _uncrossing_holds(G)
            assert _odd_cut_has_compatible_marked_cut(G)


def _cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


def _petersen():
    return _cycle(5) + [(i, i + 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]


NAMED = {
    "C3": (3, _cycle(3), 1),
    "C5": (5, _cycle(5), 2),
    "K4": (4, list(itertools.combinations(range(4), 2)), 2),
    "Petersen": (10, _petersen(), 5),
}


def test_criterion_7_matching_integrality(criterion):
    rng = random.Random(107)
    corpus = []
    for _ in range(220):
        n = rng.randint(2, 9)
        m = rng.randint(n - 1, min(10, n * (n - 1) // 2))
        corpus.append((n, random_connected_graph(rng, n, m), None))
    corpus += list(NAMED.values())
    with criterion(7, f"b-matching value is the integral optimum on {len(corpus)} graphs", 300):
        for n, edges, expected in corpus:
            want = max_matching_size(range(n), edges)
            if expected is not None:
                assert want == expected
            inst = MatchingInstance.from_edge_list(range(n), edges)
            value = max_b_matching_value(inst)
            assert value == want and value.denominator == 1
            assert has_perfect_matching(inst) == (2 * want == n)


def _random_point(rng, inst):
    """Mostly points with y >= 0 scaled until some degree row is tight; some violate the explicit rows."""
    y = {e: F(rng.choice((0, 1, 1, 1, 2)), 2) for e in inst.edges}
    mode = rng.random()
    if mode < 0.15:
        y[rng.choice(list(inst.edges))] = F(-1, rng.randint(1, 3))
    elif mode < 0.3:
        y = {e: q + rng.randint(0, 2) for e, q in y.items()}
    else:
        load = {v: sum(y[e] for e in inst.incident(v)) for v in inst.vertices}
        ratios = [F(inst.b[v]) / load[v] for v in inst.vertices if load[v]]
        scale = min(ratios, default=F(1))
        y = {e: q * scale for e, q in y.items()}
    return RationalVector(y)


def _meets_explicit_rows(inst, y):
    return all(q >= 0 for q in y.values()) and all(
        sum(y[e] for e in inst.incident(v)) <= inst.b[v] for v in inst.vertices
    )


def test_criterion_8_separation_oracle(criterion):
    rng = random.Random(108)
    odd_set_violations = 0
    with criterion(8, "matching separation agrees with enumeration on 100 points", 120):
        for _ in range(100):
            n = rng.randint(2, 6)
            pairs = list(itertools.combinations(range(n), 2))
            # most instances contain a triangle so that odd-set rows matter
            edges = [(0, 1), (1, 2), (0, 2)] if n >= 3 and rng.random() < 0.7 else []
            rest = [p for p in pairs if p not in edges]
            edges += rng.sample(rest, rng.randint(0 if edges else 1, min(5 - len(edges), len(rest))))
            inst = MatchingInstance.from_edge_list(range(n), edges, b={v: rng.choice((1, 1, 2)) for v in range(n)})
            y = _random_point(rng, inst)
            ans = build_matching_polytope_oracle(inst).separate(y)
            member = in_matching_polytope(inst.vertices, inst.edges, inst.b, y)
            assert (ans is INSIDE) == member
            if isinstance(ans, Violated):
                odd_set_violations += _meets_explicit_rows(inst, y)
                assert inf_norm(ans.normal) == 1
                top = max(
                    sum(ans.normal[e] * q for e, q in v.items())
                    for v in matching_polytope_vertices(inst.vertices, inst.edges, inst.b)
                )
                assert dot(ans.normal, y) > top
        assert odd_set_violations > 0


def test_criterion_9_equivariance(criterion):
    rng = random.Random(109)
    with criterion(9, "relabelling equivariance of all pipelines, 50 instances each", 60):
        for _ in range(50):
            P, c = random_lp(rng)
            pi = random_permutation(rng, P.variables)
            pi = {v: f"r{w}" for v, w in pi.items()}
            base = opt_star(ExplicitOracle(P), c)
            moved = opt_star(ExplicitOracle(P.relabel(pi)), c.relabel(pi))
            assert type(base) is type(moved)
            if isinstance(base, Optimal):
                assert moved.value == base.value and moved.point == base.point.relabel(pi)

        for _ in range(50):
            n = rng.randint(2, 6)
            G = random_digraph(rng, n, (0, 1, 2, F(1, 2)))
            s, t = rng.sample(range(n), 2)
            pi = {v: f"n{w}" for v, w in random_permutation(rng, G.vertices).items()}
            H = G.relabel(pi)
            assert max_flow(H, pi[s], pi[t]).value == max_flow(G, s, t).value
            assert canonical_min_cut(H, pi[s], pi[t]).side == {pi[v] for v in canonical_min_cut(G, s, t).side}

        for _ in range(50):
            G = random_marked_graph(rng, rng.randint(2, 6))
            pi = {v: f"m{w}" for v, w in random_permutation(rng, G.vertices).items()}
            value, sides = odd_cut_candidates(G)
            value2, sides2 = odd_cut_candidates(G.relabel(pi))
            assert value2 == value
            assert sides2 == {frozenset(pi[v] for v in S) for S in sides}
            cut, _ = min_odd_marked_cut(G)
            cut2, value3 = min_odd_marked_cut(G.relabel(pi))
            assert value3 == value and cut2.side in sides2
            if len(sides) == 1:
                assert cut2.side == {pi[v] for v in cut.side}

        for _ in range(50):
            n = rng.randint(2, 6)
            edges = random_connected_graph(rng, n, rng.randint(n - 1, min(8, n * (n - 1) // 2)))
            inst = MatchingInstance.from_edge_list(
                range(n), edges, b={v: rng.randint(1, 2) for v in range(n)}, c={e: rng.randint(0, 3) for e in edges}
            )
            vmap = {v: f"w{u}" for v, u in random_permutation(rng, inst.vertices).items()}
            emap = {e: (vmap[e[0]], vmap[e[1]]) for e in inst.edges}
            assert max_b_matching_value(inst.relabel(vmap, emap)) == max_b_matching_value(inst)
