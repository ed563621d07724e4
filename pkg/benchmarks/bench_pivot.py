"""Compare the compiled and pure-Python pivot kernels.

Run with ``python3 benchmarks/bench_pivot.py``.  Reports the time of dense
random LP solves (pivot-bound) and of flow-LP solves through the labelled
polytope API (dominated by model construction).
"""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

from foldopt import _kernels
from foldopt._kernels import _pivot_py
from foldopt.flow import CapacitatedGraph, max_flow
from foldopt.simplex import solve_lp


def run_dense(seed: int, count: int, size: int) -> float:
    """Random packing LPs ``max 1.x, A x <= b, x >= 0`` with small entries."""
    rng = random.Random(seed)
    problems = []
    for _ in range(count):
        A = [[Fraction(rng.randint(0, 4)) for _ in range(size)] for _ in range(size)]
        b = [Fraction(rng.randint(5, 20)) for _ in range(size)]
        problems.append(([Fraction(1)] * size, A, b))
    start = time.perf_counter()
    for c, A, b in problems:
        solve_lp(c, A, b, [True] * size)
    return time.perf_counter() - start


def run_flows(seed: int, count: int, n: int) -> float:
    rng = random.Random(seed)
    graphs = []
    for _ in range(count):
        V = list(range(n))
        caps = {(u, v): rng.choice([0, 1, 2, 3]) for u in V for v in V if u != v}
        graphs.append(CapacitatedGraph(V, caps))
    start = time.perf_counter()
    for G in graphs:
        max_flow(G, 0, n - 1, "lp")
    return time.perf_counter() - start


def with_kernel(module, fn, *args):
    saved = _kernels.pivot, _kernels.eliminate
    _kernels.pivot, _kernels.eliminate = module.pivot, module.eliminate
    try:
        return fn(*args)
    finally:
        _kernels.pivot, _kernels.eliminate = saved


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=25, help="rows and columns of the dense LPs")
    parser.add_argument("--dense", type=int, default=10, help="number of dense LPs")
    parser.add_argument("--graphs", type=int, default=20)
    parser.add_argument("--vertices", type=int, default=8)
    args = parser.parse_args()

    try:
        from foldopt._kernels import _pivot as compiled
    except ImportError:
        compiled = None
        print("compiled kernel not built; only the Python kernel is timed")

    kernels = [("python", _pivot_py)] + ([("cython", compiled)] if compiled else [])
    results = {}
    for name, module in kernels:
        t_piv = with_kernel(module, run_dense, 0, args.dense, args.size)
        t_flow = with_kernel(module, run_flows, 1, args.graphs, args.vertices)
        results[name] = (t_piv, t_flow)
        print(f"{name:>7}: dense LPs {t_piv:8.3f} s   flow LPs {t_flow:8.3f} s")
    if len(results) == 2:
        p, c = results["python"], results["cython"]
        print(f"speedup: dense LPs x{p[0] / c[0]:.2f}   flow LPs x{p[1] / c[1]:.2f}")


if __name__ == "__main__":
    main()
