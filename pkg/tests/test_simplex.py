from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from foldopt import _kernels
from foldopt._kernels import _pivot_py
from foldopt.simplex import BoxCuttingLP, solve_lp
from oracles import bounded_lp_optimum


def random_box_lp(rng, n, m):
    A = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)]
    b = [F(rng.randint(-3, 3)) for _ in range(m)]
    for j in range(n):
        row = [F(0)] * n
        row[j] = F(1)
        A.append(row)
        b.append(F(2))
        A.append([-x for x in row])
        b.append(F(2))
    c = [F(rng.randint(-3, 3)) for _ in range(n)]
    return c, A, b


def test_solve_lp_matches_vertex_enumeration():
    rng = random.Random(11)
    for _ in range(150):
        n, m = rng.randint(1, 3), rng.randint(0, 5)
        c, A, b = random_box_lp(rng, n, m)
        res = solve_lp(c, A, b)
        best = bounded_lp_optimum(A, b, c)
        if best is None:
            assert res.status == "infeasible"
        else:
            assert res.status == "optimal" and res.value == best
            assert all(sum(a * x for a, x in zip(row, res.x)) <= bi for row, bi in zip(A, b))


def test_solve_lp_unbounded_and_infeasible():
    assert solve_lp([F(1)], [[F(-1)]], [F(0)]).status == "unbounded"
    assert solve_lp([F(1)], [[F(1)], [F(-1)]], [F(0), F(-1)]).status == "infeasible"


def test_nonnegative_columns():
    # max x + y, x + y <= 3, x, y >= 0 with sign flags instead of rows
    res = solve_lp([F(1), F(1)], [[F(1), F(1)]], [F(3)], nonneg=[True, True])
    assert res.status == "optimal" and res.value == 3


def test_degenerate_lp_terminates():
    # many constraints tight at the origin
    A = [[F(1), F(1)], [F(1), F(2)], [F(2), F(1)], [F(-1), F(0)], [F(0), F(-1)]]
    b = [F(0)] * 5
    res = solve_lp([F(1), F(1)], A, b)
    assert res.status == "optimal" and res.value == 0


def test_box_cutting_lp_warm_start():
    lp = BoxCuttingLP([F(1), F(1)], 10)
    assert lp.point() == (10, 10)
    assert lp.add_cut([F(1), F(1)], F(3))
    x = lp.point()
    assert x[0] + x[1] == 3
    assert not lp.add_cut([F(-1), F(-1)], F(-4))
    assert not lp.feasible


@pytest.mark.skipif(_kernels.BACKEND != "cython", reason="compiled kernel not built")
def test_compiled_kernel_agrees_with_python_kernel():
    from foldopt._kernels import _pivot

    rng = random.Random(3)
    for trial in range(200):
        m, n = rng.randint(1, 6), rng.randint(2, 8)
        scale = 10 ** rng.randint(0, 22) if trial % 2 else 1
        rows = [[rng.randint(-9, 9) * scale for _ in range(n + 1)] for _ in range(m + 1)]
        dens = [rng.randint(1, 5) for _ in range(m + 1)]
        r1, d1 = [list(r) for r in rows], list(dens)
        r2, d2 = [list(r) for r in rows], list(dens)
        for _ in range(5):
            r = rng.randrange(m + 1)
            cols = [j for j in range(n) if r1[r][j]]
            if not cols:
                continue
            p = rng.choice(cols)
            _pivot.pivot(r1, d1, r, p)
            _pivot_py.pivot(r2, d2, r, p)
            assert (r1, d1) == (r2, d2)
        row = [rng.randint(-5, 5) for _ in range(n + 1)]
        basis = list(range(min(m, n)))
        assert _pivot.eliminate(list(row), 3, r1[: len(basis)], d1, basis) == _pivot_py.eliminate(
            list(row), 3, r2[: len(basis)], d2, basis
        )
