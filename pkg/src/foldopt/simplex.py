"""Exact rational simplex on an integer tableau.

Every tableau row is a list of ints with its own positive denominator, so a
cell's value is ``rows[i][j] / dens[i]``.  The last row is the objective row
holding reduced costs ``z_j - c_j`` of a maximisation problem, and its last
entry is the current objective value.  Pivoting is delegated to
:mod:`foldopt._kernels`.

Column choice follows Bland's smallest-index rule in both the primal and the
dual simplex, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from foldopt import _kernels


class LPError(RuntimeError):
    pass


def _integer_row(values: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    row = [v.numerator * (den // v.denominator) for v in values]
    g = gcd(den, *row)
    if g > 1:
        row = [x // g for x in row]
        den //= g
    return row, den


class Tableau:
    """Simplex tableau in canonical form with respect to ``basis``."""

    def __init__(self, rows: list[list[int]], dens: list[int], basis: list[int]):
        if len(rows) != len(basis) + 1:
            raise ValueError("tableau needs one row per basic variable plus the objective")
        self.rows = rows
        self.dens = dens
        self.basis = basis
        self.blocked: set[int] = set()
        self.pivots = 0

    @property
    def m(self) -> int:
        return len(self.basis)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) - 1

    def value(self) -> Fraction:
        return Fraction(self.rows[-1][-1], self.dens[-1])

    def rhs(self, i: int) -> Fraction:
        return Fraction(self.rows[i][-1], self.dens[i])

    def column_values(self) -> list[Fraction]:
        out = [Fraction(0)] * self.ncols
        for i, b in enumerate(self.basis):
            out[b] = self.rhs(i)
        return out

    def pivot(self, r: int, p: int) -> None:
        _kernels.pivot(self.rows, self.dens, r, p)
        self.basis[r] = p
        self.pivots += 1

    def primal(self, max_pivots: int | None = None) -> str:
        """Run the primal simplex from a feasible basis; 'optimal' or 'unbounded'."""
        obj = self.rows[-1]
        while True:
            obj = self.rows[-1]
            p = next((j for j in range(self.ncols) if obj[j] < 0 and j not in self.blocked), None)
            if p is None:
                return "optimal"
            r = None
            best_num = best_den = 0
            for i in range(self.m):
                a = self.rows[i][p]
                if a <= 0:
                    continue
                num = self.rows[i][-1]
                if r is None:
                    take = True
                else:
                    lhs, rhs_ = num * best_den, best_num * a
                    take = lhs < rhs_ or (lhs == rhs_ and self.basis[i] < self.basis[r])
                if take:
                    r, best_num, best_den = i, num, a
            if r is None:
                return "unbounded"
            self.pivot(r, p)
            if max_pivots is not None and self.pivots > max_pivots:
                raise LPError("pivot limit exceeded")

    def dual(self) -> str:
        """Run the dual simplex from a dual-feasible basis; 'optimal' or 'infeasible'."""
        while True:
            r = None
            for i in range(self.m):
                if self.rows[i][-1] < 0 and (r is None or self.basis[i] < self.basis[r]):
                    r = i
            if r is None:
                return "optimal"
            row = self.rows[r]
            obj = self.rows[-1]
            p = None
            best_num = best_den = 0
            for j in range(self.ncols):
                a = row[j]
                if a >= 0 or j in self.blocked:
                    continue
                num, den = obj[j], -a
                if p is None or num * best_den < best_num * den:
                    p, best_num, best_den = j, num, den
            if p is None:
                return "infeasible"
            self.pivot(r, p)

    def add_column(self, entries: dict[int, int] | None = None) -> int:
        """Append a column (zero except ``entries`` by row); returns its index."""
        entries = entries or {}
        for i, row in enumerate(self.rows):
            row.insert(len(row) - 1, entries.get(i, 0))
        return self.ncols - 1

    def add_row(self, values: Sequence[Fraction], slack: bool = True) -> int:
        """Append the constraint ``values[:-1] . x (+ s) = values[-1]``.

        ``values`` are over the current columns.  A fresh slack column becomes
        basic for the new row; the row is then rewritten in terms of the
        nonbasic columns.  Returns the new row index.
        """
        row, den = _integer_row(values)
        if slack:
            self.add_column()
            row.insert(len(row) - 1, den)
            col = self.ncols - 1
        else:
            raise ValueError("rows without a basic slack are not supported")
        row, den = _kernels.eliminate(row, den, self.rows, self.dens, self.basis)
        self.rows.insert(self.m, row)
        self.dens.insert(self.m, den)
        self.basis.append(col)
        return self.m - 1

    def drop_row(self, i: int) -> None:
        del self.rows[i]
        del self.dens[i]
        del self.basis[i]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "unbounded" or "infeasible"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def solve_lp(
    c: Sequence[Fraction],
    A: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    nonneg: Sequence[bool] | None = None,
) -> LPResult:
    """Maximise ``c.x`` subject to ``A x <= b``.

    Variables flagged in ``nonneg`` are restricted to ``x_j >= 0``; the rest are
    free and split into a difference of two nonnegative columns.
    """
    n = len(c)
    m = len(A)
    nonneg = list(nonneg) if nonneg is not None else [False] * n
    # column layout: one or two columns per variable, then slacks, then artificials
    cols: list[tuple[int, int]] = []
    for j in range(n):
        cols.append((j, 1))
        if not nonneg[j]:
            cols.append((j, -1))
    nx = len(cols)
    art_rows = [i for i in range(m) if b[i] < 0]
    ncols = nx + m + len(art_rows)

    rows: list[list[int]] = []
    dens: list[int] = []
    basis: list[int] = []
    art_col = {}
    for i in range(m):
        vals = [A[i][j] * s for j, s in cols] + [Fraction(0)] * (ncols - nx) + [b[i]]
        vals[nx + i] = Fraction(1)
        if b[i] < 0:
            vals = [-v for v in vals]
            k = nx + m + len(art_col)
            art_col[i] = k
            vals[k] = Fraction(1)
            basis.append(k)
        else:
            basis.append(nx + i)
        row, den = _integer_row(vals)
        # basic column entry must equal the row denominator
        rows.append(row)
        dens.append(den)

    artificials = set(art_col.values())
    if artificials:
        # maximise -sum(artificials)
        obj = [0] * (ncols + 1)
        obj_den = 1
        for i in art_col:
            obj_den = lcm(obj_den, dens[i])
        for i in art_col:
            scale = obj_den // dens[i]
            for j, x in enumerate(rows[i]):
                obj[j] -= x * scale
        for k in artificials:
            obj[k] = 0
        t = Tableau(rows + [obj], dens + [obj_den], basis)
        t.primal()
        if t.value() < 0:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        i = 0
        while i < t.m:
            if t.basis[i] in artificials:
                row = t.rows[i]
                p = next((j for j in range(ncols) if j not in artificials and row[j] != 0), None)
                if p is None:
                    t.drop_row(i)
                    continue
                t.pivot(i, p)
            i += 1
        t.blocked = set(artificials)
    else:
        t = Tableau(rows + [[0] * (ncols + 1)], dens + [1], basis)

    # phase two objective row: z_j - c_j expressed through the current basis
    cost = [Fraction(0)] * ncols
    for k, (j, s) in enumerate(cols):
        cost[k] = c[j] * s
    obj_vals = [-x for x in cost] + [Fraction(0)]
    for i, bcol in enumerate(t.basis):
        cb = cost[bcol]
        if cb:
            d = t.dens[i]
            row = t.rows[i]
            for j in range(ncols + 1):
                if row[j]:
                    obj_vals[j] += cb * Fraction(row[j], d)
    for k in artificials:
        obj_vals[k] = Fraction(0)
    t.rows[-1], t.dens[-1] = _integer_row(obj_vals)

    status = t.primal()
    if status == "unbounded":
        return LPResult("unbounded")
    colvals = t.column_values()
    x = [Fraction(0)] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * colvals[k]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", tuple(x), value)


class BoxCuttingLP:
    """Working LP ``max c.x`` over the box ``[-R, R]^k`` plus added cuts.

    Internally ``x' = x + R >= 0``; the box upper bounds are rows
    ``x'_j <= 2R``.  Each cut is appended to the optimal tableau and the
    dual simplex restores optimality.
    """

    def __init__(self, c: Sequence[Fraction], radius: int):
        k = len(c)
        self.k = k
        self.radius = radius
        ncols = 2 * k
        rows = []
        for j in range(k):
            row = [0] * (ncols + 1)
            row[j] = 1
            row[k + j] = 1
            row[-1] = 2 * radius
            rows.append(row)
        obj, obj_den = _integer_row([-Fraction(x) for x in c] + [Fraction(0)] * k + [Fraction(0)])
        self.t = Tableau(rows + [obj], [1] * k + [obj_den], [k + j for j in range(k)])
        self.feasible = True
        status = self.t.primal()
        if status != "optimal":  # pragma: no cover - box keeps the LP bounded
            raise LPError("box LP unexpectedly unbounded")

    @property
    def cuts(self) -> int:
        return self.t.m - self.k

    def point(self) -> tuple[Fraction, ...]:
        vals = self.t.column_values()
        return tuple(vals[j] - self.radius for j in range(self.k))

    def add_cut(self, normal: Sequence[Fraction], bound: Fraction) -> bool:
        """Add ``normal . x <= bound``; returns False if the LP became infeasible."""
        shift = sum(normal, Fraction(0)) * self.radius
        vals = list(normal) + [Fraction(0)] * (self.t.ncols - self.k) + [bound + shift]
        self.t.add_row(vals)
        if self.t.dual() == "infeasible":
            self.feasible = False
        return self.feasible
