"""Pure-Python pivot kernel for the integer simplex tableau.

A tableau row is a list of Python ints; its rational value is ``row / den``
with ``den > 0``.  Rows are kept gcd-reduced so entries stay small.
"""

from __future__ import annotations

from math import gcd


def pivot(rows: list[list[int]], dens: list[int], r: int, p: int) -> None:
    """Pivot in place on entry ``(r, p)``; ``rows[r][p]`` must be nonzero."""
    prow = rows[r]
    a = prow[p]
    if a < 0:
        prow = [-x for x in prow]
        a = -a
    g = gcd(a, *prow)
    if g > 1:
        prow = [x // g for x in prow]
        a //= g
    rows[r] = prow
    dens[r] = a
    for i in range(len(rows)):
        if i == r:
            continue
        row = rows[i]
        f = row[p]
        if f == 0:
            continue
        new = [a * x - f * y for x, y in zip(row, prow)]
        den = dens[i] * a
        g = gcd(den, *new)
        if g > 1:
            new = [x // g for x in new]
            den //= g
        rows[i] = new
        dens[i] = den


def eliminate(row: list[int], den: int, rows: list[list[int]], dens: list[int],
              basis: list[int]) -> tuple[list[int], int]:
    """Express ``row / den`` in terms of the nonbasic columns of the tableau."""
    for i, b in enumerate(basis):
        f = row[b]
        if f == 0:
            continue
        brow = rows[i]
        a = brow[b]
        row = [a * x - f * y for x, y in zip(row, brow)]
        den = den * a
        g = gcd(den, *row)
        if g > 1:
            row = [x // g for x in row]
            den //= g
    return row, den
