"""Explicit polytopes, separation oracles and the ordered-space optimiser.

A separation answer is either :data:`INSIDE` or :class:`Violated`.  Besides the
normal ``c`` (with ``max{c.x : x in P} < c.y``) an oracle may certify a
right-hand side ``bound`` with ``max{c.x : x in P} <= bound < c.y``; the
optimiser uses it as a deep cut when present.

Magnitude bounds used by :func:`optimize_via_oracle_ordered`: if every
constraint of ``P`` in ``Q^k`` has encoding size at most ``phi`` then, after
clearing denominators row by row, every row has l1 norm below ``2^phi``.  By
Cramer's rule and Hadamard's inequality every vertex then has coordinates of
magnitude below ``2^(k*phi)`` with a common denominator below ``2^(k*phi)``,
and the recession cone is generated by integral vectors with entries below
``2^(k*phi)``.  ``vertex_bits`` is that exponent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping, Union

from foldopt.numerics import (
    RationalMatrix,
    RationalVector,
    bit_size,
    denominator_lcm,
    dot,
    inf_norm,
    to_rational,
)
from foldopt.simplex import BoxCuttingLP, solve_lp

log = logging.getLogger(__name__)


class OracleError(RuntimeError):
    """The separation oracle returned an answer that cannot be correct."""


class IterationLimitError(RuntimeError):
    """The cutting-plane loop exceeded its oracle-call cap."""


# -- answers and outcomes ---------------------------------------------------


@dataclass(frozen=True)
class Inside:
    def __repr__(self) -> str:
        return "INSIDE"


INSIDE = Inside()


@dataclass(frozen=True)
class Violated:
    """A separating normal, an optional certified bound and an emptiness flag.

    ``infeasible=True`` certifies that the polytope is empty; the normal is
    then only a placeholder (every inequality is valid on the empty set).
    """

    normal: RationalVector
    bound: Fraction | None = None
    infeasible: bool = False

    def __post_init__(self):
        if self.normal.is_zero():
            raise OracleError("malformed oracle answer: zero normal")


SeparationAnswer = Union[Inside, Violated]


@dataclass(frozen=True)
class Unbounded:
    pass


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Optimal:
    point: RationalVector
    value: Fraction


OptOutcome = Union[Unbounded, Empty, Optimal]


def outcome_name(outcome: OptOutcome) -> str:
    return {Unbounded: "unbounded", Empty: "empty", Optimal: "optimal"}[type(outcome)]


# -- explicit polytopes -----------------------------------------------------


class ExplicitPolytope:
    """``poly(A, b) = {x : Ax <= b}`` over variable labels ``V`` and constraint labels ``C``."""

    def __init__(self, A: RationalMatrix, b: RationalVector):
        if set(A.row_labels) != b.index_set:
            raise ValueError("bound vector must be indexed by the constraint set")
        self.A = A
        self.b = b

    @classmethod
    def from_rows(
        cls,
        variables: Iterable[Hashable],
        rows: Mapping[Hashable, tuple[Mapping[Hashable, Any], Any]],
    ) -> ExplicitPolytope:
        """Build from ``{label: (coefficients, rhs)}``; missing coefficients are 0."""
        variables = tuple(variables)
        A = RationalMatrix(rows.keys(), variables, {r: coeffs for r, (coeffs, _) in rows.items()})
        b = RationalVector((r, rhs) for r, (_, rhs) in rows.items())
        return cls(A, b)

    @property
    def variables(self) -> tuple:
        return self.A.col_labels

    @property
    def constraints(self) -> tuple:
        return self.A.row_labels

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExplicitPolytope):
            return NotImplemented
        return self.A == other.A and self.b == other.b

    def __repr__(self) -> str:
        return f"ExplicitPolytope(|V|={len(self.variables)}, |C|={len(self.constraints)})"

    def contains(self, y: RationalVector) -> bool:
        return all(dot(self.A.row(r), y) <= self.b[r] for r in self.constraints)

    def facet_size(self) -> int:
        """Largest encoding size of a constraint ``(a_i; b_i)``."""
        sizes = [
            bit_size(self.A.row(r)) + bit_size(RationalVector({None: self.b[r]}))
            for r in self.constraints
        ]
        return max(sizes, default=bit_size(RationalVector.zeros(self.variables)))

    def relabel(self, var_map: Mapping, con_map: Mapping | None = None) -> ExplicitPolytope:
        con_map = con_map or {r: r for r in self.constraints}
        rows = {
            con_map[r]: (self.A.row(r).relabel(var_map), self.b[r]) for r in self.constraints
        }
        return ExplicitPolytope.from_rows([var_map[v] for v in self.variables], rows)


def _check_index(P: ExplicitPolytope, y: RationalVector) -> None:
    if y.index_set != frozenset(P.variables):
        raise ValueError("index-set mismatch between point and polytope variables")


def sum_of_violated(
    rows: Iterable[tuple[RationalVector, Fraction]], y: RationalVector
) -> Violated | None:
    """Sum every row ``a.x <= beta`` with ``a.y > beta``, rescaled to inf-norm 1.

    When the violated rows sum to the zero vector the system is infeasible and
    the answer carries ``infeasible=True`` with the all-ones normal.
    """
    total: dict[Hashable, Fraction] | None = None
    rhs = Fraction(0)
    for a, beta in rows:
        if dot(a, y) > beta:
            if total is None:
                total = dict(a)
            else:
                for k, v in a.items():
                    total[k] += v
            rhs += beta
    if total is None:
        return None
    normal = RationalVector(total)
    if normal.is_zero():
        # 0 = sum(a) . x <= sum(beta) < 0 has no solution
        return Violated(RationalVector.constant(y.index, 1), None, infeasible=True)
    scale = inf_norm(normal)
    return Violated(normal.scale(1 / scale), rhs / scale)


def separate_explicit(P: ExplicitPolytope, y: RationalVector) -> SeparationAnswer:
    """Canonical separation for an explicit polytope.

    Returns :data:`INSIDE` when ``Ay <= b``; otherwise the sum of all violated
    rows scaled to infinity norm 1, together with the matching summed bound.
    The summed inequality is valid for ``P`` and strictly violated by ``y``.
    """
    _check_index(P, y)
    ans = sum_of_violated(((P.A.row(r), P.b[r]) for r in P.constraints), y)
    return INSIDE if ans is None else ans


def _explicit_lp_data(P: ExplicitPolytope):
    """Dense data for :func:`solve_lp`, folding rows ``-a x_j <= 0`` into sign flags."""
    order = P.variables
    pos = {v: j for j, v in enumerate(order)}
    nonneg = [False] * len(order)
    A, b = [], []
    for r in P.constraints:
        row = P.A.row(r)
        support = [v for v in order if row[v] != 0]
        if len(support) == 1 and P.b[r] == 0 and row[support[0]] < 0:
            nonneg[pos[support[0]]] = True
            continue
        A.append(row.values_in(order))
        b.append(P.b[r])
    return order, A, b, nonneg


def optimize_explicit(P: ExplicitPolytope, c: RationalVector) -> OptOutcome:
    """Maximise ``c.x`` over ``poly(A, b)`` with the exact two-phase simplex."""
    _check_index(P, c)
    order, A, b, nonneg = _explicit_lp_data(P)
    res = solve_lp(c.values_in(order), A, b, nonneg)
    if res.status == "infeasible":
        return Empty()
    if res.status == "unbounded":
        return Unbounded()
    point = RationalVector(zip(order, res.x))
    return Optimal(point, res.value)


# -- oracles ----------------------------------------------------------------


class SeparationOracle:
    """A separation oracle for a well-described polytope.

    Subclasses implement :meth:`separate`.  ``size_bound`` is the declared
    facet complexity; ``vertex_bits`` defaults to ``len(variables) * size_bound``
    (see the module docstring) and may be overridden by oracles that know a
    tighter bound.
    """

    def __init__(self, variables: Iterable[Hashable], size_bound: int, vertex_bits: int | None = None):
        self.variables = tuple(variables)
        if size_bound < 1:
            raise ValueError("size bound must be positive")
        self.size_bound = size_bound
        self.vertex_bits = vertex_bits if vertex_bits is not None else len(self.variables) * size_bound
        self.calls = 0

    def separate(self, y: RationalVector) -> SeparationAnswer:
        raise NotImplementedError

    def __call__(self, y: RationalVector) -> SeparationAnswer:
        self.calls += 1
        return self.separate(y)


class ExplicitOracle(SeparationOracle):
    """Separation oracle for an explicit polytope via :func:`separate_explicit`."""

    def __init__(self, P: ExplicitPolytope):
        super().__init__(P.variables, max(P.facet_size(), 1))
        self.polytope = P
        self._rows = [(P.A.row(r), P.b[r]) for r in P.constraints]

    def separate(self, y: RationalVector) -> SeparationAnswer:
        _check_index(self.polytope, y)
        ans = sum_of_violated(self._rows, y)
        return INSIDE if ans is None else ans


class FunctionOracle(SeparationOracle):
    """Wrap a plain callable ``y -> SeparationAnswer``."""

    def __init__(self, variables, fn: Callable[[RationalVector], SeparationAnswer], size_bound: int,
                 vertex_bits: int | None = None):
        super().__init__(variables, size_bound, vertex_bits)
        self._fn = fn

    def separate(self, y: RationalVector) -> SeparationAnswer:
        return self._fn(y)


def fallback_bound(normal: RationalVector, y: RationalVector, vertex_bits: int) -> Fraction:
    """A valid right-hand side for a cut given only its normal.

    ``max{d.x : x in P}`` is attained at a vertex whose common denominator is
    below ``2^vertex_bits``, so it differs from ``d.y`` by at least
    ``1 / (den(d.y) * lcm(den d) * 2^vertex_bits)``.
    """
    dy = dot(normal, y)
    gap = Fraction(1, dy.denominator * denominator_lcm(normal.values()) * (1 << vertex_bits))
    return dy - gap


@dataclass
class CuttingPlaneStats:
    oracle_calls: int = 0
    cuts: int = 0
    history: list = field(default_factory=list)


def box_radius(c: list[Fraction], vertex_bits: int, ray_gap: Fraction) -> tuple[int, Fraction]:
    """Box radius ``R`` and unboundedness threshold ``T`` for objective ``c``.

    ``T = ||c||_1 2^mu`` bounds ``c.v`` over vertices.  If ``P`` is unbounded
    along ``c`` then some vertex ``v`` and integral ray ``r`` (both of
    magnitude below ``2^mu``) give a point ``v + lam r`` inside the box with
    ``c.(v + lam r) > T`` as soon as ``lam > 2T / ray_gap``.
    """
    base = 1 << vertex_bits
    threshold = sum((abs(x) for x in c), Fraction(0)) * base
    lam = 2 * threshold / ray_gap + 1
    radius = base * (int(lam) + 2)
    return radius, threshold


def optimize_via_oracle_ordered(
    oracle: Callable[[RationalVector], SeparationAnswer],
    c: RationalVector,
    *,
    size_bound: int | None = None,
    vertex_bits: int | None = None,
    ray_gap: Fraction | None = None,
    max_iterations: int | None = None,
    stats: CuttingPlaneStats | None = None,
) -> OptOutcome:
    """Linear optimisation over ``[k]`` given only a separation oracle.

    Cutting-plane loop: keep a working LP (a large box plus all cuts so far),
    solve it exactly, query the oracle at the optimum and add the returned cut.
    The loop ends when the working LP is infeasible (``Empty``) or its optimum
    is inside the polytope, in which case the objective value decides between
    ``Optimal`` and ``Unbounded`` (see :func:`box_radius`).

    Args:
        oracle: callable or :class:`SeparationOracle` over ``c.index``.
        c: objective over an ordered index set.
        size_bound: facet complexity; taken from the oracle when omitted.
        vertex_bits: magnitude exponent for vertices and rays; defaults to
            ``oracle.vertex_bits`` or ``k * size_bound``.
        ray_gap: lower bound on ``c.r`` for integral rays with ``c.r > 0``;
            defaults to ``1 / lcm(den c)``.
        max_iterations: oracle-call cap; defaults to ``64 k^2 (phi + k)^2``.

    Raises:
        OracleError: a zero normal, or a cut that does not separate the query.
        IterationLimitError: the cap was reached.
    """
    order = c.index
    k = len(order)
    cvals = c.values_in(order)
    phi = size_bound if size_bound is not None else getattr(oracle, "size_bound", None)
    if phi is None:
        raise ValueError("a declared size bound is required")
    if vertex_bits is None:
        vertex_bits = getattr(oracle, "vertex_bits", None) or k * phi
    if ray_gap is None:
        ray_gap = Fraction(1, denominator_lcm(cvals))
    if max_iterations is None:
        max_iterations = 64 * k * k * (phi + k) ** 2
    stats = stats if stats is not None else CuttingPlaneStats()

    radius, threshold = box_radius(cvals, vertex_bits, ray_gap)
    lp = BoxCuttingLP(cvals, radius)
    while True:
        if not lp.feasible:
            return Empty()
        y = RationalVector(zip(order, lp.point()))
        if stats.oracle_calls >= max_iterations:
            raise IterationLimitError(f"no inside answer after {max_iterations} oracle calls")
        stats.oracle_calls += 1
        ans = oracle(y)
        if isinstance(ans, Inside):
            value = dot(c, y)
            if value > threshold:
                return Unbounded()
            return Optimal(y, value)
        if not isinstance(ans, Violated):
            raise OracleError(f"malformed oracle answer {ans!r}")
        if ans.infeasible:
            return Empty()
        d = ans.normal
        if d.index_set != c.index_set:
            raise OracleError("malformed oracle answer: normal has the wrong index set")
        bound = ans.bound if ans.bound is not None else fallback_bound(d, y, vertex_bits)
        if not dot(d, y) > bound:
            raise OracleError("malformed oracle answer: cut does not separate the query point")
        stats.cuts += 1
        lp.add_cut(d.values_in(order), bound)
