"""Optimisation over an unordered variable set from a separation oracle.

The objective is optimised over the folded polytope in the ordered space
``Q^k`` of an index map ``sigma``.  The folded oracle unfolds each query,
asks the original oracle, and either translates the answer (when it agrees
with ``sigma``) or aborts with a strictly finer index map.  Every abort
restarts the ordered optimiser from scratch, so at most ``|V|`` restarts
happen for a consistent oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable

from foldopt.folding import IndexMap, almost_fold, refine, unfold
from foldopt.numerics import RationalVector, denominator_lcm, dot
from foldopt.polytope import (
    Empty,
    Inside,
    OptOutcome,
    Optimal,
    OracleError,
    SeparationAnswer,
    Unbounded,
    Violated,
    fallback_bound,
    optimize_via_oracle_ordered,
)

TraceSink = Callable[[int, IndexMap, str], None]


class OracleDisagreementError(OracleError):
    """The index map was refined more often than a consistent oracle allows."""


class _Abort(Exception):
    def __init__(self, sigma: IndexMap):
        super().__init__("folded oracle aborted")
        self.sigma = sigma


class FoldedOracle:
    """Separation oracle for the folded polytope under a fixed index map."""

    def __init__(self, oracle, sigma: IndexMap, vertex_bits: int, on_query=None):
        self.oracle = oracle
        self.sigma = sigma
        self.vertex_bits = vertex_bits
        self.on_query = on_query

    def __call__(self, xbar: RationalVector) -> SeparationAnswer:
        y = unfold(xbar, self.sigma)
        ans = self.oracle(y)
        if isinstance(ans, Inside):
            self._note("inside")
            return ans
        if not isinstance(ans, Violated):
            raise OracleError(f"malformed oracle answer {ans!r}")
        if ans.infeasible:
            self._note("cut")
            return Violated(almost_fold(ans.normal, self.sigma), None, infeasible=True)
        refined = refine(self.sigma, ans.normal)
        if refined != self.sigma:
            self._note("abort")
            raise _Abort(refined)
        # d agrees with sigma, so afold(d).xbar = d.y and any bound valid on P stays valid
        bound = ans.bound if ans.bound is not None else fallback_bound(ans.normal, y, self.vertex_bits)
        self._note("cut")
        return Violated(almost_fold(ans.normal, self.sigma), bound)

    def _note(self, event: str) -> None:
        if self.on_query is not None:
            self.on_query(self.sigma, event)


def folded_size_bound(k: int, n: int, phi: int) -> int:
    """Facet-size bound ``48 k^3 n^3 phi`` for a folded polytope."""
    return 48 * k**3 * n**3 * phi


def opt_star(
    oracle: Callable[[RationalVector], SeparationAnswer],
    c: RationalVector,
    *,
    size_bound: int | None = None,
    vertex_bits: int | None = None,
    trace: TraceSink | None = None,
) -> OptOutcome:
    """Maximise ``c.x`` over the polytope behind ``oracle``.

    Args:
        oracle: separation oracle over ``c``'s index set, typically a
            :class:`~foldopt.polytope.SeparationOracle`.
        c: objective vector.
        size_bound: facet complexity of the polytope; read from the oracle
            when omitted.
        vertex_bits: magnitude exponent for vertices and rays; read from the
            oracle, or ``|V| * size_bound``.
        trace: optional sink called as ``trace(iteration, sigma, event)`` for
            every folded-oracle query, where ``event`` is ``"abort"``,
            ``"inside"`` or ``"cut"``.

    Returns:
        ``Unbounded``, ``Empty`` or ``Optimal(point, value)``.  An optimal point
        is constant on the classes of the final index map.

    Raises:
        OracleDisagreementError: more than ``|V|`` refinements happened.
    """
    variables = c.index
    n = len(variables)
    phi = size_bound if size_bound is not None else getattr(oracle, "size_bound", None)
    if phi is None:
        raise ValueError("a declared size bound is required")
    if vertex_bits is None:
        vertex_bits = getattr(oracle, "vertex_bits", None) or n * phi
    ray_gap = Fraction(1, denominator_lcm(c.values()))

    counter = [0]

    def on_query(sigma: IndexMap, event: str) -> None:
        counter[0] += 1
        if trace is not None:
            trace(counter[0], sigma, event)

    sigma = refine(IndexMap.constant(variables), c)
    refinements = 0

    def bump(new_sigma: IndexMap) -> IndexMap:
        nonlocal refinements
        refinements += 1
        if refinements > n:
            raise OracleDisagreementError("oracle disagreement overflow")
        return new_sigma

    while True:
        k = sigma.class_count
        folded = FoldedOracle(oracle, sigma, vertex_bits, on_query)
        cbar = almost_fold(c, sigma)
        try:
            outcome = optimize_via_oracle_ordered(
                folded,
                cbar,
                size_bound=folded_size_bound(k, n, phi),
                vertex_bits=vertex_bits,
                ray_gap=ray_gap,
            )
        except _Abort as abort:
            sigma = bump(abort.sigma)
            continue
        if not isinstance(outcome, Optimal):
            return outcome
        y = unfold(outcome.point, sigma)
        ans = oracle(y)
        if isinstance(ans, Inside):
            on_query(sigma, "inside")
            return Optimal(y, dot(c, y))
        if not isinstance(ans, Violated):
            raise OracleError(f"malformed oracle answer {ans!r}")
        refined = refine(sigma, ans.normal)
        if refined == sigma:
            # the same point was reported inside moments ago
            raise OracleError("malformed oracle answer: inconsistent on a repeated query")
        on_query(sigma, "abort")
        sigma = bump(refined)


def relabel_oracle(oracle, mapping: dict[Hashable, Hashable]):
    """The oracle of the relabelled polytope ``pi(P)`` for a bijection ``pi``."""
    inverse = {b: a for a, b in mapping.items()}

    class _Relabelled:
        size_bound = getattr(oracle, "size_bound", None)
        vertex_bits = getattr(oracle, "vertex_bits", None)

        def __call__(self, y: RationalVector) -> SeparationAnswer:
            ans = oracle(y.relabel(inverse))
            if isinstance(ans, Violated):
                return Violated(ans.normal.relabel(mapping), ans.bound, ans.infeasible)
            return ans

    return _Relabelled()
