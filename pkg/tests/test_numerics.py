from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldopt.numerics import (
    RationalMatrix,
    RationalVector,
    bit_size,
    dot,
    format_rational,
    inf_norm,
    parse_rational,
    rational_size,
)

rationals = st.builds(F, st.integers(-1000, 1000), st.integers(1, 100))


def vec(*xs):
    return RationalVector.from_sequence(xs)


def test_inf_norm_examples():
    assert inf_norm(vec(F(1, 2), -3, 2)) == 3
    assert inf_norm(RationalVector.zeros("abc")) == 0
    assert inf_norm(vec(F(-5, 2), F(5, 2))) == F(5, 2)


def test_inf_norm_empty_vector_raises():
    with pytest.raises(ValueError, match="empty vector"):
        inf_norm(RationalVector())


def test_bit_size_examples():
    zero = RationalVector.zeros("uvw")
    assert bit_size(zero) == 3 * rational_size(F(0)) >= 3
    assert bit_size(vec(1)) == rational_size(F(1)) == 3
    assert bit_size(vec(F(3, 2), 1, 1)) > bit_size(vec(F(3, 2), 1))


def test_dot_examples():
    assert dot(vec(1, 2), vec(3, 4)) == 11
    assert dot(vec(5, 7), RationalVector.zeros([0, 1])) == 0
    assert dot(vec(*[F(1, 3)] * 3), vec(1, 1, 1)) == 1


def test_dot_rejects_mismatched_index():
    with pytest.raises(ValueError, match="mismatch"):
        dot(vec(1, 2), RationalVector({"a": 1, "b": 2}))


def test_floats_are_refused():
    with pytest.raises(TypeError):
        RationalVector({"a": 0.5})


def test_rational_literals():
    assert parse_rational("-3/4") == F(-3, 4)
    assert parse_rational("7") == 7
    for bad in ["0.5", "1/0", "1/-2", "abc", ""]:
        with pytest.raises(ValueError):
            parse_rational(bad)
    assert format_rational(F(6, 4)) == "3/2"
    assert format_rational(F(-4, 2)) == "-2"


def test_vector_equality_ignores_label_order():
    assert RationalVector({"a": 1, "b": 2}) == RationalVector({"b": 2, "a": 1})
    assert hash(RationalVector({"a": 1, "b": 2})) == hash(RationalVector({"b": 2, "a": 1}))


def test_matrix_rows_are_total():
    A = RationalMatrix(["r", "s"], ["x", "y"], {"r": {"x": 2}})
    assert A.row("s") == RationalVector({"x": 0, "y": 0})
    assert A["r", "x"] == 2
    assert A.apply(RationalVector({"x": 1, "y": 5})) == RationalVector({"r": 2, "s": 0})


@given(st.lists(rationals, min_size=1, max_size=6))
def test_inf_norm_zero_iff_zero_vector(xs):
    v = vec(*xs)
    assert (inf_norm(v) == 0) == v.is_zero()


@given(st.lists(st.tuples(rationals, rationals, rationals), min_size=1, max_size=6), rationals)
def test_dot_is_bilinear(triples, alpha):
    u = vec(*[t[0] for t in triples])
    w = vec(*[t[1] for t in triples])
    v = vec(*[t[2] for t in triples])
    assert dot(alpha * u + w, v) == alpha * dot(u, v) + dot(w, v)


@given(rationals, rationals)
def test_fraction_results_are_reduced(p, q):
    from math import gcd

    for r in (p + q, p - q, p * q) + ((p / q,) if q else ()):
        assert gcd(r.numerator, r.denominator) == 1 and r.denominator > 0


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_rational_size_is_monotone(a, b):
    lo, hi = sorted((a, b))
    assert rational_size(F(lo)) <= rational_size(F(hi))
