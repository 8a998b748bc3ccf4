"""Unit tests for the sparse rational polynomial kernel."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitension.symbolic import MultiPoly

NVARS = 3


def polys(nvars=NVARS, max_terms=4, max_exp=3):
    exponents = st.tuples(*(st.integers(0, max_exp) for _ in range(nvars)))
    coeffs = st.fractions(
        min_value=Fraction(-4), max_value=Fraction(4), max_denominator=6
    )
    return st.dictionaries(exponents, coeffs, max_size=max_terms).map(
        lambda d: MultiPoly(nvars, d)
    )


def test_zero_coefficients_dropped():
    p = MultiPoly(2, {(1, 0): 3, (0, 1): 0})
    assert list(p.terms) == [(1, 0)]
    assert MultiPoly(2, {(2, 0): 0}).is_zero()


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        MultiPoly(2, {(1, 0, 0): 1})
    with pytest.raises(ValueError):
        MultiPoly.variable(2, 0) + MultiPoly.variable(3, 0)


@settings(max_examples=60, deadline=None)
@given(p=polys(), q=polys(), r=polys())
def test_ring_axioms(p, q, r):
    zero = MultiPoly.zero(NVARS)
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert p + (-p) == zero
    assert p - q == p + (-q)


@settings(max_examples=60, deadline=None)
@given(p=polys(), q=polys())
def test_diff_product_rule(p, q):
    for i in range(NVARS):
        assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


@settings(max_examples=60, deadline=None)
@given(p=polys())
def test_lap_matches_composed_partials(p):
    composed = MultiPoly.zero(NVARS)
    for i in range(NVARS):
        composed = composed + p.diff(i).diff(i)
    assert p.lap() == composed


def test_sum_of_squares_laplacian():
    for m in (1, 2, 5, 9):
        assert MultiPoly.sum_of_squares(m).lap() == MultiPoly.const(m, 2 * m)


def test_euler_operator_scales_by_degree():
    m = 4
    p = (
        MultiPoly.variable(m, 0)
        * MultiPoly.variable(m, 1)
        * MultiPoly.variable(m, 2)
    )
    assert p.x_dot_grad() == p * 3
    mixed = p + MultiPoly.variable(m, 3)
    assert mixed.x_dot_grad() == p * 3 + MultiPoly.variable(m, 3)


def test_homogeneity_queries():
    p = MultiPoly(2, {(2, 0): 1, (0, 2): -1})
    assert p.homogeneous_degree() == 2
    q = p + MultiPoly.const(2, 1)
    assert q.homogeneous_degree() is None
    assert q.total_degree() == 2
    assert MultiPoly.zero(2).total_degree() == -1


def test_leading_monomial_is_graded_lex():
    p = MultiPoly(3, {(1, 2, 0): 1, (0, 0, 3): 5, (2, 0, 0): 7})
    assert p.leading_monomial() == (1, 2, 0)
    with pytest.raises(ValueError):
        MultiPoly.zero(3).leading_monomial()


def test_power_matches_repeated_product():
    p = MultiPoly(2, {(1, 0): 1, (0, 1): -2, (0, 0): 1})
    assert p**0 == MultiPoly.const(2, 1)
    assert p**3 == p * p * p
    with pytest.raises(ValueError):
        p ** (-1)


def test_const_value():
    assert MultiPoly.const(3, Fraction(5, 7)).const_value() == Fraction(5, 7)
    assert MultiPoly.zero(3).const_value() == 0
    with pytest.raises(ValueError):
        MultiPoly.variable(3, 0).const_value()


@settings(max_examples=30, deadline=None)
@given(p=polys())
def test_eval_array_matches_eval_exact(p):
    pts = [(1, 2, 2), (-1, 0, 3), (Fraction(1, 2), Fraction(-3, 2), 1)]
    coords = np.array([[float(c) for c in pt] for pt in pts]).T
    vals = p.eval_array(coords)
    for j, pt in enumerate(pts):
        assert vals[j] == pytest.approx(float(p.eval_exact(pt)), abs=1e-12)


def test_scalar_arithmetic():
    x = MultiPoly.variable(2, 0)
    assert 2 * x - x == x
    assert (x + 1) - 1 == x
    assert x * Fraction(1, 2) + x * Fraction(1, 2) == x
