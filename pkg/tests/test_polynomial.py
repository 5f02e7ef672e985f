import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import ConfigurationError, MultiPoly, PreconditionError, parse_poly
from dunkl.polynomial import monomials
from dunkl.scalars import Q, fmt


def test_parse_and_print():
    p = parse_poly("3/2 x1^2 x3 - x2 + 4", 3)
    assert p.coefficient((2, 0, 1)) == Q("3/2")
    assert p.coefficient((0, 1, 0)) == -1
    assert p.coefficient((0, 0, 0)) == 4
    assert parse_poly(p.to_text(), 3) == p


def test_parse_accepts_star():
    assert parse_poly("x1^3*x2", 2) == parse_poly("x1^3 x2", 2)


@pytest.mark.parametrize("bad", ["", "x0", "x1 ^", "y2"])
def test_parse_errors(bad):
    with pytest.raises(ConfigurationError):
        parse_poly(bad, 2)


def test_monomial_counts():
    # C(n + N - 1, N - 1)
    assert len(monomials(3, 4)) == 15
    assert len(monomials(2, 6)) == 7
    assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))


def test_arithmetic_and_eval():
    x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    p = (x + y) ** 3 - x * y * 3 * (x + y)
    assert p == x ** 3 + y ** 3
    assert p.eval((Q(1), Q(2))) == 9
    assert p.eval_many(np.array([[1.0, 2.0], [0.5, -1.0]])).tolist() == pytest.approx([9.0, -0.875])


def test_partial_and_euler():
    p = parse_poly("x1^3 x2 + 2 x2^2", 2)
    assert p.partial_i(0) == parse_poly("3 x1^2 x2", 2)
    assert p.euler() == parse_poly("4 x1^3 x2 + 4 x2^2", 2)


def test_divide_by_linear():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    q = x ** 2 + y * 3 - 1
    p = (x - y) * q
    assert p.divide_by_linear((Q(1), Q(-1))) == q
    with pytest.raises(PreconditionError):
        (p + 1).divide_by_linear((Q(1), Q(-1)))


def test_compose_and_group_action():
    swap = ((Q(0), Q(1)), (Q(1), Q(0)))
    p = parse_poly("x1^2 x2", 2)
    assert p.act(swap) == parse_poly("x1 x2^2", 2)


def test_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        MultiPoly(2, {(1, 0, 0): 1})


def test_fmt():
    assert fmt(Q("6/4")) == "3/2"
    assert fmt(Q(5)) == "5"
    assert fmt(0.25) == "0.25"


small = st.integers(-3, 3)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, small, max_size=5).map(lambda d: MultiPoly(2, {e: Q(c) for e, c in d.items()}))


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == MultiPoly.zero(2)


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.tuples(small, small))
def test_eval_is_a_ring_homomorphism(p, q, pt):
    x = tuple(Q(c) for c in pt)
    assert (p * q).eval(x) == p.eval(x) * q.eval(x)
    assert (p + q).eval(x) == p.eval(x) + q.eval(x)


@settings(max_examples=60, deadline=None)
@given(polys, st.tuples(small, small).filter(any))
def test_multiply_then_divide(p, a):
    alpha = tuple(Q(c) for c in a)
    lin = MultiPoly.linear_form(alpha)
    assert (lin * p).divide_by_linear(alpha) == p


@settings(max_examples=60, deadline=None)
@given(polys)
def test_text_roundtrip(p):
    assert parse_poly(p.to_text(), 2) == p
