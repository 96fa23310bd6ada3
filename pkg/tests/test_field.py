from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, strategies as st

from relcirc.field import (
    X, DivisionByZero, PoleAtPoint, Poly, RatFunc, RatFuncSyntaxError, ZeroDenominator,
    format_value, lower, parse_ratfunc, parse_rational, poly_gcd, rf_eval,
)

from conftest import nonzero_ratfuncs, poly_at, polys, rationals, ratfuncs

points = st.integers(min_value=-7, max_value=7).map(Fraction)


def frac_eval(f, t):
    """Evaluate a RatFunc at ``t`` from its coefficients, without the field module."""
    return poly_at(f.num.coeffs, t) / poly_at(f.den.coeffs, t)


def defined(t, *fs):
    return all(poly_at(f.den.coeffs, t) != 0 for f in fs)


# construction and normal form

def test_reduced_form_is_unique():
    f = RatFunc(Poly([-1, 0, 1]), Poly([-1, 1]))  # (x^2-1)/(x-1)
    assert f == X + 1
    assert f.den == Poly([1])


def test_denominator_is_monic():
    f = RatFunc(Poly([1]), Poly([0, 2]))
    assert f.den.lead == 1
    assert f.num == Poly([mpq(1, 2)])


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDenominator):
        RatFunc(Poly([1]), Poly([]))


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        X / RatFunc(0)


def test_pole():
    with pytest.raises(PoleAtPoint):
        rf_eval(1 / X, 0)


def test_lower_collapses_constants():
    assert lower(RatFunc(Poly([3]), Poly([2]))) == mpq(3, 2)
    assert isinstance(lower(X), RatFunc)


def test_gcd_of_coprime_is_one():
    assert poly_gcd(Poly([1, 1]), Poly([-1, 1])) == Poly([1])


# arithmetic against pointwise evaluation

@given(ratfuncs, ratfuncs, points)
def test_add_mul_pointwise(f, g, t):
    assume(defined(t, f, g))
    assert frac_eval(f + g, t) == frac_eval(f, t) + frac_eval(g, t)
    assert frac_eval(f * g, t) == frac_eval(f, t) * frac_eval(g, t)
    assert frac_eval(f - g, t) == frac_eval(f, t) - frac_eval(g, t)


@given(ratfuncs, nonzero_ratfuncs, points)
def test_div_pointwise(f, g, t):
    q = f / g
    assume(defined(t, f, g, q) and frac_eval(g, t) != 0)
    assert frac_eval(q, t) == frac_eval(f, t) / frac_eval(g, t)


@given(ratfuncs, points)
def test_eval_agrees_with_oracle(f, t):
    assume(defined(t, f))
    v = rf_eval(f, mpq(t.numerator, t.denominator))
    assert Fraction(int(v.numerator), int(v.denominator)) == frac_eval(f, t)


# field axioms

@given(ratfuncs, ratfuncs, ratfuncs)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(nonzero_ratfuncs)
def test_inverse(a):
    assert a * a.inverse() == 1
    assert a - a == 0


@given(polys, polys.filter(bool))
def test_poly_divmod(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero or r.degree < b.degree


# printing and parsing

@given(ratfuncs)
def test_print_parse_round_trip(f):
    assert parse_ratfunc(str(f)) == f


@pytest.mark.parametrize("text,expected", [
    ("3", RatFunc(3)),
    ("-1/2", RatFunc(mpq(-1, 2))),
    ("x^2", X * X),
    ("(x+1)/x", (X + 1) / X),
    ("3*x^2 - 1/2*x + 4", X * X * 3 - X / 2 + 4),
    ("1/(x-1) - 1/(x+1)", RatFunc(Poly([2]), Poly([-1, 0, 1]))),
])
def test_parse_examples(text, expected):
    assert parse_ratfunc(text) == expected


@pytest.mark.parametrize("text", ["", "x +", "(x", "x^-1", "1/0", "y", "x^^2", "2x"])
def test_parse_errors(text):
    with pytest.raises((RatFuncSyntaxError, DivisionByZero)):
        parse_ratfunc(text)


@given(rationals)
def test_parse_rational_round_trip(q):
    assert parse_rational(format_value(q)) == q
