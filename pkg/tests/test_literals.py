from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from riordan_lab.exact_arith import MultiPoly, TruncatedSeries
from riordan_lab.literals import LiteralError, format_poly, parse_poly, parse_series, parse_series_expr

from conftest import polys

x, q = MultiPoly.var("x"), MultiPoly.var("q")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1 - q + 2*q^2", 1 - q + 2 * q**2),
        ("1/6", MultiPoly.const(Fraction(1, 6))),
        ("-3/7*x^2*alpha", MultiPoly.monomial(Fraction(-3, 7), x=2, alpha=1)),
        ("2q", 2 * q),
        ("λ^2 + α", MultiPoly.var("lam", 2) + MultiPoly.var("alpha")),
        ("(1+x)^3", (1 + x) ** 3),
    ],
)
def test_parse_poly(text, expected):
    assert parse_poly(text) == expected


@pytest.mark.parametrize("text", ["", "1 +", "z", "x^-1", "1/x", "1.5", "x^y", "f(x)"])
def test_parse_poly_rejects(text):
    with pytest.raises(LiteralError):
        parse_poly(text)


@given(polys(variables=("x", "q", "a", "lam", "alpha")))
@settings(max_examples=60)
def test_format_round_trip(p):
    assert parse_poly(format_poly(p)) == p


def test_canonical_order():
    assert format_poly(1 - q + 2 * q**2) == "2*q^2 - q + 1"
    assert format_poly(MultiPoly.const(0)) == "0"


def test_series_expr():
    assert list(parse_series_expr("1/(1-x)", 4)) == [1] * 5
    assert list(parse_series_expr("x/(1-2*x)", 4)) == [0, 1, 2, 4, 8]
    assert list(parse_series_expr("(1-x)^-2", 3)) == [1, 2, 3, 4]
    assert list(parse_series_expr("1/(1-alpha*x)", 2)) == [1, MultiPoly.var("alpha"), MultiPoly.var("alpha", 2)]


def test_series_expr_bad_division():
    with pytest.raises(LiteralError):
        parse_series_expr("1/x", 3)


def test_series_list():
    assert parse_series(["1", "-1/2", "q"]) == TruncatedSeries([1, Fraction(-1, 2), q])
    with pytest.raises(LiteralError):
        parse_series([])
