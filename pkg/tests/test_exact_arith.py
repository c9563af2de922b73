from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riordan_lab.exact_arith import (
    ONE,
    ZERO,
    Context,
    MultiPoly,
    NotInvertibleError,
    TruncatedSeries,
    is_invertible,
    poly_inverse,
    poly_mul,
    poly_substitute,
    series_coeff,
    series_compose,
    series_inv,
    series_mul,
    series_pow,
    series_revert,
)
from riordan_lab.literals import parse_poly
from riordan_lab.sequences import bernoulli_polys, euler_polys, gauss_binomial, q_pochhammer

from conftest import h_series, polys, series

x, q, a = MultiPoly.var("x"), MultiPoly.var("q"), MultiPoly.var("a")


def brute_expand(factors):
    """Multiply univariate q-polynomials given as coefficient lists."""
    out = [1]
    for f in factors:
        nxt = [0] * (len(out) + len(f) - 1)
        for i, u in enumerate(out):
            for j, v in enumerate(f):
                nxt[i + j] += u * v
        out = nxt
    return out


class TestMultiPoly:
    def test_difference_of_squares(self):
        assert (1 + q) * (1 - q) == 1 - q**2

    def test_zero_absorbs(self):
        assert (x * 0).is_zero()
        assert poly_mul(x, ZERO) == ZERO

    def test_q_pochhammer_three(self):
        p = (1 - q) * (1 - q**2) * (1 - q**3)
        coeffs = brute_expand([[1, -1], [1, 0, -1], [1, 0, 0, -1]])
        assert p == sum((c * q**i for i, c in enumerate(coeffs)), ZERO)
        assert str(p) == "-q^6 + q^5 + q^4 - q^2 - q + 1"

    def test_truncation_drops_high_q(self):
        ctx = Context(3)
        assert poly_mul(1 + q, 1 + q**2, ctx) == 1 + q + q**2

    def test_canonical_no_zero_terms(self):
        p = x + q - x
        assert p == q
        assert len(p) == 1

    def test_rational_coefficients_normalise(self):
        p = MultiPoly.const(Fraction(4, 2))
        assert p.constant_term == 2 and isinstance(p.constant_term, int)

    def test_unknown_variable(self):
        with pytest.raises(ValueError):
            MultiPoly.var("z")

    def test_division_by_constant_only(self):
        assert (x / 2) * 2 == x
        with pytest.raises(NotInvertibleError):
            x / q

    @given(polys(), polys(), polys())
    @settings(max_examples=60)
    def test_ring_axioms(self, p, r, s):
        assert p + r == r + p
        assert p * r == r * p
        assert (p * r) * s == p * (r * s)
        assert p * (r + s) == p * r + p * s
        assert p - p == ZERO
        assert p * ONE == p

    @given(polys(), st.integers(1, 12))
    @settings(max_examples=60)
    def test_truncated_product_is_truncation_of_product(self, p, D):
        r = 1 - q + x * q**2
        assert poly_mul(p, r, Context(D)) == (p * r).truncate_q(D)


class TestSubstitute:
    def test_gauss_at_one(self):
        assert poly_substitute(gauss_binomial(4, 2), "q", 1) == 6

    def test_q_number_at_zero(self):
        assert poly_substitute(1 + q + q**2, "q", 0) == 1

    def test_pochhammer_at_one(self):
        assert poly_substitute(q_pochhammer(a, 2), "q", 1) == (1 - a) ** 2

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            poly_substitute(x, "z", 1)

    def test_polynomial_value(self):
        assert poly_substitute(x**2 + 1, "x", q + 1) == q**2 + 2 * q + 2


class TestInverse:
    def test_rational(self):
        assert poly_inverse(MultiPoly.const(Fraction(-2, 3))) == Fraction(-3, 2)

    def test_invertibility_rule(self):
        assert is_invertible(1 - q)
        assert not is_invertible(1 - x)
        assert not is_invertible(q)

    def test_needs_bound(self):
        with pytest.raises(NotInvertibleError):
            poly_inverse(1 - q)

    def test_q_series_inverse(self):
        D = 10
        inv = poly_inverse((1 - q) * (1 - q**2), Context(D))
        # partitions into parts 1 and 2: floor(n/2) + 1
        assert inv == sum((MultiPoly.monomial(n // 2 + 1, q=n) for n in range(D)), ZERO)

    @given(st.integers(2, 15))
    def test_inverse_times_self(self, D):
        p = q_pochhammer(q, 4)
        assert poly_mul(p, poly_inverse(p, Context(D)), Context(D)) == ONE


class TestSeries:
    def test_geometric_times_one_minus(self):
        assert series_mul(TruncatedSeries.geometric(6), TruncatedSeries([1, -1], 6)) == TruncatedSeries.one(6)

    def test_order_is_minimum(self):
        s = series_mul(TruncatedSeries.one(3), TruncatedSeries.one(7))
        assert s.order == 3

    def test_be_egf_coefficient_two(self):
        B, E = bernoulli_polys(3), euler_polys(3)
        eb = TruncatedSeries([B[k] / [1, 1, 2][k] for k in range(3)])
        ee = TruncatedSeries([E[k] / [1, 1, 2][k] for k in range(3)])
        assert series_mul(eb, ee)[2] == 4 * B[2] / 2

    def test_inverse_needs_unit(self):
        with pytest.raises(NotInvertibleError):
            series_inv(TruncatedSeries([0, 1], 4))

    def test_compose_pascal_column(self):
        outer = TruncatedSeries.geometric(6)
        inner = series_mul(TruncatedSeries.identity(6), TruncatedSeries.geometric(6))
        assert list(series_compose(outer, inner)) == [1, 1, 2, 4, 8, 16, 32]

    def test_compose_needs_zero_constant(self):
        with pytest.raises(ValueError):
            series_compose(TruncatedSeries.geometric(3), TruncatedSeries.one(3))

    def test_revert_catalan(self):
        h = TruncatedSeries([0, 1, -1], 7)
        assert list(series_revert(h)) == [0, 1, 1, 2, 5, 14, 42, 132]

    def test_revert_needs_unit_linear(self):
        with pytest.raises((ValueError, NotInvertibleError)):
            series_revert(TruncatedSeries([0, 0, 1], 4))

    def test_coeff_extraction(self):
        s = TruncatedSeries([1, 2, 3])
        assert series_coeff(s, 2) == 3
        with pytest.raises(IndexError):
            series_coeff(s, 3)

    @given(series(6), series(6), series(6))
    @settings(max_examples=50)
    def test_series_ring(self, s, t, u):
        assert series_mul(s, t) == series_mul(t, s)
        assert series_mul(series_mul(s, t), u) == series_mul(s, series_mul(t, u))
        assert series_mul(s, t + u) == series_mul(s, t) + series_mul(s, u)

    @given(series(6, unit=True))
    @settings(max_examples=50)
    def test_inverse_law(self, s):
        assert series_mul(s, series_inv(s)) == TruncatedSeries.one(6)

    @given(h_series(6))
    @settings(max_examples=50)
    def test_reversion_law(self, h):
        hb = series_revert(h)
        assert series_compose(h, hb) == TruncatedSeries.identity(6)
        assert series_compose(hb, h) == TruncatedSeries.identity(6)

    @given(series(6), h_series(6), h_series(6))
    @settings(max_examples=50)
    def test_composition_associative(self, s, g, h):
        assert series_compose(series_compose(s, g), h) == series_compose(s, series_compose(g, h))

    @given(series(7), series(7), st.integers(0, 7))
    @settings(max_examples=50)
    def test_nested_truncation(self, s, t, m):
        assert series_mul(s, t).truncate(m) == series_mul(s.truncate(m), t.truncate(m))

    @given(series(5), st.integers(0, 4))
    @settings(max_examples=30)
    def test_pow_matches_repeated_product(self, s, k):
        acc = TruncatedSeries.one(5)
        for _ in range(k):
            acc = series_mul(acc, s)
        assert series_pow(s, k) == acc

    def test_q_coefficients_truncate(self):
        D = 6
        ctx = Context(D)
        s = TruncatedSeries([1, -parse_poly("1 + q")], 4)
        inv = series_inv(s, ctx)
        assert all(c.degree("q") < D for c in inv)
        assert series_mul(s, inv, ctx) == TruncatedSeries.one(4)
