from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riordan_lab.exact_arith import Context, MultiPoly, NotInvertibleError
from riordan_lab.sequences import bernoulli_polys, euler_polys
from riordan_lab.triangle import (
    BivariateSeries,
    LowerTriangular,
    diag_conjugate,
    from_toeplitz,
    grade_lambda,
    lt_inverse,
    lt_inverse_blockwise,
    lt_mul,
    matrix_gf,
    scale_cols_inv,
    scale_rows,
    toeplitz_inverse_seq,
)

from conftest import nonzero_rationals, triangles, unit_int_triangles

q, lam = MultiPoly.var("q"), MultiPoly.var("lam")
I = LowerTriangular.identity


def pascal(N):
    return LowerTriangular.build(N, lambda n, j: comb(n, j))


def test_pascal_inverse():
    inv = lt_inverse(pascal(6))
    assert inv == LowerTriangular.build(6, lambda n, j: (-1) ** (n - j) * comb(n, j))


def test_row_shapes_checked():
    with pytest.raises(ValueError):
        LowerTriangular([[1], [1]])


def test_singular_diagonal_reports_row():
    A = LowerTriangular([[1], [2, 0], [1, 1, 1]])
    with pytest.raises(NotInvertibleError, match="row 1"):
        lt_inverse(A)


def test_q_diagonal_needs_bound():
    A = LowerTriangular([[1 - q], [1, 1]])
    with pytest.raises(NotInvertibleError):
        lt_inverse(A)
    inv = lt_inverse(A, Context(5))
    assert lt_mul(A, inv, Context(5)) == I(2)


def test_zero_divisors():
    a, b = MultiPoly.var("a"), MultiPoly.var("b")
    L = LowerTriangular([[a], [a**2, 0], [a**3, 0, 0]])
    R = LowerTriangular([[0], [0, b], [b**2, b**3, b**4]])
    assert lt_mul(L, R).is_zero()


def test_singular_times_singular():
    # diag(1, 0) diag(0, 1) = 0 although the first factor has a nonzero (0,0) entry
    assert lt_mul(LowerTriangular([[1], [0, 0]]), LowerTriangular([[0], [0, 1]])).is_zero()


@given(triangles(5), triangles(5), triangles(5))
@settings(max_examples=50)
def test_ring_axioms(A, B, C):
    assert lt_mul(lt_mul(A, B), C) == lt_mul(A, lt_mul(B, C))
    assert lt_mul(A, B + C) == lt_mul(A, B) + lt_mul(A, C)
    assert lt_mul(A, I(5)) == A == lt_mul(I(5), A)


@given(triangles(6, invertible=True))
@settings(max_examples=50)
def test_inverse_laws(A):
    inv = lt_inverse(A)
    assert lt_mul(A, inv) == I(6) == lt_mul(inv, A)
    assert lt_inverse(inv) == A


@given(triangles(6, invertible=True))
@settings(max_examples=50)
def test_blockwise_oracle_agrees(A):
    assert lt_inverse_blockwise(A) == lt_inverse(A)


@given(triangles(7, invertible=True), st.integers(1, 7))
@settings(max_examples=50)
def test_nested_truncation(A, m):
    assert lt_inverse(A).truncate(m) == lt_inverse(A.truncate(m))
    assert lt_mul(A, A).truncate(m) == lt_mul(A.truncate(m), A.truncate(m))


@given(unit_int_triangles(6))
@settings(max_examples=50)
def test_integer_preservation(A):
    assert all(v.is_integral() for row in lt_inverse(A).rows for v in row)


def test_polynomial_preservation():
    x = MultiPoly.var("x")
    A = LowerTriangular.build(5, lambda n, j: comb(n, j) * x ** (n - j))
    inv = lt_inverse(A)
    assert all(not (v.variables() - {"x"}) and v.is_integral() for row in inv.rows for v in row)


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.lists(st.integers(-4, 4), min_size=6, max_size=6))
@settings(max_examples=50)
def test_toeplitz_closure(d, e):
    d[0] = e[0] = 1
    A, B = from_toeplitz(d, 6), from_toeplitz(e, 6)
    assert lt_mul(A, B).is_toeplitz()
    assert lt_mul(A, B) == lt_mul(B, A)
    inv = lt_inverse(A)
    assert inv.is_toeplitz()
    assert inv.toeplitz_data() == toeplitz_inverse_seq(d)


def test_toeplitz_inverse_requires_unit():
    with pytest.raises(ValueError):
        toeplitz_inverse_seq([2, 1])


def test_toeplitz_factorials():
    d = [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
    assert toeplitz_inverse_seq(d) == [1, -1, Fraction(1, 2), Fraction(-1, 6), Fraction(1, 24)]


@given(unit_int_triangles(5))
@settings(max_examples=50)
def test_grading_commutes_with_inverse(A):
    assert lt_inverse(grade_lambda(A, lam)) == grade_lambda(lt_inverse(A), lam)


@given(triangles(5, invertible=True), st.lists(nonzero_rationals, min_size=5, max_size=5))
@settings(max_examples=50)
def test_scaling_and_conjugation(A, alpha):
    inv = lt_inverse(A)
    assert lt_mul(scale_rows(A, alpha), scale_cols_inv(inv, alpha)) == I(5)
    assert lt_inverse(diag_conjugate(alpha, A)) == diag_conjugate(alpha, inv)


def test_be_conjugation():
    N = 6
    B, E = bernoulli_polys(N), euler_polys(N)
    fact = [1, 1, 2, 6, 24, 120]
    Bm = from_toeplitz([B[k] / fact[k] for k in range(N)], N)
    Em = from_toeplitz([E[k] / fact[k] for k in range(N)], N)
    assert lt_mul(Bm, Em) == diag_conjugate([2**n for n in range(N)], Bm)


def test_matrix_gf_of_pascal():
    N = 5
    G = matrix_gf(pascal(N))
    # column i of Pascal: y^i / (1-y)^(i+1), so GF * (1 - y - xhat*y) = 1
    one_minus = BivariateSeries([[1 if (n, i) == (0, 0) else 0 for i in range(N)] for n in range(N)])
    factor = BivariateSeries(
        [[1 if (n, i) == (0, 0) else (-1 if n == 1 and i in (0, 1) else 0) for i in range(N)] for n in range(N)]
    )
    assert G * factor == one_minus
