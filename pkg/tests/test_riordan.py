from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riordan_lab.exact_arith import MultiPoly, TruncatedSeries, series_compose, series_mul
from riordan_lab.riordan import (
    Appell,
    Associated,
    Bell,
    IGroup,
    LGroup,
    OGroup,
    PascalGen,
    RiordanArray,
    RiordanError,
    decompose_appell_bell,
    gbt,
    pascal_entry_closed_form,
    pascal_h,
    pascal_substitute_closed_form,
    riordan_from_matrix,
    riordan_inv,
    riordan_mul,
    riordan_new,
    riordan_to_matrix,
    subgroup_construct,
    subgroup_member,
)
from riordan_lab.triangle import LowerTriangular, lt_inverse, lt_mul

from conftest import rationals, riordans, series

alpha = MultiPoly.var("alpha")
N = 6


def ident(N):
    return RiordanArray(TruncatedSeries.one(N - 1), TruncatedSeries.identity(N))


def pascal_array(N):
    return riordan_new(TruncatedSeries.geometric(N - 1), pascal_h(1, N))


def test_pascal_matrix():
    assert riordan_to_matrix(pascal_array(6)) == LowerTriangular.build(6, lambda n, j: comb(n, j))


@pytest.mark.parametrize(
    "f, h, msg",
    [
        ([0, 1], [0, 1, 0], "f\\(0\\)"),
        ([1, 0], [1, 1, 0], "h\\(0\\)"),
        ([1, 0], [0, 0, 1], "h'\\(0\\)"),
    ],
)
def test_validation(f, h, msg):
    with pytest.raises(RiordanError, match=msg):
        riordan_new(f, h)


def test_inverse_of_associated():
    R = riordan_new([1, 0, 0, 0], [0, 1, 1, 1, 1])
    Ri = riordan_inv(R)
    assert list(Ri.h) == [0, 1, -1, 1, -1]
    assert list(Ri.f) == [1, 0, 0, 0]


@given(riordans(N), riordans(N))
@settings(max_examples=50)
def test_homomorphism(R1, R2):
    assert riordan_to_matrix(riordan_mul(R1, R2)) == lt_mul(riordan_to_matrix(R1), riordan_to_matrix(R2))


@given(riordans(N))
@settings(max_examples=50)
def test_inverse(R):
    Ri = riordan_inv(R)
    assert riordan_mul(R, Ri) == ident(N) == riordan_mul(Ri, R)
    assert riordan_to_matrix(Ri) == lt_inverse(riordan_to_matrix(R))


@given(riordans(N), riordans(N), riordans(N))
@settings(max_examples=30)
def test_associative(R1, R2, R3):
    assert riordan_mul(riordan_mul(R1, R2), R3) == riordan_mul(R1, riordan_mul(R2, R3))


@given(riordans(N))
@settings(max_examples=50)
def test_from_matrix(R):
    back = riordan_from_matrix(riordan_to_matrix(R))
    assert back == R.truncate(N - 1)


def test_from_matrix_rejects_non_riordan():
    A = LowerTriangular([[1], [0, 1], [0, 5, 2]])  # (2,2) should be h_1^2 = 1
    with pytest.raises(RiordanError):
        riordan_from_matrix(A)


@given(riordans(N), riordans(N))
@settings(max_examples=50)
def test_appell_normal(R, A):
    A = riordan_new(A.f, TruncatedSeries.identity(N))
    conj = riordan_mul(riordan_mul(R, A), riordan_inv(R))
    assert subgroup_member("Appell", conj).member


@given(riordans(N))
@settings(max_examples=50)
def test_appell_bell(R):
    ap, bell = decompose_appell_bell(R)
    assert subgroup_member("Appell", ap).member
    assert subgroup_member("Bell", bell).member
    assert riordan_mul(ap, bell) == R


def test_subgroup_construct_and_member():
    p = [1, 2, 3, 4, 5]
    cases = [
        (IGroup(p, 2, 3), "IGroup"),
        (LGroup(p, Fraction(1, 2)), "LGroup"),
        (Appell(p), "Appell"),
        (OGroup(p), "OGroup"),
        (PascalGen(p, -1), "PascalGen"),
        (Associated([0, 1, 2, 3, 4, 5]), "Associated"),
        (Bell([1, 1, 1, 1, 1, 1]), "Bell"),
    ]
    for kind, name in cases:
        R = subgroup_construct(kind, 5)
        m = subgroup_member(name, R)
        assert m.member, name
        assert m.to_json()["kind"] == name


def test_non_members():
    R = riordan_new([1, 1, 1], [0, 1, 1, 1])
    assert not subgroup_member("Appell", R).member
    assert subgroup_member("PascalGen", R).member
    assert not subgroup_member("LGroup", R).member
    assert not subgroup_member("OGroup", riordan_new([2, 0, 0], TruncatedSeries.identity(3))).member
    with pytest.raises(ValueError):
        subgroup_member("Nope", R)


@given(st.lists(rationals, min_size=6, max_size=6))
@settings(max_examples=50)
def test_gbt_involution(p):
    hat = gbt(p, alpha)
    assert gbt(hat, -alpha) == [MultiPoly.const(v) for v in p]


def test_gbt_ones():
    assert gbt([1, 1, 1, 1], 1) == [1, 2, 4, 8]


@pytest.mark.parametrize("a", [0, 1, -1, 2, alpha])
@given(p=series(7))
@settings(max_examples=10)
def test_pascal_closed_forms(a, p):
    h = pascal_h(a, 7)
    col = p
    for k in range(8):
        for n in range(k, 8):
            assert pascal_entry_closed_form(p, a, n, k) == col[n]
        col = series_mul(col, h)
    assert pascal_substitute_closed_form(p, a) == series_compose(p, pascal_h(a, 7))


def test_pascal_h():
    assert list(pascal_h(2, 4)) == [0, 1, 2, 4, 8]
    assert list(pascal_h(0, 3, beta=3)) == [0, 3, 0, 0]
