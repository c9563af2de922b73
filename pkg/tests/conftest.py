from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from riordan_lab.exact_arith import MultiPoly, TruncatedSeries
from riordan_lab.riordan import riordan_new
from riordan_lab.triangle import LowerTriangular

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=4))
nonzero_rationals = rationals.filter(bool)


@st.composite
def polys(draw, variables=("x", "q"), max_terms=4, max_exp=3):
    p = MultiPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        exps = {v: draw(st.integers(0, max_exp)) for v in variables}
        p = p + MultiPoly.monomial(draw(rationals), **exps)
    return p


@st.composite
def series(draw, order, unit=False, coeff=rationals):
    head = draw(nonzero_rationals) if unit else draw(coeff)
    return TruncatedSeries([head] + [draw(coeff) for _ in range(order)])


@st.composite
def h_series(draw, order):
    return TruncatedSeries([0, draw(nonzero_rationals)] + [draw(rationals) for _ in range(order - 1)])


@st.composite
def riordans(draw, order):
    return riordan_new(draw(series(order - 1, unit=True)), draw(h_series(order)))


@st.composite
def triangles(draw, order, invertible=False, entries=small_ints):
    rows = []
    for n in range(order):
        row = [draw(entries) for _ in range(n)]
        diag = draw(nonzero_rationals if invertible else entries)
        rows.append(row + [diag])
    return LowerTriangular(rows)


@st.composite
def unit_int_triangles(draw, order):
    return LowerTriangular([[draw(small_ints) for _ in range(n)] + [draw(st.sampled_from([1, -1]))] for n in range(order)])
