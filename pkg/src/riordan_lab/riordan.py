"""Riordan arrays (f, h) at finite order and their group structure.

A :class:`RiordanArray` of order N determines the N x N matrix whose column k
lists the coefficients of ``f(y) h(y)^k``.  ``f`` is stored with N
coefficients and ``h`` with N + 1: since ``h(0) = 0`` both carry N free
coefficients, and the extra one makes the Appell x Bell split exact at N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence, Union

from .exact_arith import (
    ONE,
    ZERO,
    Context,
    MultiPoly,
    NotInvertibleError,
    TruncatedSeries,
    as_poly,
    is_invertible,
    poly_inverse,
    poly_mul,
    series_compose,
    series_inv,
    series_mul,
    series_revert,
)
from .triangle import LowerTriangular

__all__ = [
    "Appell",
    "Associated",
    "Bell",
    "IGroup",
    "LGroup",
    "OGroup",
    "PascalGen",
    "RiordanArray",
    "RiordanError",
    "decompose_appell_bell",
    "gbt",
    "pascal_entry_closed_form",
    "pascal_h",
    "pascal_substitute_closed_form",
    "riordan_from_matrix",
    "riordan_inv",
    "riordan_mul",
    "riordan_new",
    "riordan_to_matrix",
    "subgroup_construct",
    "subgroup_member",
]


class RiordanError(ValueError):
    """Invalid (f, h) data."""


@dataclass(frozen=True)
class RiordanArray:
    f: TruncatedSeries
    h: TruncatedSeries

    @property
    def order(self) -> int:
        return len(self.f)

    def truncate(self, order: int) -> "RiordanArray":
        return RiordanArray(self.f.truncate(order - 1), self.h.truncate(order))


def riordan_new(f, h) -> RiordanArray:
    """Validate a pair.  An ``h`` no longer than ``f`` lowers the order to len(h) - 1."""
    f = f if isinstance(f, TruncatedSeries) else TruncatedSeries(f)
    h = h if isinstance(h, TruncatedSeries) else TruncatedSeries(h)
    if len(h) < 2:
        raise RiordanError("h needs at least two coefficients")
    N = min(len(f), len(h) - 1)
    f, h = f.truncate(N - 1), h.truncate(N)
    if not is_invertible(f[0]):
        raise RiordanError(f"f(0) = {f[0]} is not invertible")
    if h[0]:
        raise RiordanError(f"h(0) = {h[0]} must be zero")
    if not is_invertible(h[1]):
        raise RiordanError(f"h'(0) = {h[1]} is not invertible")
    return RiordanArray(f, h)


def riordan_to_matrix(R: RiordanArray, ctx: Context | None = None) -> LowerTriangular:
    N = R.order
    h = R.h.truncate(N - 1)
    cols = []
    col = R.f
    for k in range(N):
        cols.append(col.coeffs)
        if k < N - 1:
            col = series_mul(col, h, ctx)
    return LowerTriangular([[cols[k][n] for k in range(n + 1)] for n in range(N)])


def riordan_from_matrix(A: LowerTriangular, ctx: Context | None = None) -> RiordanArray:
    """Read (f, h) off columns 0 and 1.  Only h_0..h_{N-1} are known, so the order drops by one."""
    N = A.order
    if N < 2:
        raise RiordanError("need order >= 2 to read off h")
    f = TruncatedSeries(A.column(0))
    fh = TruncatedSeries([ZERO] + A.column(1))
    h = series_mul(fh, series_inv(f, ctx), ctx)
    R = riordan_new(f, h)
    # h_0..h_{N-1} already fix every entry of the N x N matrix
    full = RiordanArray(f, TruncatedSeries(h.coeffs, N))
    if riordan_to_matrix(full, ctx) != A:
        raise RiordanError("matrix is not Riordan-shaped")
    return R


def _same_order(R1: RiordanArray, R2: RiordanArray):
    if R1.order != R2.order:
        raise ValueError(f"order mismatch: {R1.order} vs {R2.order}")


def riordan_mul(R1: RiordanArray, R2: RiordanArray, ctx: Context | None = None) -> RiordanArray:
    """``(f1 * (f2 o h1), h2 o h1)``."""
    _same_order(R1, R2)
    f = series_mul(R1.f, series_compose(R2.f, R1.h, ctx), ctx)
    h = series_compose(R2.h, R1.h, ctx)
    return RiordanArray(f, h)


def riordan_inv(R: RiordanArray, ctx: Context | None = None) -> RiordanArray:
    """``(1 / f(hbar), hbar)`` with hbar the compositional inverse of h."""
    hbar = series_revert(R.h, ctx)
    f = series_inv(series_compose(R.f, hbar, ctx), ctx)
    return RiordanArray(f, hbar)


def pascal_h(alpha, order: int, beta=1) -> TruncatedSeries:
    """``beta*y / (1 - alpha*y)`` to the given order."""
    alpha, beta = as_poly(alpha), as_poly(beta)
    out, p = [ZERO], beta
    for _ in range(order):
        out.append(p)
        p = p * alpha
    return TruncatedSeries(out[: order + 1])


def _series(p, order: int) -> TruncatedSeries:
    if isinstance(p, TruncatedSeries):
        return TruncatedSeries(p.coeffs, order)
    return TruncatedSeries(p, order)


# -- subgroup kinds ----------------------------------------------------------


@dataclass(frozen=True)
class IGroup:
    """(p, beta*x/(1 - alpha*x))."""

    p: Sequence
    beta: object = 1
    alpha: object = 0


@dataclass(frozen=True)
class LGroup:
    """(p, a*x)."""

    p: Sequence
    a: object = 1


@dataclass(frozen=True)
class Appell:
    """(p, x)."""

    p: Sequence


@dataclass(frozen=True)
class OGroup:
    """(p, x) with p(0) = 1."""

    p: Sequence


@dataclass(frozen=True)
class PascalGen:
    """(p, x/(1 - alpha*x))."""

    p: Sequence
    alpha: object = 1


@dataclass(frozen=True)
class Associated:
    """(1, p)."""

    p: Sequence


@dataclass(frozen=True)
class Bell:
    """(g, x*g)."""

    g: Sequence


SubgroupKind = Union[IGroup, LGroup, Appell, OGroup, PascalGen, Associated, Bell]
KIND_NAMES = ("IGroup", "LGroup", "Appell", "OGroup", "PascalGen", "Associated", "Bell")


def subgroup_construct(kind: SubgroupKind, order: int) -> RiordanArray:
    N = order
    if isinstance(kind, IGroup):
        return riordan_new(_series(kind.p, N - 1), pascal_h(kind.alpha, N, kind.beta))
    if isinstance(kind, LGroup):
        return riordan_new(_series(kind.p, N - 1), TruncatedSeries([0, kind.a], N))
    if isinstance(kind, OGroup):
        p = _series(kind.p, N - 1)
        if p[0] != ONE:
            raise RiordanError("OGroup requires p(0) = 1")
        return riordan_new(p, TruncatedSeries.identity(N))
    if isinstance(kind, Appell):
        return riordan_new(_series(kind.p, N - 1), TruncatedSeries.identity(N))
    if isinstance(kind, PascalGen):
        return riordan_new(_series(kind.p, N - 1), pascal_h(kind.alpha, N))
    if isinstance(kind, Associated):
        p = _series(kind.p, N)
        return riordan_new(TruncatedSeries.one(N - 1), p)
    if isinstance(kind, Bell):
        g = _series(kind.g, N)
        return riordan_new(g.truncate(N - 1), g.shift_up())
    raise TypeError(f"unknown subgroup kind {kind!r}")


@dataclass(frozen=True)
class Membership:
    kind: str
    member: bool
    order: int
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "member": self.member, "witness": self.witness, "order": self.order}


def _is_identity_h(h: TruncatedSeries) -> bool:
    return h == TruncatedSeries.identity(h.order)


def _pascal_shape(h: TruncatedSeries):
    """Return (beta, alpha) if h = beta*y/(1 - alpha*y) to its order, else None."""
    beta = h[1]
    if h.order < 2:
        return beta, ZERO
    try:
        alpha = poly_mul(h[2], poly_inverse(beta))
    except NotInvertibleError:
        return None
    if h != pascal_h(alpha, h.order, beta):
        return None
    return beta, alpha


def subgroup_member(kind: str, R: RiordanArray) -> Membership:
    """Decide membership of R in a subgroup by its shape, at R's order."""
    N = R.order
    f, h = R.f, R.h

    def verdict(ok, **witness):
        return Membership(kind, bool(ok), N, {k: str(v) for k, v in witness.items()} if ok else {})

    if kind == "Appell":
        return verdict(_is_identity_h(h), p=_fmt(f))
    if kind == "OGroup":
        return verdict(_is_identity_h(h) and f[0] == ONE, p=_fmt(f))
    if kind == "LGroup":
        ok = all(not c for c in h.coeffs[2:])
        return verdict(ok, a=h[1])
    if kind == "PascalGen":
        shape = _pascal_shape(h)
        ok = shape is not None and shape[0] == ONE
        return verdict(ok, alpha=shape[1] if ok else None)
    if kind == "IGroup":
        shape = _pascal_shape(h)
        if shape is None:
            return verdict(False)
        return verdict(True, beta=shape[0], alpha=shape[1])
    if kind == "Associated":
        return verdict(f == TruncatedSeries.one(f.order), p=_fmt(h))
    if kind == "Bell":
        return verdict(f == h.shift_down(), g=_fmt(f))
    raise ValueError(f"unknown subgroup kind {kind!r}; expected one of {KIND_NAMES}")


def _fmt(s: TruncatedSeries) -> str:
    return "[" + ", ".join(str(c) for c in s.coeffs) + "]"


def decompose_appell_bell(R: RiordanArray, ctx: Context | None = None) -> tuple[RiordanArray, RiordanArray]:
    """Split R = (x f/h, x) (h/x, h) into an Appell and a Bell factor."""
    h_over_y = R.h.shift_down()
    appell_f = series_mul(R.f, series_inv(h_over_y, ctx), ctx)
    # exact division: (h/y) * appell_f must give back f
    if series_mul(appell_f, h_over_y, ctx) != R.f:
        raise AssertionError("inexact division in Appell part")
    appell = RiordanArray(appell_f, TruncatedSeries.identity(R.order))
    bell = RiordanArray(h_over_y, R.h)
    return appell, bell


def _binom_ext(m: int, r: int) -> int:
    # C(m, m) = 1 for every m, including C(-1, -1); C(m, r) = 0 off 0 <= r <= m
    if m == r:
        return 1
    if r < 0 or m < 0 or r > m:
        return 0
    return comb(m, r)


def pascal_entry_closed_form(p: TruncatedSeries, alpha, n: int, k: int) -> MultiPoly:
    """[[x^n]] p(x) (x/(1 - alpha x))^k as sum_{j<=n-k} p_j alpha^{n-k-j} C(n-j-1, k-1)."""
    if k > n:
        raise ValueError(f"k = {k} exceeds n = {n}")
    alpha = as_poly(alpha)
    acc = ZERO
    for j in range(n - k + 1):
        c = _binom_ext(n - j - 1, k - 1)
        if c and p[j]:
            acc = acc + p[j] * alpha ** (n - k - j) * c
    return acc


def pascal_substitute_closed_form(p: TruncatedSeries, alpha) -> TruncatedSeries:
    """p(x/(1 - alpha x)) as p_0 + sum_s x^s sum_{j<s} p_{j+1} alpha^{s-1-j} C(s-1, j)."""
    alpha = as_poly(alpha)
    out = [p[0]]
    for s in range(1, p.order + 1):
        acc = ZERO
        for j in range(s):
            if p[j + 1]:
                acc = acc + p[j + 1] * alpha ** (s - 1 - j) * comb(s - 1, j)
        out.append(acc)
    return TruncatedSeries(out)


def gbt(seq: Sequence, alpha) -> list[MultiPoly]:
    """Generalized binomial transform: hat p_n = sum_j C(n, j) p_j alpha^{n-j}."""
    alpha = as_poly(alpha)
    seq = [as_poly(v) for v in seq]
    pw = [ONE]
    for _ in range(len(seq)):
        pw.append(pw[-1] * alpha)
    return [sum((seq[j] * pw[n - j] * comb(n, j) for j in range(n + 1) if seq[j]), ZERO) for n in range(len(seq))]
