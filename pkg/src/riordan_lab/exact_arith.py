"""Exact scalars, sparse multivariate polynomials and truncated power series.

Scalars are :class:`fractions.Fraction` (kept as plain ``int`` whenever the
denominator is 1, which keeps the hot loops fast).  Polynomials live over a
fixed alphabet of indeterminates; a monomial is packed into a single integer
so that multiplying monomials is one integer addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence

__all__ = [
    "ALPHABET",
    "Context",
    "MultiPoly",
    "NotInvertibleError",
    "TruncatedSeries",
    "as_poly",
    "is_invertible",
    "poly_inverse",
    "poly_mul",
    "poly_substitute",
    "series_coeff",
    "series_compose",
    "series_inv",
    "series_mul",
    "series_pow",
    "series_revert",
]

ALPHABET = ("x", "q", "a", "b", "y", "lam", "alpha")

_BITS = 20
_MASK = (1 << _BITS) - 1
_MAX_EXP = _MASK
_SHIFT = {v: _BITS * (len(ALPHABET) - 1 - i) for i, v in enumerate(ALPHABET)}
_Q_SHIFT = _SHIFT["q"]


class NotInvertibleError(ArithmeticError):
    """Raised when an element has no inverse in the coefficient ring."""


@dataclass(frozen=True)
class Context:
    """Arithmetic context.  ``q_bound = D`` means work modulo ``q**D``."""

    q_bound: int | None = None

    @classmethod
    def for_order(cls, order: int) -> "Context":
        return cls(2 * order + 4)


EXACT = Context()


def _norm(c):
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def _unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> _SHIFT[v]) & _MASK for v in ALPHABET)


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for v, e in zip(ALPHABET, exps):
        if e < 0 or e > _MAX_EXP:
            raise ValueError(f"exponent {e} of {v} out of range")
        key |= e << _SHIFT[v]
    return key


def _qdeg(key: int) -> int:
    return (key >> _Q_SHIFT) & _MASK


def _check_var(var: str) -> str:
    if var not in _SHIFT:
        raise ValueError(f"unknown indeterminate {var!r}; alphabet is {ALPHABET}")
    return var


class MultiPoly:
    """Immutable sparse polynomial with rational coefficients.

    The term map never stores a zero coefficient, so equality of term maps
    is equality of polynomials.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[int, object] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = _norm(c)
                if c:
                    clean[k] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = _norm(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "MultiPoly":
        _check_var(name)
        if exp < 0 or exp > _MAX_EXP:
            raise ValueError(f"exponent {exp} out of range")
        return cls._raw({exp << _SHIFT[name]: 1})

    @classmethod
    def monomial(cls, coef, **exps: int) -> "MultiPoly":
        vec = [0] * len(ALPHABET)
        for name, e in exps.items():
            vec[ALPHABET.index(_check_var(name))] = e
        return cls({_pack(vec): coef})

    # -- inspection --------------------------------------------------------

    def terms(self) -> Iterator[tuple[tuple[int, ...], object]]:
        """Yield ``(exponent_vector, coefficient)`` in canonical order."""
        for k in self._sorted_keys():
            yield _unpack(k), self._terms[k]

    def _sorted_keys(self) -> list[int]:
        # descending total degree, then lexicographic (descending) in ALPHABET order
        return sorted(self._terms, key=lambda k: (-sum(_unpack(k)), -k))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    @property
    def constant_term(self):
        return self._terms.get(0, 0)

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self._terms.values())

    def variables(self) -> set[str]:
        out = set()
        for k in self._terms:
            for v, e in zip(ALPHABET, _unpack(k)):
                if e:
                    out.add(v)
        return out

    def degree(self, var: str) -> int:
        s = _SHIFT[_check_var(var)]
        return max(((k >> s) & _MASK for k in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(_unpack(k)) for k in self._terms), default=-1)

    def coefficient(self, **exps: int):
        vec = [0] * len(ALPHABET)
        for name, e in exps.items():
            vec[ALPHABET.index(_check_var(name))] = e
        return self._terms.get(_pack(vec), 0)

    def coefficients_in(self, var: str) -> list["MultiPoly"]:
        """Split into ``[c_0, c_1, ...]`` with ``self = sum c_i var**i``."""
        s = _SHIFT[_check_var(var)]
        parts: dict[int, dict] = {}
        for k, c in self._terms.items():
            e = (k >> s) & _MASK
            parts.setdefault(e, {})[k & ~(_MASK << s)] = c
        top = max(parts, default=-1)
        return [MultiPoly._raw(parts.get(i, {})) for i in range(top + 1)]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = as_poly(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = _norm(s)
            else:
                del out[k]
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-as_poly(other))

    def __rsub__(self, other):
        return as_poly(other) + (-self)

    def __mul__(self, other):
        return poly_mul(self, as_poly(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_poly(other)
        if not other.is_constant() or other.is_zero():
            raise NotInvertibleError("polynomial division is only by nonzero rationals")
        inv = Fraction(1) / other.constant_term
        return MultiPoly({k: c * inv for k, c in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate_q(self, bound: int | None) -> "MultiPoly":
        if bound is None:
            return self
        if all(_qdeg(k) < bound for k in self._terms):
            return self
        return MultiPoly._raw({k: c for k, c in self._terms.items() if _qdeg(k) < bound})

    def substitute(self, var: str, value) -> "MultiPoly":
        return poly_substitute(self, var, value)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        try:
            return self._terms == as_poly(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        from .literals import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


ZERO = MultiPoly._raw({})
ONE = MultiPoly._raw({0: 1})


def as_poly(v) -> MultiPoly:
    if isinstance(v, MultiPoly):
        return v
    if isinstance(v, (int, Fraction, Rational)) and not isinstance(v, bool):
        return MultiPoly.const(v)
    if isinstance(v, bool):
        return MultiPoly.const(int(v))
    raise TypeError(f"cannot coerce {type(v).__name__} to MultiPoly")


def poly_mul(p: MultiPoly, r: MultiPoly, ctx: Context | None = None) -> MultiPoly:
    """Product of two polynomials, dropping terms with q-degree >= ``ctx.q_bound``."""
    a, b = p._terms, r._terms
    if not a or not b:
        return ZERO
    if len(a) < len(b):
        a, b = b, a
    bound = ctx.q_bound if ctx is not None else None
    out: dict[int, object] = {}
    get = out.get
    if bound is None:
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
    else:
        limit = bound << _Q_SHIFT
        qmask = _MASK << _Q_SHIFT
        for kb, cb in b.items():
            qb = kb & qmask
            if qb >= limit:
                continue
            for ka, ca in a.items():
                if (ka & qmask) + qb >= limit:
                    continue
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
    return MultiPoly._raw({k: _norm(c) for k, c in out.items() if c})


def poly_substitute(p: MultiPoly, var: str, value) -> MultiPoly:
    """Replace ``var`` by ``value`` (a rational or another polynomial)."""
    s = _SHIFT[_check_var(var)]
    if isinstance(value, MultiPoly) and not value.is_constant():
        out = ZERO
        for e, part in enumerate(p.coefficients_in(var)):
            if part:
                out = out + part * value**e
        return out
    v = _norm(as_poly(value).constant_term if isinstance(value, MultiPoly) else value)
    out: dict[int, object] = {}
    for k, c in p._terms.items():
        e = (k >> s) & _MASK
        if e and not v:
            continue
        nk = k & ~(_MASK << s)
        out[nk] = out.get(nk, 0) + (c * v**e if e else c)
    return MultiPoly(out)


def is_invertible(p: MultiPoly) -> bool:
    """Nonzero rational constant part and every other term a pure power of q."""
    if not p.constant_term:
        return False
    qmask = _MASK << _Q_SHIFT
    return all(k & ~qmask == 0 for k in p._terms)


def poly_inverse(p: MultiPoly, ctx: Context | None = None) -> MultiPoly:
    """Inverse of ``p``; non-constant ``p`` is inverted in Q[[q]] modulo ``q**D``."""
    if not is_invertible(p):
        raise NotInvertibleError(f"{p} is not invertible in the coefficient ring")
    c0 = Fraction(p.constant_term)
    if p.is_constant():
        return MultiPoly.const(1 / c0)
    bound = ctx.q_bound if ctx is not None else None
    if bound is None:
        raise NotInvertibleError(f"inverting {p} needs a q-truncation bound")
    a = [p.coefficient(q=i) for i in range(bound)]
    inv = [Fraction(0)] * bound
    inv[0] = 1 / c0
    for n in range(1, bound):
        acc = sum((a[k] * inv[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
        inv[n] = -acc / c0
    return MultiPoly({i << _Q_SHIFT: c for i, c in enumerate(inv)})


def _pmul(a: MultiPoly, b: MultiPoly, ctx: Context | None) -> MultiPoly:
    return poly_mul(a, b, ctx)


class TruncatedSeries:
    """Power series in the series variable known up to ``y**order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [as_poly(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            cs = cs[: order + 1] + [ZERO] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([ONE], order)

    @classmethod
    def identity(cls, order: int) -> "TruncatedSeries":
        """The series ``y``."""
        return cls([ZERO, ONE], order)

    @classmethod
    def geometric(cls, order: int, ratio=1) -> "TruncatedSeries":
        """``1/(1 - ratio*y)``."""
        r = as_poly(ratio)
        out, p = [], ONE
        for _ in range(order + 1):
            out.append(p)
            p = p * r
        return cls(out)

    @classmethod
    def exp(cls, order: int) -> "TruncatedSeries":
        out, f = [], 1
        for n in range(order + 1):
            if n:
                f *= n
            out.append(MultiPoly.const(Fraction(1, f)))
        return cls(out)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(order, self.order))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_series(other, self.order)
        n = min(self.order, other.order)
        return TruncatedSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_series(other, self.order))

    def __rsub__(self, other):
        return _as_series(other, self.order) - self

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        c = as_poly(other)
        return TruncatedSeries([x * c for x in self.coeffs])

    __rmul__ = __mul__

    def scale(self, c, ctx: Context | None = None) -> "TruncatedSeries":
        c = as_poly(c)
        return TruncatedSeries([poly_mul(x, c, ctx) for x in self.coeffs])

    def map(self, fn) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs])

    def shift_down(self) -> "TruncatedSeries":
        """``s(y)/y`` for a series with zero constant term (loses one order)."""
        if self.coeffs[0]:
            raise ValueError("series has a nonzero constant term")
        if self.order == 0:
            raise ValueError("nothing left after dividing by y")
        return TruncatedSeries(self.coeffs[1:])

    def shift_up(self) -> "TruncatedSeries":
        """``y*s(y)``, keeping the order."""
        return TruncatedSeries((ZERO,) + self.coeffs[:-1])

    def __repr__(self):
        return f"TruncatedSeries([{', '.join(str(c) for c in self.coeffs)}])"


def _as_series(v, order: int) -> TruncatedSeries:
    if isinstance(v, TruncatedSeries):
        return v
    return TruncatedSeries([as_poly(v)], order)


def series_mul(s: TruncatedSeries, t: TruncatedSeries, ctx: Context | None = None) -> TruncatedSeries:
    """Cauchy product, truncated at the smaller order."""
    n = min(s.order, t.order)
    a, b = s.coeffs, t.coeffs
    nz_b = [(j, b[j]) for j in range(n + 1) if b[j]]
    out = [ZERO] * (n + 1)
    for i in range(n + 1):
        ai = a[i]
        if not ai:
            continue
        for j, bj in nz_b:
            if i + j > n:
                break
            out[i + j] = out[i + j] + _pmul(ai, bj, ctx)
    return TruncatedSeries(out)


def series_pow(s: TruncatedSeries, k: int, ctx: Context | None = None) -> TruncatedSeries:
    result = TruncatedSeries.one(s.order)
    for _ in range(k):
        result = series_mul(result, s, ctx)
    return result


def series_inv(s: TruncatedSeries, ctx: Context | None = None) -> TruncatedSeries:
    """Multiplicative inverse; the constant coefficient must be invertible."""
    a = s.coeffs
    try:
        b0 = poly_inverse(a[0], ctx)
    except NotInvertibleError as exc:
        raise NotInvertibleError(f"constant term not invertible: {exc}") from None
    out = [b0]
    for n in range(1, s.order + 1):
        acc = ZERO
        for k in range(1, n + 1):
            if a[k]:
                acc = acc + _pmul(a[k], out[n - k], ctx)
        out.append(-_pmul(acc, b0, ctx))
    return TruncatedSeries(out)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries, ctx: Context | None = None) -> TruncatedSeries:
    """``outer(inner(y))`` by Horner's rule; ``inner`` must have zero constant term."""
    if inner.coeffs[0]:
        raise ValueError("inner series must have zero constant term")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    acc = TruncatedSeries([outer.coeffs[n]], n)
    for k in range(n - 1, -1, -1):
        acc = series_mul(acc, inner, ctx)
        acc = TruncatedSeries((acc.coeffs[0] + outer.coeffs[k],) + acc.coeffs[1:])
    return acc


def series_revert(h: TruncatedSeries, ctx: Context | None = None) -> TruncatedSeries:
    """Compositional inverse, solved order by order from ``g(h(y)) = y``."""
    if h.coeffs[0]:
        raise ValueError("series to revert must have zero constant term")
    if h.order < 1:
        raise ValueError("series to revert needs order >= 1")
    h1 = h.coeffs[1]
    try:
        inv_h1 = poly_inverse(h1, ctx)
    except NotInvertibleError as exc:
        raise NotInvertibleError(f"linear coefficient not invertible: {exc}") from None
    n = h.order
    powers = [TruncatedSeries.one(n), h]
    for _ in range(2, n + 1):
        powers.append(series_mul(powers[-1], h, ctx))
    g = [ZERO, inv_h1]
    inv_h1_pow = [ONE, inv_h1]
    for m in range(2, n + 1):
        inv_h1_pow.append(_pmul(inv_h1_pow[-1], inv_h1, ctx))
        acc = ZERO
        for k in range(1, m):
            c = powers[k].coeffs[m]
            if c and g[k]:
                acc = acc + _pmul(g[k], c, ctx)
        g.append(-_pmul(acc, inv_h1_pow[m], ctx))
    return TruncatedSeries(g)


def series_coeff(s: TruncatedSeries, n: int) -> MultiPoly:
    """Coefficient of ``y**n``."""
    if n < 0 or n > s.order:
        raise IndexError(f"coefficient {n} is beyond truncation order {s.order}")
    return s.coeffs[n]
