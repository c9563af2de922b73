"""Text forms of polynomials and series.

Polynomial literals look like ``1 - q + 2*q^2`` or ``-3/7*x^2*alpha``; the
series grammar additionally allows division and negative powers, e.g.
``1/(1-x)`` or ``x/(1-2*x)``, expanded to a truncated series.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction

from .exact_arith import (
    ALPHABET,
    Context,
    MultiPoly,
    NotInvertibleError,
    TruncatedSeries,
    as_poly,
    series_inv,
    series_mul,
    series_pow,
)

__all__ = [
    "LiteralError",
    "format_poly",
    "format_rational",
    "parse_poly",
    "parse_series",
    "parse_series_expr",
]

_ALIASES = {"λ": "lam", "α": "alpha", "lambda_": "lam"}


class LiteralError(ValueError):
    """Malformed polynomial or series literal."""


def format_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.terms():
        c = Fraction(c)
        factors = []
        for v, e in zip(ALPHABET, exps):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(c)
        if not factors:
            body = format_rational(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = format_rational(mag) + "*" + "*".join(factors)
        parts.append((c < 0, body))
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _prepare(text: str) -> ast.expr:
    if not isinstance(text, str) or not text.strip():
        raise LiteralError("empty literal")
    s = text.strip()
    for k, v in _ALIASES.items():
        s = s.replace(k, v)
    s = s.replace("^", "**")
    # implicit multiplication after a numeral: 2q, 3(1-x)
    s = re.sub(r"(\d)\s*(?=[A-Za-z_(])", r"\1*", s)
    try:
        tree = ast.parse(s, mode="eval")
    except SyntaxError as exc:
        raise LiteralError(f"cannot parse {text!r}: {exc.msg}") from None
    return tree.body


def _int_exponent(node, text) -> int:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_exponent(node.operand, text)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    raise LiteralError(f"exponents must be integer constants in {text!r}")


def parse_poly(text: str) -> MultiPoly:
    """Parse a polynomial literal; division is allowed only by rationals."""

    def ev(node) -> MultiPoly:
        if isinstance(node, ast.Constant):
            if type(node.value) is not int:
                raise LiteralError(f"only integer numerals are allowed in {text!r}")
            return MultiPoly.const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in ALPHABET:
                raise LiteralError(f"unknown indeterminate {node.id!r} in {text!r}")
            return MultiPoly.var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = _int_exponent(node.right, text)
                if e < 0:
                    raise LiteralError(f"negative power in polynomial literal {text!r}")
                return ev(node.left) ** e
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                try:
                    return left / right
                except NotInvertibleError:
                    raise LiteralError(f"polynomial literal divides by a non-constant: {text!r}") from None
        raise LiteralError(f"unsupported syntax in {text!r}")

    return ev(_prepare(text))


def parse_series_expr(text: str, order: int, var: str = "x", ctx: Context | None = None) -> TruncatedSeries:
    """Expand a rational expression in ``var`` to a series of the given order.

    Other names of the alphabet stay symbolic in the coefficients.
    """

    def ev(node) -> TruncatedSeries:
        if isinstance(node, ast.Constant):
            if type(node.value) is not int:
                raise LiteralError(f"only integer numerals are allowed in {text!r}")
            return TruncatedSeries([node.value], order)
        if isinstance(node, ast.Name):
            if node.id == var:
                return TruncatedSeries.identity(order)
            if node.id not in ALPHABET:
                raise LiteralError(f"unknown name {node.id!r} in {text!r}")
            return TruncatedSeries([MultiPoly.var(node.id)], order)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = _int_exponent(node.right, text)
                base = ev(node.left)
                if e < 0:
                    base, e = _inv(base), -e
                return series_pow(base, e, ctx)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return series_mul(left, right, ctx)
            if isinstance(node.op, ast.Div):
                return series_mul(left, _inv(right), ctx)
        raise LiteralError(f"unsupported syntax in {text!r}")

    def _inv(s):
        try:
            return series_inv(s, ctx)
        except NotInvertibleError as exc:
            raise LiteralError(f"cannot divide in {text!r}: {exc}") from None

    if var not in ALPHABET:
        raise LiteralError(f"series variable {var!r} is not in the alphabet")
    return ev(_prepare(text))


def parse_series(items) -> TruncatedSeries:
    """A JSON-style list of polynomial literals (index = power)."""
    if not isinstance(items, (list, tuple)) or not items:
        raise LiteralError("series must be a nonempty list of polynomial literals")
    return TruncatedSeries([parse_poly(s) if isinstance(s, str) else as_poly(s) for s in items])
