"""Order-N truncations of infinite lower-triangular matrices.

Indices start at 0.  Every operation here is order-coherent: truncating the
result to order M gives the same matrix as running the operation on the
inputs truncated to M.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .exact_arith import (
    ONE,
    ZERO,
    Context,
    MultiPoly,
    NotInvertibleError,
    as_poly,
    poly_inverse,
    poly_mul,
)

__all__ = [
    "BivariateSeries",
    "LowerTriangular",
    "diag_conjugate",
    "from_toeplitz",
    "grade_lambda",
    "lt_inverse",
    "lt_inverse_blockwise",
    "lt_mul",
    "matrix_gf",
    "scale_cols_inv",
    "scale_rows",
    "toeplitz_inverse_seq",
]


class LowerTriangular:
    """N x N lower-triangular matrix stored as a dense triangle of rows."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Sequence]):
        rs = tuple(tuple(as_poly(v) for v in row) for row in rows)
        for n, row in enumerate(rs):
            if len(row) != n + 1:
                raise ValueError(f"row {n} must have {n + 1} entries, got {len(row)}")
        self.rows = rs

    @classmethod
    def build(cls, order: int, fn: Callable[[int, int], object]) -> "LowerTriangular":
        return cls([[fn(n, j) for j in range(n + 1)] for n in range(order)])

    @classmethod
    def identity(cls, order: int) -> "LowerTriangular":
        return cls.build(order, lambda n, j: 1 if n == j else 0)

    @classmethod
    def zero(cls, order: int) -> "LowerTriangular":
        return cls.build(order, lambda n, j: 0)

    @property
    def order(self) -> int:
        return len(self.rows)

    def entry(self, n: int, j: int) -> MultiPoly:
        if j > n:
            return ZERO
        return self.rows[n][j]

    def __getitem__(self, idx):
        n, j = idx
        return self.entry(n, j)

    def diagonal(self) -> list[MultiPoly]:
        return [row[-1] for row in self.rows]

    def column(self, j: int) -> list[MultiPoly]:
        return [self.rows[n][j] for n in range(j, self.order)]

    def truncate(self, order: int) -> "LowerTriangular":
        return LowerTriangular(self.rows[:order])

    def map(self, fn: Callable[[MultiPoly], object]) -> "LowerTriangular":
        return LowerTriangular([[fn(v) for v in row] for row in self.rows])

    def is_toeplitz(self) -> bool:
        return all(self.rows[n][j] == self.rows[n - j][0] for n in range(self.order) for j in range(n + 1))

    def toeplitz_data(self) -> list[MultiPoly]:
        return [row[0] for row in self.rows]

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.rows for v in row)

    def first_mismatch(self, other: "LowerTriangular"):
        """First ``(n, j)`` in row-major order where the two matrices differ."""
        if self.order != other.order:
            raise ValueError("order mismatch")
        for n in range(self.order):
            for j in range(n + 1):
                if self.rows[n][j] != other.rows[n][j]:
                    return n, j
        return None

    def __eq__(self, other):
        if not isinstance(other, LowerTriangular):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other):
        _same_order(self, other)
        return LowerTriangular([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        _same_order(self, other)
        return LowerTriangular([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda v: -v)

    def __mul__(self, other):
        if isinstance(other, LowerTriangular):
            return lt_mul(self, other)
        c = as_poly(other)
        return self.map(lambda v: v * c)

    __rmul__ = __mul__

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in row) for row in self.rows)
        return f"LowerTriangular[{body}]"


def _same_order(a: LowerTriangular, b: LowerTriangular):
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}")


def lt_mul(A: LowerTriangular, B: LowerTriangular, ctx: Context | None = None) -> LowerTriangular:
    """Entry (n, j) is sum_{k=j}^{n} A(n,k) B(k,j)."""
    _same_order(A, B)
    rows = []
    for n in range(A.order):
        arow = A.rows[n]
        row = []
        for j in range(n + 1):
            acc = ZERO
            for k in range(j, n + 1):
                a = arow[k]
                b = B.rows[k][j]
                if a and b:
                    acc = acc + poly_mul(a, b, ctx)
            row.append(acc)
        rows.append(row)
    return LowerTriangular(rows)


def _diag_inverses(A: LowerTriangular, ctx: Context | None) -> list[MultiPoly]:
    out = []
    for n, d in enumerate(A.diagonal()):
        try:
            out.append(poly_inverse(d, ctx))
        except NotInvertibleError as exc:
            raise NotInvertibleError(f"diagonal entry at row {n} is not invertible: {exc}") from None
    return out


def lt_inverse(A: LowerTriangular, ctx: Context | None = None) -> LowerTriangular:
    """Inverse by forward substitution, one column of ``A X = 1`` at a time."""
    inv_diag = _diag_inverses(A, ctx)
    N = A.order
    cols = []
    for j in range(N):
        x = {j: inv_diag[j]}
        for n in range(j + 1, N):
            arow = A.rows[n]
            acc = ZERO
            for k in range(j, n):
                if arow[k] and x[k]:
                    acc = acc + poly_mul(arow[k], x[k], ctx)
            x[n] = -poly_mul(acc, inv_diag[n], ctx)
        cols.append(x)
    return LowerTriangular([[cols[j][n] for j in range(n + 1)] for n in range(N)])


def lt_inverse_blockwise(A: LowerTriangular, ctx: Context | None = None) -> LowerTriangular:
    """Inverse grown one bordered block at a time.

    With ``A_{n+1} = [[A_n, 0], [a_n^T, alpha_n]]`` the inverse is
    ``[[A_n^{-1}, 0], [-a_n^T A_n^{-1} / alpha_n, 1/alpha_n]]``.
    """
    inv_diag = _diag_inverses(A, ctx)
    inv: list[list[MultiPoly]] = []
    for n in range(A.order):
        a = A.rows[n][:n]
        # row vector a^T times the current (n x n) inverse
        prod = []
        for j in range(n):
            acc = ZERO
            for k in range(j, n):
                if a[k] and inv[k][j]:
                    acc = acc + poly_mul(a[k], inv[k][j], ctx)
            prod.append(acc)
        inv.append([-poly_mul(v, inv_diag[n], ctx) for v in prod] + [inv_diag[n]])
    return LowerTriangular(inv)


def from_toeplitz(d: Sequence, order: int) -> LowerTriangular:
    """The matrix ``[d_{n-j}]``."""
    if len(d) < order:
        raise ValueError(f"need {order} Toeplitz entries, got {len(d)}")
    d = [as_poly(v) for v in d[:order]]
    return LowerTriangular([[d[n - j] for j in range(n + 1)] for n in range(order)])


def toeplitz_inverse_seq(d: Sequence, ctx: Context | None = None) -> list[MultiPoly]:
    """Data of ``[d_{n-j}]^{-1}`` when ``d_0 = 1``: e_0 = 1, e_k = -sum d_{k-s} e_s."""
    d = [as_poly(v) for v in d]
    if not d or d[0] != ONE:
        raise ValueError("Toeplitz data must start with 1")
    e = [ONE]
    for k in range(1, len(d)):
        acc = ZERO
        for s in range(k):
            if d[k - s] and e[s]:
                acc = acc + poly_mul(d[k - s], e[s], ctx)
        e.append(-acc)
    return e


def _inverses(alpha: Sequence, ctx: Context | None) -> list[MultiPoly]:
    out = []
    for j, a in enumerate(alpha):
        try:
            out.append(poly_inverse(as_poly(a), ctx))
        except NotInvertibleError as exc:
            raise NotInvertibleError(f"scale at index {j} is not invertible: {exc}") from None
    return out


def diag_conjugate(alpha: Sequence, A: LowerTriangular, ctx: Context | None = None) -> LowerTriangular:
    """``[{alpha_n}] A [{alpha_j}]^{-1}``, i.e. entries alpha_n a_{n,j} / alpha_j."""
    if len(alpha) < A.order:
        raise ValueError("diagonal shorter than the matrix order")
    alpha = [as_poly(a) for a in alpha[: A.order]]
    inv = _inverses(alpha, ctx)
    return LowerTriangular(
        [[poly_mul(poly_mul(alpha[n], A.rows[n][j], ctx), inv[j], ctx) for j in range(n + 1)] for n in range(A.order)]
    )


def grade_lambda(A: LowerTriangular, lam) -> LowerTriangular:
    """``[a_{n,j} lam^{n-j}]``; grading commutes with inversion."""
    lam = as_poly(lam)
    pw = [ONE]
    for _ in range(A.order):
        pw.append(pw[-1] * lam)
    return LowerTriangular([[A.rows[n][j] * pw[n - j] for j in range(n + 1)] for n in range(A.order)])


def scale_rows(A: LowerTriangular, alpha: Sequence) -> LowerTriangular:
    """``[alpha_n a_{n,j}]``."""
    alpha = [as_poly(a) for a in alpha]
    return LowerTriangular([[alpha[n] * v for v in row] for n, row in enumerate(A.rows)])


def scale_cols_inv(A: LowerTriangular, alpha: Sequence, ctx: Context | None = None) -> LowerTriangular:
    """``[b_{n,j} / alpha_j]``; the inverse partner of :func:`scale_rows`."""
    inv = _inverses(alpha[: A.order], ctx)
    return LowerTriangular([[poly_mul(v, inv[j], ctx) for j, v in enumerate(row)] for row in A.rows])


class BivariateSeries:
    """Truncated series in (xhat, y): ``grid[n][i]`` is the coefficient of xhat^i y^n."""

    __slots__ = ("grid",)

    def __init__(self, grid: Sequence[Sequence]):
        self.grid = tuple(tuple(as_poly(v) for v in row) for row in grid)
        if any(len(r) != len(self.grid) for r in self.grid):
            raise ValueError("grid must be square")

    @property
    def order(self) -> int:
        return len(self.grid)

    def coeff(self, i: int, n: int) -> MultiPoly:
        """Coefficient of ``xhat**i * y**n``."""
        return self.grid[n][i]

    @classmethod
    def from_y_series(cls, s: Sequence, order: int) -> "BivariateSeries":
        return cls([[as_poly(s[n]) if i == 0 else ZERO for i in range(order)] for n in range(order)])

    @classmethod
    def one_minus_xhat_times(cls, h: Sequence, order: int) -> "BivariateSeries":
        """``1 - xhat * h(y)``."""
        grid = [[ZERO] * order for _ in range(order)]
        grid[0][0] = ONE
        if order > 1:
            for n in range(order):
                grid[n][1] = grid[n][1] - as_poly(h[n])
        return cls(grid)

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        N = min(self.order, other.order)
        out = [[ZERO] * N for _ in range(N)]
        for n1 in range(N):
            for i1 in range(N):
                a = self.grid[n1][i1]
                if not a:
                    continue
                for n2 in range(N - n1):
                    row = other.grid[n2]
                    for i2 in range(N - i1):
                        b = row[i2]
                        if b:
                            out[n1 + n2][i1 + i2] = out[n1 + n2][i1 + i2] + a * b
        return BivariateSeries(out)

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.grid == other.grid

    def __hash__(self):
        return hash(self.grid)


def matrix_gf(A: LowerTriangular) -> BivariateSeries:
    """Generating function sum_{n,i} a_{n,i} xhat^i y^n, truncated at order N in both."""
    N = A.order
    return BivariateSeries([[A.entry(n, i) for i in range(N)] for n in range(N)])
