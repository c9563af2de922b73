"""Registry of executable identity checks.

Every check builds both sides of an identity at a finite order with exact
arithmetic and compares them entry by entry.  Checks whose natural form has
``(q)_n`` or ``[n]_q!`` denominators either work modulo ``q**D`` (the report's
``q_bound``) or are run in denominator-cleared form; each such choice is
written into the report notes.
"""

from __future__ import annotations

import fnmatch
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping

from .exact_arith import (
    ONE,
    ZERO,
    Context,
    MultiPoly,
    TruncatedSeries,
    as_poly,
    series_coeff,
    series_compose,
    series_mul,
    series_pow,
)
from .literals import parse_poly
from .riordan import (
    RiordanArray,
    decompose_appell_bell,
    gbt,
    pascal_entry_closed_form,
    pascal_h,
    pascal_substitute_closed_form,
    riordan_inv,
    riordan_mul,
    riordan_new,
    riordan_to_matrix,
    subgroup_member,
)
from .sequences import (
    H,
    H2,
    H3,
    bernoulli_numbers_recurrence,
    bernoulli_polys,
    eps,
    euler_numbers_recurrence,
    euler_polys,
    falling_factorial,
    gauss_binomial,
    hermite_pair,
    laguerre_pair,
    q_factorial,
    q_number,
    q_pochhammer,
    reflected_pochhammer,
    rising_factorial,
    rogers_szego,
)
from .triangle import (
    BivariateSeries,
    LowerTriangular,
    diag_conjugate,
    from_toeplitz,
    grade_lambda,
    lt_inverse,
    lt_mul,
    matrix_gf,
    scale_cols_inv,
    scale_rows,
    toeplitz_inverse_seq,
)

__all__ = [
    "CATALOG",
    "IdentityCheck",
    "IdentityReport",
    "TableError",
    "UnknownIdentityError",
    "list_identities",
    "lookup",
    "match_ids",
    "pair_check",
    "run",
    "run_all",
]

X = MultiPoly.var("x")
Y = MultiPoly.var("y")
Q = MultiPoly.var("q")
A_ = MultiPoly.var("a")
B_ = MultiPoly.var("b")
LAM = MultiPoly.var("lam")
ALPHA = MultiPoly.var("alpha")


class UnknownIdentityError(KeyError):
    pass


class TableError(ValueError):
    """Malformed recurrence table for :func:`pair_check`."""


@dataclass(frozen=True)
class IdentityCheck:
    id: str
    anchor: str
    builder: Callable[[int, Context, dict], list]
    defaults: Mapping = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    uses_q_bound: bool = False

    def meta(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "defaults": dict(self.defaults),
            "uses_q_bound": self.uses_q_bound,
            "notes": list(self.notes),
        }


@dataclass
class IdentityReport:
    id: str
    verdict: str
    order: int
    q_bound: int
    params: dict
    first_mismatch: dict | None
    elapsed_ms: float | None
    notes: list[str]

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self, timing: bool = False) -> dict:
        return {
            "id": self.id,
            "verdict": self.verdict,
            "order": self.order,
            "q_bound": self.q_bound,
            "params": self.params,
            "first_mismatch": self.first_mismatch,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None,
            "notes": self.notes,
        }

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), ensure_ascii=False)


CATALOG: dict[str, IdentityCheck] = {}


def identity(id_: str, anchor: str, *, notes: Iterable[str] = (), defaults: Mapping | None = None, uses_q_bound=False):
    def register(fn):
        if id_ in CATALOG:
            raise RuntimeError(f"duplicate identity id {id_}")
        CATALOG[id_] = IdentityCheck(id_, anchor, fn, dict(defaults or {}), tuple(notes), uses_q_bound)
        return fn

    return register


# -- comparison ----------------------------------------------------------------


def _s(v) -> str:
    return str(as_poly(v)) if not isinstance(v, str) else v


def _first_mismatch(lhs, rhs):
    """Return ``(n, j, lhs_value, rhs_value)`` of the first difference, or None."""
    if isinstance(lhs, LowerTriangular):
        if lhs.order != rhs.order:
            return (None, None, f"order {lhs.order}", f"order {rhs.order}")
        pos = lhs.first_mismatch(rhs)
        if pos is None:
            return None
        return (*pos, lhs.entry(*pos), rhs.entry(*pos))
    if isinstance(lhs, RiordanArray):
        for j, (a, b) in enumerate(((lhs.f, rhs.f), (lhs.h, rhs.h))):
            m = _first_mismatch(list(a), list(b))
            if m is not None:
                return (m[0], j, m[2], m[3])
        return None
    if isinstance(lhs, BivariateSeries):
        for n in range(min(lhs.order, rhs.order)):
            for i in range(min(lhs.order, rhs.order)):
                if lhs.grid[n][i] != rhs.grid[n][i]:
                    return (n, i, lhs.grid[n][i], rhs.grid[n][i])
        return None
    if isinstance(lhs, dict):
        for key in sorted(set(lhs) | set(rhs)):
            a, b = as_poly(lhs.get(key, 0)), as_poly(rhs.get(key, 0))
            if a != b:
                n, j = key if isinstance(key, tuple) else (key, None)
                return (n, j, a, b)
        return None
    if isinstance(lhs, (list, tuple, TruncatedSeries)):
        lhs, rhs = list(lhs), list(rhs)
        for n in range(max(len(lhs), len(rhs))):
            if n >= len(lhs) or n >= len(rhs):
                return (n, None, lhs[n] if n < len(lhs) else "missing", rhs[n] if n < len(rhs) else "missing")
            a, b = as_poly(lhs[n]), as_poly(rhs[n])
            if a != b:
                return (n, None, a, b)
        return None
    a, b = as_poly(lhs), as_poly(rhs)
    return None if a == b else (None, None, a, b)


# -- helpers -------------------------------------------------------------------


def T(N: int, fn) -> LowerTriangular:
    return LowerTriangular.build(N, fn)


def I(N: int) -> LowerTriangular:
    return LowerTriangular.identity(N)


def _tq(M: LowerTriangular, ctx: Context) -> LowerTriangular:
    return M.map(lambda v: v.truncate_q(ctx.q_bound))


def inverse_pair(A: LowerTriangular, B: LowerTriangular, ctx: Context | None = None) -> list:
    """A^{-1} == B, checked by inversion and by the product A B."""
    return [(lt_inverse(A, ctx), B), (lt_mul(A, B, ctx), I(A.order))]


def _rng(params) -> random.Random:
    return random.Random(params["seed"])


def _rat(rng: random.Random, nonzero=False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if v or not nonzero:
            return v


def rand_series(rng: random.Random, order: int, unit=False) -> TruncatedSeries:
    c = [Fraction(1) if unit else _rat(rng, nonzero=True)] + [_rat(rng) for _ in range(order)]
    return TruncatedSeries(c)


def rand_h(rng: random.Random, order: int) -> TruncatedSeries:
    c = [0, rng.choice([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)])] + [_rat(rng) for _ in range(order - 1)]
    return TruncatedSeries(c)


def rand_riordan(rng: random.Random, N: int) -> RiordanArray:
    return riordan_new(rand_series(rng, N - 1), rand_h(rng, N))


def rand_appell(rng: random.Random, N: int) -> RiordanArray:
    return riordan_new(rand_series(rng, N - 1), TruncatedSeries.identity(N))


def rand_int_matrix(rng: random.Random, N: int, unit_diag=False) -> LowerTriangular:
    def entry(n, j):
        if n == j:
            return 1 if unit_diag else rng.choice([-3, -2, -1, 1, 2, 3])
        return rng.randint(-5, 5)

    return T(N, entry)


def _diag(values) -> list[MultiPoly]:
    return [as_poly(v) for v in values]


def _b(N: int) -> list[Fraction]:
    return bernoulli_numbers_recurrence(N)


def _e(N: int) -> list[Fraction]:
    return euler_numbers_recurrence(N)


def _riordan_identity(N: int) -> RiordanArray:
    return RiordanArray(TruncatedSeries.one(N - 1), TruncatedSeries.identity(N))


_RANDOM = {"seed": 0, "trials": 5}


# -- Bernoulli / Euler -------------------------------------------------------------


@identity(
    "BE_POLY",
    "Eq. (B&E): [B_{n-j}(x)/(n-j)!][E_{n-j}(x)/(n-j)!] = [{2^n}][B_{n-j}(x)/(n-j)!][{2^-j}]",
    notes=("x is a live indeterminate",),
)
def _be_poly(N, ctx, params):
    B, E = bernoulli_polys(N), euler_polys(N)
    Bm = from_toeplitz([B[k] / factorial(k) for k in range(N)], N)
    Em = from_toeplitz([E[k] / factorial(k) for k in range(N)], N)
    rhs = diag_conjugate([2**n for n in range(N)], Bm)
    coeffwise = [sum((B[n] * E[k - n] * comb(k, n) for n in range(k + 1)), ZERO) for k in range(N)]
    return [(lt_mul(Bm, Em), rhs), (coeffwise, [B[k] * 2**k for k in range(N)])]


@identity("BINOM_INV", "Bernoulli-Euler pairs: [C(n,j)]^-1 = [(-1)^{n-j} C(n,j)]")
def _binom_inv(N, ctx, params):
    return inverse_pair(T(N, lambda n, j: comb(n, j)), T(N, lambda n, j: (-1) ** (n - j) * comb(n, j)))


@identity(
    "BINOM_LAMBDA",
    "Bernoulli-Euler pairs: [lam^{n-j} C(n,j)]^-1 = [(-lam)^{n-j} C(n,j)]",
    notes=(
        "printed right-hand side has C(j,n), which vanishes below the diagonal; verified with C(n,j)",
        "lam is a live indeterminate",
    ),
    defaults={"reading": "corrected"},
)
def _binom_lambda(N, ctx, params):
    if params["reading"] not in ("corrected", "printed"):
        raise ValueError("reading must be 'corrected' or 'printed'")
    A = T(N, lambda n, j: LAM ** (n - j) * comb(n, j))
    if params["reading"] == "printed":
        B = T(N, lambda n, j: (-LAM) ** (n - j) * comb(j, n))
    else:
        B = T(N, lambda n, j: (-LAM) ** (n - j) * comb(n, j))
    return inverse_pair(A, B)


@identity("H_H2", "Bernoulli-Euler pairs: [H(n-j)]^-1 = [H2(n-j)]")
def _h_h2(N, ctx, params):
    return inverse_pair(T(N, lambda n, j: H(n - j)), T(N, lambda n, j: H2(n - j)))


@identity("EPSH_H3", "Bernoulli-Euler pairs: [eps(n-j) H(n-j)]^-1 = [H3(n-j)]")
def _epsh_h3(N, ctx, params):
    return inverse_pair(T(N, lambda n, j: eps(n - j) * H(n - j)), T(N, lambda n, j: H3(n - j)))


@identity(
    "BERN_INV",
    "Eq. (BiE): [C(n,j)/(n-j+1)]^-1 = [C(n,j) B_{n-j}]",
    notes=("B_n on the right-hand side comes from the recurrence B_n = -1/(n+1) sum C(n+1,k) B_k",),
)
def _bern_inv(N, ctx, params):
    B = _b(N)
    return inverse_pair(T(N, lambda n, j: Fraction(comb(n, j), n - j + 1)), T(N, lambda n, j: comb(n, j) * B[n - j]))


@identity(
    "EULER_INV",
    "Eq. (BiE): [eps(n-j) C(n,j)]^-1 = [C(n,j) E_{n-j}]",
    notes=(
        "E_n on the right-hand side comes from the even-index recurrence",
        "the second row of the item-3 list repeats this identity; registered once",
    ),
)
def _euler_inv(N, ctx, params):
    E = _e(N)
    return inverse_pair(T(N, lambda n, j: eps(n - j) * comb(n, j)), T(N, lambda n, j: comb(n, j) * E[n - j]))


@identity(
    "SIGN_FACT",
    "Eq. (sila): [1/(n-j)!]^-1 = [(-1)^{n-j}/(n-j)!]",
    notes=("the display omits the ^-1 on the left; verified as an inverse pair",),
)
def _sign_fact(N, ctx, params):
    return inverse_pair(
        T(N, lambda n, j: Fraction(1, factorial(n - j))), T(N, lambda n, j: Fraction((-1) ** (n - j), factorial(n - j)))
    )


@identity(
    "BERN_FACT",
    "Eq. (silb): [1/(n-j+1)!]^-1 = [B_{n-j}/(n-j)!]",
    notes=("also checked as the [{n!}]-conjugate of BERN_INV",),
)
def _bern_fact(N, ctx, params):
    B = _b(N)
    A = T(N, lambda n, j: Fraction(1, factorial(n - j + 1)))
    Bm = T(N, lambda n, j: B[n - j] / factorial(n - j))
    conj = diag_conjugate([Fraction(1, factorial(n)) for n in range(N)], T(N, lambda n, j: comb(n, j) * B[n - j]))
    seq = toeplitz_inverse_seq([Fraction(1, factorial(k + 1)) for k in range(N)])
    return inverse_pair(A, Bm) + [(conj, Bm), (seq, Bm.toeplitz_data())]


@identity("EULER_FACT", "Eq. (silc): [eps(n-j)/(n-j)!]^-1 = [E_{n-j}/(n-j)!]")
def _euler_fact(N, ctx, params):
    E = _e(N)
    return inverse_pair(
        T(N, lambda n, j: Fraction(eps(n - j), factorial(n - j))), T(N, lambda n, j: E[n - j] / factorial(n - j))
    )


def _two_b(m: int, B) -> Fraction:
    return sum((comb(m, k) * 2**k * B[k] for k in range(m + 1)), Fraction(0))


@identity("EPS_2B", "Bernoulli-Euler item 3: [eps(n-j) C(n,j)/(n-j+1)]^-1 = [C(n,j) sum_k C(n-j,k) 2^k B_k]")
def _eps_2b(N, ctx, params):
    B = _b(N)
    return inverse_pair(
        T(N, lambda n, j: Fraction(eps(n - j) * comb(n, j), n - j + 1)), T(N, lambda n, j: comb(n, j) * _two_b(n - j, B))
    )


@identity("BINOM2N_EULER", "Bernoulli-Euler item 3: [C(2n,2j)]^-1 = [C(2n,2j) E_{2(n-j)}]")
def _binom2n_euler(N, ctx, params):
    E = _e(2 * N)
    return inverse_pair(T(N, lambda n, j: comb(2 * n, 2 * j)), T(N, lambda n, j: comb(2 * n, 2 * j) * E[2 * (n - j)]))


@identity(
    "BINOM2N_2B",
    "Bernoulli-Euler item 3: [C(2n,2j)/(2(n-j)+1)]^-1 = [C(2n,2j) sum_{k<=2(n-j)} C(2n-2j,k) 2^k B_k]",
)
def _binom2n_2b(N, ctx, params):
    B = _b(2 * N)
    return inverse_pair(
        T(N, lambda n, j: Fraction(comb(2 * n, 2 * j), 2 * (n - j) + 1)),
        T(N, lambda n, j: comb(2 * n, 2 * j) * _two_b(2 * (n - j), B)),
    )


@identity("EULER_ROWSUM", "Bernoulli-Euler pairs: sum_{k=0}^{s} C(2s,2k) E_{2k} = 0 for s >= 1")
def _euler_rowsum(N, ctx, params):
    E = _e(2 * N)
    lhs = [sum(comb(2 * s, 2 * k) * E[2 * k] for k in range(s + 1)) for s in range(1, N)]
    return [(lhs, [0] * len(lhs))]


@identity("BERN_ROWSUM", "Bernoulli-Euler pairs: sum_{k=0}^{2s} C(2s,k) B_k/(2s-k+1) = 0 for s >= 1")
def _bern_rowsum(N, ctx, params):
    B = _b(2 * N)
    lhs = [sum(Fraction(comb(2 * s, k)) * B[k] / (2 * s - k + 1) for k in range(2 * s + 1)) for s in range(1, N)]
    return [(lhs, [0] * len(lhs))]


def _binom0(m: int, r: int) -> int:
    return comb(m, r) if 0 <= r <= m else 0


@identity(
    "HALF_SUM",
    "Bernoulli-Euler pairs: sum_{m=floor(l/2)}^{s} C(2s-l, 2m-l)/(2s-2m+1) = 2^{2s-l}/(2s-l+1)",
    notes=("checked for every 0 <= l <= 2s, s <= order; mismatch coordinates are (s, l)",),
)
def _half_sum(N, ctx, params):
    lhs, rhs = {}, {}
    for s in range(N + 1):
        for l in range(2 * s + 1):
            lhs[(s, l)] = sum(
                (Fraction(_binom0(2 * s - l, 2 * m - l), 2 * s - 2 * m + 1) for m in range(l // 2, s + 1)), Fraction(0)
            )
            rhs[(s, l)] = Fraction(2 ** (2 * s - l), 2 * s - l + 1)
    return [(lhs, rhs)]


@identity(
    "SIL2A",
    "Eq. (sil2a): [eps(n-j)/(n-j+1)!]^-1 = [sum_{k<=n-j} 2^k B_k/(k!(n-j-k)!)]",
    notes=(
        "as printed the power 2^k sits on the index opposite B; that reading fails at (1,0)."
        " Verified with 2^k B_k, matching the companion (sil2c) form",
    ),
    defaults={"reading": "corrected"},
)
def _sil2a(N, ctx, params):
    B = _b(N)
    if params["reading"] == "printed":
        rhs = lambda m: sum((Fraction(2**k) * B[m - k] / (factorial(k) * factorial(m - k)) for k in range(m + 1)), Fraction(0))
    elif params["reading"] == "corrected":
        rhs = lambda m: sum((Fraction(2**k) * B[k] / (factorial(k) * factorial(m - k)) for k in range(m + 1)), Fraction(0))
    else:
        raise ValueError("reading must be 'corrected' or 'printed'")
    return inverse_pair(T(N, lambda n, j: Fraction(eps(n - j), factorial(n - j + 1))), T(N, lambda n, j: rhs(n - j)))


@identity("SIL2B", "Eq. (sil2b): [1/(2(n-j))!]^-1 = [E_{2(n-j)}/(2(n-j))!]")
def _sil2b(N, ctx, params):
    E = _e(2 * N)
    return inverse_pair(
        T(N, lambda n, j: Fraction(1, factorial(2 * (n - j)))), T(N, lambda n, j: E[2 * (n - j)] / factorial(2 * (n - j)))
    )


@identity("SIL2C", "Eq. (sil2c): [1/(2(n-j)+1)!]^-1 = [sum_{k<=2(n-j)} 2^k B_k/(k!(2(n-j)-k)!)]")
def _sil2c(N, ctx, params):
    B = _b(2 * N)

    def rhs(m):
        return sum((Fraction(2**k) * B[k] / (factorial(k) * factorial(m - k)) for k in range(m + 1)), Fraction(0))

    return inverse_pair(T(N, lambda n, j: Fraction(1, factorial(2 * (n - j) + 1))), T(N, lambda n, j: rhs(2 * (n - j))))


# -- rising and falling factorials -------------------------------------------------


@identity(
    "POCHH_SELF",
    "Eq. (=odwr): [(-1)^j C(n,j) (x)^(n)/(x)^(j)] is its own inverse",
    notes=("(x)^(n)/(x)^(j) is used in its cancelled polynomial form (x+j)^(n-j); x is a live indeterminate",),
)
def _pochh_self(N, ctx, params):
    M = T(N, lambda n, j: (-1) ** j * comb(n, j) * rising_factorial(n - j, X + j))
    cancel = [
        (rising_factorial(n), rising_factorial(j) * rising_factorial(n - j, X + j)) for n in range(N) for j in range(n + 1)
    ]
    return inverse_pair(M, M) + [([a for a, _ in cancel], [b for _, b in cancel])]


@identity("POCHH_RISING", "Factorial pairs: [(x)^(n-j)/(n-j)!]^-1 = [(-x)^(n-j)/(n-j)!]", notes=("x is a live indeterminate",))
def _pochh_rising(N, ctx, params):
    return inverse_pair(
        T(N, lambda n, j: rising_factorial(n - j) / factorial(n - j)),
        T(N, lambda n, j: rising_factorial(n - j, -X) / factorial(n - j)),
    )


@identity("POCHH_FALLING", "Factorial pairs: [(x)_(n-j)/(n-j)!]^-1 = [(-x)_(n-j)/(n-j)!]", notes=("x is a live indeterminate",))
def _pochh_falling(N, ctx, params):
    return inverse_pair(
        T(N, lambda n, j: falling_factorial(n - j) / factorial(n - j)),
        T(N, lambda n, j: falling_factorial(n - j, -X) / factorial(n - j)),
    )


@identity(
    "POCHH_SQBIN",
    "Factorial pairs: [(n-j)! C(n,j)^2]^-1 = [(-1)^{n-j} (n-j)! C(n,j)^2]; [(-1)^n (n-j)! C(n,j)^2] is an involution",
)
def _pochh_sqbin(N, ctx, params):
    A = T(N, lambda n, j: factorial(n - j) * comb(n, j) ** 2)
    B = T(N, lambda n, j: (-1) ** (n - j) * factorial(n - j) * comb(n, j) ** 2)
    S = T(N, lambda n, j: (-1) ** n * factorial(n - j) * comb(n, j) ** 2)
    return inverse_pair(A, B) + inverse_pair(S, S)


@identity(
    "POCHH_REFLECT",
    "Eq. (Pochh): (x)_(n) = (-1)^n (-x)^(n) and (x)^(n) = (-1)^n (-x)_(n)",
    notes=("x is a live indeterminate",),
)
def _pochh_reflect(N, ctx, params):
    return [
        ([falling_factorial(n) for n in range(N)], [rising_factorial(n, -X) * (-1) ** n for n in range(N)]),
        ([rising_factorial(n) for n in range(N)], [falling_factorial(n, -X) * (-1) ** n for n in range(N)]),
    ]


@identity(
    "POCHH_VANDERMONDE",
    "Eqs. (sum1)/(sum2): (a+b)^(n) = sum_j C(n,j) (a)^(n-j) (b)^(j), and likewise for falling factorials",
    notes=("alpha, beta are realised by the live indeterminates a, b",),
)
def _pochh_vandermonde(N, ctx, params):
    out = []
    for fn in (rising_factorial, falling_factorial):
        lhs = [fn(n, A_ + B_) for n in range(N)]
        rhs = [sum((fn(n - j, A_) * fn(j, B_) * comb(n, j) for j in range(n + 1)), ZERO) for n in range(N)]
        out.append((lhs, rhs))
    return out


@identity(
    "BIN_SERIES",
    "Eq. (bin): (1-x)^alpha = sum_j (-x)^j (alpha)_(j)/j! = sum_j x^j (-alpha)^(j)/j!",
    notes=(
        "checked as formal series: for integer alpha = 0..order-1 against the expanded power,"
        " and for symbolic alpha through the product law S(a) S(b) = S(a+b)",
    ),
)
def _bin_series(N, ctx, params):
    def S1(al):
        return TruncatedSeries([falling_factorial(j, al) * Fraction((-1) ** j, factorial(j)) for j in range(N)])

    def S2(al):
        return TruncatedSeries([rising_factorial(j, -as_poly(al)) / factorial(j) for j in range(N)])

    out = []
    one_minus = TruncatedSeries([1, -1], N - 1)
    for m in range(N):
        power = series_pow(one_minus, m)
        out.append((S1(m), power))
        out.append((S2(m), power))
    out.append((series_mul(S1(A_), S1(B_)), S1(A_ + B_)))
    out.append((S1(A_), S2(A_)))
    return out


# -- q-series ------------------------------------------------------------------


@identity(
    "FBIN",
    "Eq. (fbin): (a|q)_n = sum_j (-a)^j q^C(j,2) [n;j]_q",
    notes=("a and q are live indeterminates",),
)
def _fbin(N, ctx, params):
    lhs = [q_pochhammer(A_, n) for n in range(N)]
    rhs = [
        sum(((-A_) ** j * Q ** comb(j, 2) * gauss_binomial(n, j) for j in range(n + 1)), ZERO) for n in range(N)
    ]
    return [(lhs, rhs)]


@identity("QBIN_ROWSUM", "post-(fbin): sum_j [n;j]_q (-1)^j q^C(j,2) = 0 for n >= 1")
def _qbin_rowsum(N, ctx, params):
    lhs = [sum((gauss_binomial(n, j) * Q ** comb(j, 2) * (-1) ** j for j in range(n + 1)), ZERO) for n in range(1, N)]
    return [(lhs, [0] * len(lhs))]


@identity(
    "QNOTATION",
    "Eqs. (dqbin), (q1), (q2): (q)_n = (1-q)^n [n]_q!, [n;k]_q (q)_{n-k} (q)_k = (q)_n, and the q = 1, q = 0 values",
    notes=("(dqbin) is checked cross-multiplied, so no division by (q)_k is needed",),
)
def _qnotation(N, ctx, params):
    qq = [q_pochhammer(Q, n) for n in range(N)]
    out = [(qq, [(1 - Q) ** n * q_factorial(n) for n in range(N)])]
    cross = {(n, k): gauss_binomial(n, k) * qq[n - k] * qq[k] for n in range(N) for k in range(n + 1)}
    out.append((cross, {(n, k): qq[n] for n in range(N) for k in range(n + 1)}))
    at1 = {}
    want1 = {}
    at0 = {}
    want0 = {}
    for n in range(N):
        at1[(n, 0)], want1[(n, 0)] = q_number(n).substitute("q", 1), n
        at1[(n, 1)], want1[(n, 1)] = q_factorial(n).substitute("q", 1), factorial(n)
        at1[(n, 2)], want1[(n, 2)] = q_pochhammer(A_, n).substitute("q", 1), (1 - A_) ** n
        at0[(n, 0)], want0[(n, 0)] = q_number(n).substitute("q", 0), 1 if n >= 1 else 0
        at0[(n, 1)], want0[(n, 1)] = q_factorial(n).substitute("q", 0), 1
        at0[(n, 2)], want0[(n, 2)] = q_pochhammer(A_, n).substitute("q", 0), 1 if n == 0 else 1 - A_
        for k in range(n + 1):
            at1[(n, 3 + k)], want1[(n, 3 + k)] = gauss_binomial(n, k).substitute("q", 1), comb(n, k)
            at0[(n, 3 + k)], want0[(n, 3 + k)] = gauss_binomial(n, k).substitute("q", 0), 1
    return out + [(at1, want1), (at0, want0)]


def _qq_inv(n: int, ctx: Context) -> MultiPoly:
    from .exact_arith import poly_inverse

    return poly_inverse(q_pochhammer(Q, n), ctx)


@identity(
    "QEXP_INV",
    "Corollary vqbin 1: [x^{n-j}/(q)_{n-j}]^-1 = [(-1)^{n-j} x^{n-j} q^C(n-j,2)/(q)_{n-j}]",
    notes=("1/(q)_k is expanded in Q[[q]]; entries are compared modulo q^q_bound", "x is a live indeterminate"),
    uses_q_bound=True,
)
def _qexp_inv(N, ctx, params):
    inv = [_qq_inv(k, ctx) for k in range(N)]
    A = T(N, lambda n, j: (X ** (n - j) * inv[n - j]).truncate_q(ctx.q_bound))
    B = T(N, lambda n, j: (X ** (n - j) * Q ** comb(n - j, 2) * (-1) ** (n - j) * inv[n - j]).truncate_q(ctx.q_bound))
    return inverse_pair(A, B, ctx)


@identity(
    "QFACT_INV",
    "Corollary vqbin 1 at x = 1-q: [1/[n-j]_q!]^-1 = [(-1)^{n-j} q^C(n-j,2)/[n-j]_q!]",
    notes=(
        "printed exponent is C(n-j+1,2); substituting x = 1-q into the preceding display gives C(n-j,2),"
        " and the printed reading fails at (1,0)",
        "1/[k]_q! is expanded in Q[[q]]; entries are compared modulo q^q_bound",
    ),
    defaults={"reading": "corrected"},
    uses_q_bound=True,
)
def _qfact_inv(N, ctx, params):
    from .exact_arith import poly_inverse

    if params["reading"] not in ("corrected", "printed"):
        raise ValueError("reading must be 'corrected' or 'printed'")
    shift = 1 if params["reading"] == "printed" else 0
    inv = [poly_inverse(q_factorial(k), ctx) for k in range(N)]
    A = T(N, lambda n, j: inv[n - j])
    B = T(N, lambda n, j: (Q ** comb(n - j + shift, 2) * (-1) ** (n - j) * inv[n - j]).truncate_q(ctx.q_bound))
    return inverse_pair(A, B, ctx)


@identity(
    "QBIN_INV",
    "Eq. (qbin): [x^{n-j} [n;j]_q]^-1 = [(-x)^{n-j} q^C(n-j,2) [n;j]_q]",
    notes=(
        "denominator-cleared form of QEXP_INV: conjugation by [{(q)_n}]; exact in Q[x, q]",
        "x and q are live indeterminates",
    ),
)
def _qbin_inv(N, ctx, params):
    A = T(N, lambda n, j: X ** (n - j) * gauss_binomial(n, j))
    B = T(N, lambda n, j: (-X) ** (n - j) * Q ** comb(n - j, 2) * gauss_binomial(n, j))
    return inverse_pair(A, B)


@identity(
    "QPOCH_PAIR",
    "Corollary vqbin 2: [y^{n-j} [n;j]_q (x|q)_{n-j}]^-1 = [y^{n-j} x^{n-j} [n;j]_q (1/x|q)_{n-j}]",
    notes=(
        "x^k (1/x|q)_k is used in its polynomial form prod_{i<k} (x - q^i)",
        "cleared form is exact in Q[x, y, q]; the (q)_{n-j}-denominator form is compared modulo q^q_bound",
    ),
    uses_q_bound=True,
)
def _qpoch_pair(N, ctx, params):
    A = T(N, lambda n, j: Y ** (n - j) * gauss_binomial(n, j) * q_pochhammer(X, n - j))
    B = T(N, lambda n, j: Y ** (n - j) * gauss_binomial(n, j) * reflected_pochhammer(X, n - j))
    inv = [_qq_inv(k, ctx) for k in range(N)]
    As = T(N, lambda n, j: (Y ** (n - j) * q_pochhammer(X, n - j) * inv[n - j]).truncate_q(ctx.q_bound))
    Bs = T(N, lambda n, j: (Y ** (n - j) * reflected_pochhammer(X, n - j) * inv[n - j]).truncate_q(ctx.q_bound))
    return inverse_pair(A, B) + inverse_pair(As, Bs, ctx)


def _q_infinite(var_coef: MultiPoly, N: int, ctx: Context) -> TruncatedSeries:
    """(c t | q)_infinity modulo q^D as a series in t of order N - 1."""
    out = TruncatedSeries.one(N - 1)
    for j in range(ctx.q_bound):
        factor = TruncatedSeries([1, -var_coef * Q**j], N - 1)
        out = series_mul(out, factor, ctx)
    return out


@identity(
    "EULER_PROD",
    "Eqs. (binT)/(obinT): 1/(t)_inf = sum_k t^k/(q)_k and (t)_inf = sum_k (-1)^k q^C(k,2) t^k/(q)_k",
    notes=(
        "(t)_inf is replaced by the finite product over j < q_bound, which agrees with it modulo q^q_bound;"
        " both sides are compared to t-order order-1 modulo q^q_bound",
    ),
    uses_q_bound=True,
)
def _euler_prod(N, ctx, params):
    tinf = _q_infinite(ONE, N, ctx)
    inv = [_qq_inv(k, ctx) for k in range(N)]
    s1 = TruncatedSeries(inv)
    s2 = TruncatedSeries([(Q ** comb(k, 2) * (-1) ** k * inv[k]).truncate_q(ctx.q_bound) for k in range(N)])
    return [(series_mul(tinf, s1, ctx), TruncatedSeries.one(N - 1)), (s2, tinf)]


@identity(
    "QGF_RATIO",
    "Proposition (q-series) 1: sum_j y^j (x)_j/(q)_j = (yx)_inf/(y)_inf",
    notes=("checked as (y)_inf * sum_j y^j (x)_j/(q)_j = (yx)_inf modulo q^q_bound, y-order order-1",),
    uses_q_bound=True,
)
def _qgf_ratio(N, ctx, params):
    inv = [_qq_inv(k, ctx) for k in range(N)]
    s = TruncatedSeries([poly_mul_t(q_pochhammer(X, j), inv[j], ctx) for j in range(N)])
    return [(series_mul(_q_infinite(ONE, N, ctx), s, ctx), _q_infinite(X, N, ctx))]


def poly_mul_t(a, b, ctx):
    from .exact_arith import poly_mul

    return poly_mul(a, b, ctx)


@identity(
    "QNAW_ZERO",
    "Eq. (qnaw): sum_j [n;j]_q (x)_{n-j} x^j (1/x)_j = 0 for n >= 1",
    notes=("x^j (1/x)_j is used in its polynomial form prod_{i<j} (x - q^i); exact in Q[x, q]",),
)
def _qnaw_zero(N, ctx, params):
    lhs = [
        sum((gauss_binomial(n, j) * q_pochhammer(X, n - j) * reflected_pochhammer(X, j) for j in range(n + 1)), ZERO)
        for n in range(1, N)
    ]
    return [(lhs, [0] * len(lhs))]


@identity(
    "RS_GF",
    "Rogers-Szego: sum_s t^s R_s(x|q)/(q)_s = 1/((t)_inf (tx)_inf)",
    notes=("checked as (t)_inf (tx)_inf * sum_s t^s R_s/(q)_s = 1 modulo q^q_bound, t-order order-1",),
    uses_q_bound=True,
)
def _rs_gf(N, ctx, params):
    R, _ = rogers_szego(N)
    inv = [_qq_inv(k, ctx) for k in range(N)]
    s = TruncatedSeries([poly_mul_t(R[k], inv[k], ctx) for k in range(N)])
    prod = series_mul(_q_infinite(ONE, N, ctx), _q_infinite(X, N, ctx), ctx)
    return [(series_mul(prod, s, ctx), TruncatedSeries.one(N - 1))]


@identity(
    "RS_PAIR",
    "Rogers-Szego: sum_j [n;j]_q R_j Rhat_{n-j} = delta_{n,0}, so [R_{n-j}/(q)_{n-j}]^-1 = [Rhat_{n-j}/(q)_{n-j}]",
    notes=(
        "matrix pair verified in denominator-cleared form [[n;j]_q R_{n-j}] [[n;j]_q Rhat_{n-j}] = 1"
        " (conjugation by [{(q)_n}]); exact in Q[x, q]",
    ),
)
def _rs_pair(N, ctx, params):
    R, Rh = rogers_szego(N)
    conv = [sum((gauss_binomial(n, j) * R[j] * Rh[n - j] for j in range(n + 1)), ZERO) for n in range(N)]
    delta = [1] + [0] * (N - 1)
    A = T(N, lambda n, j: gauss_binomial(n, j) * R[n - j])
    B = T(N, lambda n, j: gauss_binomial(n, j) * Rh[n - j])
    return [(conv, delta)] + inverse_pair(A, B)


# -- classical orthogonal polynomials ----------------------------------------------------


@identity(
    "LAGUERRE_PAIR",
    "Laguerre: [L_{n-j}(x)]^-1 = [Lc_{n-j}(x)], with sum_n t^n Lc_n = (1-t) exp(t x/(1-t))",
    notes=("L_n is expanded from (1/(1-t)) exp(-t x/(1-t)); Lc_n from its case table",),
)
def _laguerre_pair(N, ctx, params):
    L, C = laguerre_pair(N)
    geom = TruncatedSeries.geometric(N - 1)
    inner = series_mul(TruncatedSeries([0, X], N - 1), geom)
    gf = series_mul(TruncatedSeries([1, -1], N - 1), series_compose(TruncatedSeries.exp(N - 1), inner))
    return inverse_pair(from_toeplitz(L, N), from_toeplitz(C, N)) + [(gf, C)]


@identity(
    "HERMITE_PAIR",
    "Hermite: [He_{n-j}(x)/(n-j)!]^-1 = [i^{n-j} He_{n-j}(i x)/(n-j)!]",
    notes=(
        "He_n from He_{n+1} = x He_n - n He_{n-1}; i^n He_n(i x) is realised as G_n with G_{n+1} = -x G_n + n G_{n-1}",
        "G_n is also checked coefficientwise against i^{n+m} times the x^m coefficient of He_n",
    ),
)
def _hermite_pair(N, ctx, params):
    He, G = hermite_pair(N)
    A = from_toeplitz([He[k] / factorial(k) for k in range(N)], N)
    B = from_toeplitz([G[k] / factorial(k) for k in range(N)], N)
    twisted = []
    for n in range(N):
        acc = ZERO
        for m, c in enumerate(He[n].coefficients_in("x")):
            if c:
                if (n + m) % 2:
                    raise AssertionError("He_n has the wrong parity")
                acc = acc + c * X**m * (-1) ** ((n + m) // 2)
        twisted.append(acc)
    return inverse_pair(A, B) + [(twisted, G)]


# -- Riordan group ---------------------------------------------------------------------


@identity(
    "ROMAN_PRODUCT",
    "Theorem (Roman): (a, b)(c, d) = (a c(b), d(b)), and the matrix of the product is the product of the matrices",
    notes=("hypotheses read as b(0) = d(0) = 0, b'(0) != 0 != d'(0)",),
    defaults=_RANDOM,
)
def _roman_product(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        R1, R2 = rand_riordan(rng, N), rand_riordan(rng, N)
        out.append((riordan_to_matrix(riordan_mul(R1, R2)), lt_mul(riordan_to_matrix(R1), riordan_to_matrix(R2))))
    return out


@identity(
    "ROMAN_INVERSE",
    "Theorem (Roman): (a, b)^-1 = (1/a(bbar), bbar) with bbar(b(x)) = b(bbar(x)) = x",
    defaults=_RANDOM,
)
def _roman_inverse(N, ctx, params):
    rng = _rng(params)
    out = []
    e = _riordan_identity(N)
    for _ in range(params["trials"]):
        R = rand_riordan(rng, N)
        Ri = riordan_inv(R)
        out += [
            (riordan_mul(R, Ri), e),
            (riordan_mul(Ri, R), e),
            (riordan_to_matrix(Ri), lt_inverse(riordan_to_matrix(R))),
            (series_compose(R.h, Ri.h), TruncatedSeries.identity(N)),
        ]
    return out


def _member(kind: str, R: RiordanArray) -> int:
    return int(subgroup_member(kind, R).member)


@identity(
    "SUBGROUP_I",
    "Lemma subgr 1: (p1, b1 x/(1-a1 x))(p2, b2 x/(1-a2 x)) = (p1 p2(b1 x/(1-a1 x)), b1 b2 x/(1-(a1+b1 a2) x))",
    defaults=_RANDOM,
)
def _subgroup_i(N, ctx, params):
    rng = _rng(params)
    out = []
    for t in range(params["trials"]):
        p1, p2 = rand_series(rng, N - 1), rand_series(rng, N - 1)
        b1, b2 = _rat(rng, True), _rat(rng, True)
        a1 = ALPHA if t == 0 else _rat(rng)
        a2 = _rat(rng)
        R1 = riordan_new(p1, pascal_h(a1, N, b1))
        R2 = riordan_new(p2, pascal_h(a2, N, b2))
        h1 = pascal_h(a1, N, b1)
        rule = RiordanArray(series_mul(p1, series_compose(p2, h1)), pascal_h(a1 + b1 * a2, N, b1 * b2))
        prod = riordan_mul(R1, R2)
        out += [(prod, rule), (_member("IGroup", prod), 1)]
    return out


@identity(
    "SUBGROUP_L",
    "Lemma subgr 2: (p1, a1 x)(p2, a2 x) = (p1 p2(a1 x), a1 a2 x); Appell and p(0)=1 subgroups closed",
    defaults=_RANDOM,
)
def _subgroup_l(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        p1, p2 = rand_series(rng, N - 1), rand_series(rng, N - 1)
        a1, a2 = _rat(rng, True), _rat(rng, True)
        R1 = riordan_new(p1, TruncatedSeries([0, a1], N))
        R2 = riordan_new(p2, TruncatedSeries([0, a2], N))
        rule = RiordanArray(
            series_mul(p1, TruncatedSeries([p2[k] * a1**k for k in range(N)])), TruncatedSeries([0, a1 * a2], N)
        )
        prod = riordan_mul(R1, R2)
        out += [(prod, rule), (_member("LGroup", prod), 1)]
        A1, A2 = rand_appell(rng, N), rand_appell(rng, N)
        pa = riordan_mul(A1, A2)
        out += [(pa, RiordanArray(series_mul(A1.f, A2.f), A1.h)), (_member("Appell", pa), 1)]
        O1 = riordan_new(rand_series(rng, N - 1, unit=True), TruncatedSeries.identity(N))
        O2 = riordan_new(rand_series(rng, N - 1, unit=True), TruncatedSeries.identity(N))
        out.append((_member("OGroup", riordan_mul(O1, O2)), 1))
    return out


@identity(
    "SUBGROUP_P",
    "Lemma subgr 3: (p1, x/(1-a1 x))(p2, x/(1-a2 x)) = (p1 p2(x/(1-a1 x)), x/(1-(a1+a2) x))",
    defaults=_RANDOM,
)
def _subgroup_p(N, ctx, params):
    rng = _rng(params)
    out = []
    for t in range(params["trials"]):
        p1, p2 = rand_series(rng, N - 1), rand_series(rng, N - 1)
        a1 = ALPHA if t == 0 else _rat(rng)
        a2 = _rat(rng)
        R1, R2 = riordan_new(p1, pascal_h(a1, N)), riordan_new(p2, pascal_h(a2, N))
        rule = RiordanArray(series_mul(p1, series_compose(p2, pascal_h(a1, N))), pascal_h(a1 + a2, N))
        prod = riordan_mul(R1, R2)
        out += [(prod, rule), (_member("PascalGen", prod), 1)]
    # generalized Pascal with p = 1, alpha and alpha'
    h = riordan_mul(riordan_new(TruncatedSeries.one(N - 1), pascal_h(ALPHA, N)), riordan_new(TruncatedSeries.one(N - 1), pascal_h(2, N))).h
    out.append((h, pascal_h(ALPHA + 2, N)))
    return out


@identity("SUBGROUP_C", "Lemma subgr 4: (1, p1)(1, p2) = (1, p2(p1))", defaults=_RANDOM)
def _subgroup_c(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        p1, p2 = rand_h(rng, N), rand_h(rng, N)
        one = TruncatedSeries.one(N - 1)
        prod = riordan_mul(riordan_new(one, p1), riordan_new(one, p2))
        out += [(prod, RiordanArray(one, series_compose(p2, p1))), (_member("Associated", prod), 1)]
    return out


@identity(
    "SUBGROUP_B",
    "Lemma subgr 5: (g1, x g1)(g2, x g2) = (g1 g2(x g1), x g1 g2(x g1))",
    defaults=_RANDOM,
)
def _subgroup_b(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        g1, g2 = rand_series(rng, N), rand_series(rng, N)
        R1 = riordan_new(g1.truncate(N - 1), g1.shift_up())
        R2 = riordan_new(g2.truncate(N - 1), g2.shift_up())
        xg1 = g1.shift_up()
        g = series_mul(g1, series_compose(g2, xg1))
        prod = riordan_mul(R1, R2)
        out += [(prod, RiordanArray(g.truncate(N - 1), g.shift_up())), (_member("Bell", prod), 1)]
    return out


@identity(
    "CHAIN",
    "Lemma subgr 6: R > I(p,a,alpha) > P(p,alpha) > A(p) > O(p), R > C",
    notes=(
        "membership is decided at the stated order; each member of a smaller subgroup must pass every larger shape test",
    ),
    defaults=_RANDOM,
)
def _chain(N, ctx, params):
    rng = _rng(params)
    lhs, rhs = [], []

    def expect(kind, R, want=1):
        lhs.append(_member(kind, R))
        rhs.append(want)

    for _ in range(params["trials"]):
        O = riordan_new(rand_series(rng, N - 1, unit=True), TruncatedSeries.identity(N))
        for kind in ("OGroup", "Appell", "PascalGen", "IGroup", "LGroup"):
            expect(kind, O)
        Ap = rand_appell(rng, N)
        for kind in ("Appell", "PascalGen", "IGroup"):
            expect(kind, Ap)
        P = riordan_new(rand_series(rng, N - 1), pascal_h(_rat(rng, True), N))
        expect("PascalGen", P)
        expect("IGroup", P)
        expect("Appell", P, 0)
        L = riordan_new(rand_series(rng, N - 1), TruncatedSeries([0, _rat(rng, True)], N))
        expect("IGroup", L)
        expect("LGroup", L)
    return [(lhs, rhs)]


@identity(
    "APPELL_NORMAL",
    "Riordan group remark: the Appell subgroup is normal in the Riordan group",
    notes=("R A R^-1 is tested for Appell shape at the stated order",),
    defaults=_RANDOM,
)
def _appell_normal(N, ctx, params):
    rng = _rng(params)
    lhs = []
    for _ in range(params["trials"]):
        R, A = rand_riordan(rng, N), rand_appell(rng, N)
        lhs.append(_member("Appell", riordan_mul(riordan_mul(R, A), riordan_inv(R))))
    return [(lhs, [1] * len(lhs))]


@identity(
    "APPELL_BELL",
    "Riordan group remark: (x g/f, x)(f/x, f) = (g, f), an Appell times a Bell matrix",
    defaults=_RANDOM,
)
def _appell_bell(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        R = rand_riordan(rng, N)
        ap, bell = decompose_appell_bell(R)
        out += [(riordan_mul(ap, bell), R), (_member("Appell", ap), 1), (_member("Bell", bell), 1)]
    return out


@identity(
    "TWO_PASCAL",
    "Remark after Corollary Appell: (d, x/(1-alpha x))(1, x/(1+alpha x)) = (d, x)",
    notes=("alpha is a live indeterminate",),
    defaults=_RANDOM,
)
def _two_pascal(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        d = rand_series(rng, N - 1)
        lhs = riordan_mul(riordan_new(d, pascal_h(ALPHA, N)), riordan_new(TruncatedSeries.one(N - 1), pascal_h(-ALPHA, N)))
        out.append((lhs, RiordanArray(d, TruncatedSeries.identity(N))))
    return out


@identity(
    "MN1",
    "Eq. (Mn1): (1/(1-alpha x), x/(1-alpha x))(d, x) = (D(x, alpha), x/(1-alpha x)), D the GBT(alpha) of d",
    notes=("alpha is a live indeterminate",),
    defaults=_RANDOM,
)
def _mn1(N, ctx, params):
    rng = _rng(params)
    out = []
    P = riordan_new(TruncatedSeries.geometric(N - 1, ALPHA), pascal_h(ALPHA, N))
    for _ in range(params["trials"]):
        d = rand_series(rng, N - 1)
        lhs = riordan_mul(P, riordan_new(d, TruncatedSeries.identity(N)))
        out.append((lhs, RiordanArray(TruncatedSeries(gbt(d, ALPHA)), pascal_h(ALPHA, N))))
    return out


@identity(
    "MN2_GENERIC",
    "Corollary Appell 1: (d, x)(c, k) = (d c, k) and (a, b)(d, x) = (a d(b), b); Eq. (Mn2) is the instance"
    " c = 1/(1-alpha x), k = x/(1-x)",
    notes=(
        "the display mixes x/(1-alpha x) and x/(1-x); the generic product rule covers both readings and the"
        " printed instance is checked as written",
    ),
    defaults=_RANDOM,
)
def _mn2_generic(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        d = riordan_new(rand_series(rng, N - 1), TruncatedSeries.identity(N))
        R = rand_riordan(rng, N)
        out.append((riordan_mul(d, R), RiordanArray(series_mul(d.f, R.f), R.h)))
        out.append((riordan_mul(R, d), RiordanArray(series_mul(R.f, series_compose(d.f, R.h)), R.h)))
        printed = riordan_new(TruncatedSeries.geometric(N - 1, ALPHA), pascal_h(1, N))
        out.append((riordan_mul(d, printed), RiordanArray(series_mul(TruncatedSeries.geometric(N - 1, ALPHA), d.f), pascal_h(1, N))))
    return out


@identity(
    "COR_APPELL_2",
    "Corollary Appell 2: (1/(1-alpha x), x/(1-alpha x))(d, x/(1+alpha x)) = (D(x, alpha), x)",
    notes=("alpha is a live indeterminate",),
    defaults=_RANDOM,
)
def _cor_appell_2(N, ctx, params):
    rng = _rng(params)
    out = []
    P = riordan_new(TruncatedSeries.geometric(N - 1, ALPHA), pascal_h(ALPHA, N))
    for _ in range(params["trials"]):
        d = rand_series(rng, N - 1)
        lhs = riordan_mul(P, riordan_new(d, pascal_h(-ALPHA, N)))
        out.append((lhs, RiordanArray(TruncatedSeries(gbt(d, ALPHA)), TruncatedSeries.identity(N))))
    return out


@identity(
    "GBT_INV",
    "Remark simple 2: GBT(-alpha) GBT(alpha) = id, sum_n hat p_n x^n = p(x/(1-alpha x))/(1-alpha x),"
    " [[x^n]] p(x/(1-alpha x)) = hat p_n - alpha hat p_{n-1}",
    notes=("alpha is a live indeterminate",),
    defaults=_RANDOM,
)
def _gbt_inv(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        p = rand_series(rng, N - 1)
        hat = gbt(p, ALPHA)
        out.append((gbt(hat, -ALPHA), list(p)))
        sub = series_compose(p, pascal_h(ALPHA, N - 1))
        out.append((hat, series_mul(TruncatedSeries.geometric(N - 1, ALPHA), sub)))
        out.append((sub, [hat[0]] + [hat[n] - ALPHA * hat[n - 1] for n in range(1, N)]))
    return out


_ALPHAS = (0, 1, -1, 2, "alpha")


def _alpha_value(a):
    return ALPHA if a == "alpha" else as_poly(a)


@identity(
    "PASCAL_CF1",
    "Proposition Pascal 1: [[x^n]] p(x)(x/(1-alpha x))^k = sum_{j<=n-k} p_j alpha^{n-k-j} C(n-j-1, k-1)",
    notes=(
        "alpha ranges over 0, 1, -1, 2 and a live indeterminate; the j = n-k term uses C(k-1, k-1) = 1, including k = 0",
    ),
    defaults={"seed": 0},
)
def _pascal_cf1(N, ctx, params):
    rng = _rng(params)
    p = rand_series(rng, N - 1)
    out = []
    for a in _ALPHAS:
        al = _alpha_value(a)
        h = pascal_h(al, N - 1)
        lhs, rhs = {}, {}
        col = p
        for k in range(N):
            for n in range(k, N):
                lhs[(n, k)] = pascal_entry_closed_form(p, al, n, k)
                rhs[(n, k)] = series_coeff(col, n)
            col = series_mul(col, h)
        out.append((lhs, rhs))
    ones = TruncatedSeries.geometric(N - 1)
    out.append(({(n, k): pascal_entry_closed_form(ones, 1, n, k) for n in range(N) for k in range(n + 1)},
                {(n, k): comb(n, k) for n in range(N) for k in range(n + 1)}))
    return out


@identity(
    "PASCAL_CF2",
    "Proposition Pascal 2: p(x/(1-alpha x)) = p_0 + sum_s x^s sum_{j<s} p_{j+1} alpha^{s-1-j} C(s-1, j)",
    notes=("alpha ranges over 0, 1, -1, 2 and a live indeterminate",),
    defaults={"seed": 0},
)
def _pascal_cf2(N, ctx, params):
    rng = _rng(params)
    p = rand_series(rng, N - 1)
    out = []
    for a in _ALPHAS:
        al = _alpha_value(a)
        out.append((pascal_substitute_closed_form(p, al), series_compose(p, pascal_h(al, N - 1))))
    return out


@identity(
    "ZERO_DIV",
    "Ring structure: [[a0,0,0],[a1,0,0],[a2,0,0]] [[0,0,0],[0,b1,0],[b2,b3,b4]] = 0",
    notes=(
        "entries are the live nonzero polynomials a, a^2, a^3 and b, b^2, b^3, b^4",
        "the accompanying claim about a nonzero (0,0) entry fails for singular matrices"
        " (diag(1,0) times diag(0,1) is 0); it is checked only for invertible A against random nonzero B",
    ),
    defaults=_RANDOM,
)
def _zero_div(N, ctx, params):
    L = LowerTriangular([[A_], [A_**2, 0], [A_**3, 0, 0]])
    R = LowerTriangular([[0], [0, B_], [B_**2, B_**3, B_**4]])
    rng = _rng(params)
    nonzero = []
    for _ in range(params["trials"]):
        Am = rand_int_matrix(rng, N)
        Bm = rand_int_matrix(rng, N)
        nonzero.append(int(not lt_mul(Bm, Am).is_zero()))
        nonzero.append(int(not lt_mul(Am, Bm).is_zero()))
    return [(lt_mul(L, R), LowerTriangular.zero(3)), (nonzero, [1] * len(nonzero))]


@identity(
    "GF_RIORDAN",
    "Matrix GF: the matrix GF sum a_{n,i} x^i y^n of (f, h) equals f(y)/(1 - x h(y))",
    notes=("checked as GF * (1 - xhat h(y)) = f(y) at bi-order (order, order)",),
    defaults={"seed": 0, "trials": 10},
)
def _gf_riordan(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        R = rand_riordan(rng, N)
        G = matrix_gf(riordan_to_matrix(R))
        out.append((G * BivariateSeries.one_minus_xhat_times(R.h, N), BivariateSeries.from_y_series(R.f, N)))
    return out


@identity(
    "PROSTE",
    "Remark proste 1-5: integer/polynomial inverses, lam-grading, row/column scaling, diagonal conjugation,"
    " Toeplitz inverse recursion",
    notes=("exercised on the Pascal matrix and a random unit-diagonal integer matrix",),
    defaults=_RANDOM,
)
def _proste(N, ctx, params):
    rng = _rng(params)
    out = []
    for _ in range(params["trials"]):
        A = rand_int_matrix(rng, N, unit_diag=True)
        Ai = lt_inverse(A)
        out.append((int(all(v.is_integral() for row in Ai.rows for v in row)), 1))
        out.append((Ai.diagonal(), [1] * N))
        out += inverse_pair(grade_lambda(A, LAM), grade_lambda(Ai, LAM))
        alpha = [rng.choice([1, 2, 3, -1]) * (k + 1) for k in range(N)]
        out.append((lt_mul(scale_rows(A, alpha), scale_cols_inv(Ai, alpha)), I(N)))
        conj = diag_conjugate(alpha, A)
        out.append((lt_inverse(conj), diag_conjugate(alpha, Ai)))
        d = [1] + [rng.randint(-3, 3) for _ in range(N - 1)]
        out.append((from_toeplitz(toeplitz_inverse_seq(d), N), lt_inverse(from_toeplitz(d, N))))
    P = T(N, lambda n, j: comb(n, j) * X ** (n - j))
    Pi = lt_inverse(P)
    out.append((int(all(not v.variables() - {"x"} for row in Pi.rows for v in row)), 1))
    return out


# -- catalog operations ---------------------------------------------------------------


def list_identities() -> list[dict]:
    return [CATALOG[k].meta() for k in sorted(CATALOG)]


def lookup(id_: str) -> IdentityCheck:
    try:
        return CATALOG[id_]
    except KeyError:
        raise UnknownIdentityError(id_) from None


def match_ids(patterns: Iterable[str]) -> list[str]:
    """Catalog ids matching any of the glob patterns, sorted."""
    out = set()
    for pat in patterns:
        out.update(k for k in CATALOG if fnmatch.fnmatchcase(k, pat))
    return sorted(out)


def _resolve_params(check: IdentityCheck, params: Mapping | None) -> dict:
    merged = dict(check.defaults)
    for k, v in (params or {}).items():
        if k not in merged:
            raise ValueError(f"{check.id} takes no parameter {k!r} (known: {sorted(check.defaults)})")
        merged[k] = v
    if "trials" in merged and (not isinstance(merged["trials"], int) or merged["trials"] < 1):
        raise ValueError("trials must be a positive integer")
    if "seed" in merged and not isinstance(merged["seed"], int):
        raise ValueError("seed must be an integer")
    return merged


def _evaluate(id_: str, builder, order: int, q_bound: int, params: dict, notes: list[str]) -> IdentityReport:
    ctx = Context(q_bound)
    t0 = time.perf_counter()
    mismatch = None
    for lhs, rhs in builder(order, ctx, params):
        m = _first_mismatch(lhs, rhs)
        if m is not None:
            n, j, a, b = m
            mismatch = {"n": n, "j": j, "lhs": _s(a), "rhs": _s(b)}
            break
    elapsed = (time.perf_counter() - t0) * 1000
    return IdentityReport(
        id=id_,
        verdict="pass" if mismatch is None else "fail",
        order=order,
        q_bound=q_bound,
        params=params,
        first_mismatch=mismatch,
        elapsed_ms=elapsed,
        notes=notes,
    )


def run(id_: str, order: int, q_bound: int | None = None, params: Mapping | None = None) -> IdentityReport:
    """Run one catalog identity at the given order (and q-truncation bound)."""
    check = lookup(id_)
    if not isinstance(order, int) or order < 2:
        raise ValueError("order must be an integer >= 2")
    if q_bound is None:
        q_bound = 2 * order + 4
    if q_bound < order:
        raise ValueError("q_bound must be >= order")
    merged = _resolve_params(check, params)
    return _evaluate(check.id, check.builder, order, q_bound, merged, list(check.notes))


def _run_default(args):
    id_, order, q_bound = args
    return run(id_, order, q_bound)


def run_all(order: int, q_bound: int | None = None, ids: Iterable[str] | None = None, jobs: int = 1) -> list[IdentityReport]:
    """Run catalog entries with default params; reports come back sorted by id."""
    if order < 2:
        raise ValueError("order must be >= 2")
    todo = sorted(ids) if ids is not None else sorted(CATALOG)
    for i in todo:
        lookup(i)
    args = [(i, order, q_bound) for i in todo]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_default, args))
    else:
        reports = [_run_default(a) for a in args]
    return sorted(reports, key=lambda r: r.id)


# -- recurrence-table pairs ------------------------------------------------------------


def _poly_list(table: Mapping, key: str, need: int) -> list[MultiPoly]:
    vals = table.get(key)
    if not isinstance(vals, (list, tuple)):
        raise TableError(f"table entry {key!r} must be a list")
    if len(vals) < need:
        raise TableError(f"table entry {key!r} needs at least {need} values, got {len(vals)}")
    try:
        return [parse_poly(v) if isinstance(v, str) else as_poly(v) for v in vals]
    except (ValueError, TypeError) as exc:
        raise TableError(f"bad value in {key!r}: {exc}") from None


def table_polys(table: Mapping, order: int) -> list[MultiPoly]:
    """Polynomials P_0..P_{order-1} from a table.

    A table is either ``{"polys": [...]}`` or three-term recurrence data
    ``{"a_n": [...], "b_n": [...], "c_n": [...]}`` meaning
    P_{-1} = 0, P_0 = 1, P_{n+1} = (a_n x + b_n) P_n - c_n P_{n-1}.
    """
    if not isinstance(table, Mapping):
        raise TableError("table must be a JSON object")
    if "polys" in table:
        return _poly_list(table, "polys", order)[:order]
    if not {"a_n", "b_n", "c_n"} <= set(table):
        raise TableError("table needs 'polys' or all of 'a_n', 'b_n', 'c_n'")
    a, b, c = (_poly_list(table, k, order - 1) for k in ("a_n", "b_n", "c_n"))
    P = [ONE]
    prev = ZERO
    for n in range(order - 1):
        nxt = (a[n] * X + b[n]) * P[n] - c[n] * prev
        prev = P[n]
        P.append(nxt)
    return P[:order]


_WEIGHTS = ("q_factorial", "q_pochhammer", "factorial", "none")


def pair_check(table_a: Mapping, table_b: Mapping, weight: str = "q_factorial", order: int = 8) -> IdentityReport:
    """Check [P_{n-j}/w_{n-j}]^-1 = [Q_{n-j}/w_{n-j}] for user-supplied families.

    The weights w_k = [k]_q! and (q)_k both clear to [[n;j]_q P_{n-j}]
    under diagonal conjugation, w_k = k! clears to [C(n,j) P_{n-j}].
    """
    if weight not in _WEIGHTS:
        raise ValueError(f"weight must be one of {_WEIGHTS}")
    if order < 2:
        raise ValueError("order must be >= 2")
    P = table_polys(table_a, order)
    Qp = table_polys(table_b, order)
    if weight in ("q_factorial", "q_pochhammer"):
        w = gauss_binomial
        note = f"weight {weight}: verified in cleared form [[n;j]_q P_(n-j)] [[n;j]_q Q_(n-j)] = 1"
    elif weight == "factorial":
        w = comb
        note = "weight factorial: verified in cleared form [C(n,j) P_(n-j)] [C(n,j) Q_(n-j)] = 1"
    else:
        w = lambda n, j: 1
        note = "no weight: verified as [P_(n-j)] [Q_(n-j)] = 1"

    def builder(N, ctx, params):
        A = T(N, lambda n, j: w(n, j) * P[n - j])
        B = T(N, lambda n, j: w(n, j) * Qp[n - j])
        return [(lt_mul(A, B), I(N))]

    return _evaluate("PAIR_CHECK", builder, order, 2 * order + 4, {"weight": weight}, [note])
