"""Exact generators for the number and polynomial families used by the checks."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable

from .exact_arith import ONE, ZERO, MultiPoly, TruncatedSeries, as_poly, series_compose, series_inv, series_mul
from .triangle import LowerTriangular, lt_inverse

X = MultiPoly.var("x")
Q = MultiPoly.var("q")
A = MultiPoly.var("a")


# -- Bernoulli and Euler -------------------------------------------------------


def bernoulli_numbers(count: int) -> list[Fraction]:
    """B_0..B_{count-1} read off column 0 of [C(n,j)/(n-j+1)]^{-1}."""
    if count < 1:
        raise ValueError("count must be >= 1")
    M = LowerTriangular.build(count, lambda n, j: Fraction(comb(n, j), n - j + 1))
    inv = lt_inverse(M)
    return [Fraction(inv.entry(n, 0).constant_term) for n in range(count)]


def bernoulli_numbers_recurrence(count: int) -> list[Fraction]:
    """Independent route: B_n = -1/(n+1) sum_{k<n} C(n+1, k) B_k."""
    B: list[Fraction] = []
    for n in range(count):
        if n == 0:
            B.append(Fraction(1))
        else:
            B.append(-sum(comb(n + 1, k) * B[k] for k in range(n)) / (n + 1))
    return B


def euler_numbers(count: int) -> list[Fraction]:
    """E_0..E_{count-1} read off column 0 of [eps(n-j) C(n,j)]^{-1}."""
    if count < 1:
        raise ValueError("count must be >= 1")
    M = LowerTriangular.build(count, lambda n, j: eps(n - j) * comb(n, j))
    inv = lt_inverse(M)
    return [Fraction(inv.entry(n, 0).constant_term) for n in range(count)]


def euler_numbers_recurrence(count: int) -> list[Fraction]:
    """Independent route over even indices only: E_{2m} = -sum_{k<m} C(2m, 2k) E_{2k}."""
    E = [Fraction(0)] * count
    for n in range(0, count, 2):
        m = n // 2
        E[n] = Fraction(1) if m == 0 else -sum(comb(2 * m, 2 * k) * E[2 * k] for k in range(m))
    return E


def _exp_xt(order: int, x: MultiPoly = X) -> TruncatedSeries:
    out, p = [], ONE
    for n in range(order + 1):
        out.append(p / factorial(n))
        p = p * x
    return TruncatedSeries(out)


def bernoulli_polys(count: int) -> list[MultiPoly]:
    """B_n(x) from t e^{xt} / (e^t - 1)."""
    N = count - 1
    denom = TruncatedSeries([Fraction(1, factorial(n + 1)) for n in range(N + 1)])
    egf = series_mul(series_inv(denom), _exp_xt(N))
    return [egf[n] * factorial(n) for n in range(count)]


def euler_polys(count: int) -> list[MultiPoly]:
    """E_n(x) from 2 e^{xt} / (e^t + 1)."""
    N = count - 1
    denom = TruncatedSeries([1] + [Fraction(1, 2 * factorial(n)) for n in range(1, N + 1)])
    egf = series_mul(series_inv(denom), _exp_xt(N))
    return [egf[n] * factorial(n) for n in range(count)]


# -- step kernels ----------------------------------------------------------------


def H(x: int) -> int:
    return 1 if x >= 0 else 0


def eps(n: int) -> int:
    return 1 if n % 2 == 0 else 0


def H2(x: int) -> int:
    return H(x) + H(x - 2) - 2 * H(x - 1)


def H3(x: int) -> int:
    return H(x) - H(x - 1) - H(x - 2) + H(x - 3)


STEP_KERNELS: dict[str, Callable[[int], int]] = {"eps": eps, "H": H, "H2": H2, "H3": H3}


def step_kernel(name: str, arg: int) -> int:
    try:
        return STEP_KERNELS[name](arg)
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}") from None


# -- factorial polynomials ---------------------------------------------------------


def rising_factorial(n: int, x=X) -> MultiPoly:
    """x (x+1) ... (x+n-1); 1 when n = 0."""
    x = as_poly(x)
    out = ONE
    for i in range(n):
        out = out * (x + i)
    return out


def falling_factorial(n: int, x=X) -> MultiPoly:
    """x (x-1) ... (x-n+1); 1 when n = 0."""
    x = as_poly(x)
    out = ONE
    for i in range(n):
        out = out * (x - i)
    return out


def factorial_polys(kind: str, n: int, x=X) -> MultiPoly:
    if n < 0:
        raise ValueError("n must be >= 0")
    if kind == "rising":
        return rising_factorial(n, x)
    if kind == "falling":
        return falling_factorial(n, x)
    raise ValueError(f"unknown factorial kind {kind!r}")


# -- q-symbols -----------------------------------------------------------------


def q_number(n: int) -> MultiPoly:
    """[n]_q = 1 + q + ... + q^{n-1}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return sum((MultiPoly.var("q", i) for i in range(n)), ZERO)


def q_factorial(n: int) -> MultiPoly:
    out = ONE
    for j in range(1, n + 1):
        out = out * q_number(j)
    return out


_gauss_cache: dict[tuple[int, int], MultiPoly] = {}


def gauss_binomial(n: int, k: int) -> MultiPoly:
    """[n; k]_q via [n;k] = [n-1;k-1] + q^k [n-1;k]; zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0 or k > n:
        return ZERO
    if k == 0 or k == n:
        return ONE
    key = (n, k)
    if key not in _gauss_cache:
        _gauss_cache[key] = gauss_binomial(n - 1, k - 1) + MultiPoly.var("q", k) * gauss_binomial(n - 1, k)
    return _gauss_cache[key]


def q_pochhammer(a, n: int) -> MultiPoly:
    """(a|q)_n = prod_{j<n} (1 - a q^j)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a = as_poly(a)
    out = ONE
    for j in range(n):
        out = out * (1 - a * MultiPoly.var("q", j))
    return out


def reflected_pochhammer(x, n: int) -> MultiPoly:
    """x^n (1/x|q)_n written as prod_{i<n} (x - q^i)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = as_poly(x)
    out = ONE
    for i in range(n):
        out = out * (x - MultiPoly.var("q", i))
    return out


def q_symbols(kind: str, *params) -> MultiPoly:
    if kind == "q_number":
        return q_number(*params)
    if kind == "q_factorial":
        return q_factorial(*params)
    if kind == "gauss_binomial":
        n, k = params
        if n < 0 or k < 0 or k > n:
            raise ValueError(f"gauss_binomial needs 0 <= k <= n, got n={n}, k={k}")
        return gauss_binomial(n, k)
    if kind == "q_pochhammer":
        return q_pochhammer(*params)
    if kind == "reflected_pochhammer":
        return reflected_pochhammer(*params)
    raise ValueError(f"unknown q-symbol {kind!r}")


# -- orthogonal families -------------------------------------------------------------


def rogers_szego(count: int) -> tuple[list[MultiPoly], list[MultiPoly]]:
    """R_n = sum_j [n;j] x^j and its companion Rhat_n."""
    R, Rhat = [], []
    for n in range(count):
        R.append(sum((gauss_binomial(n, j) * X**j for j in range(n + 1)), ZERO))
        s = sum(
            (gauss_binomial(n, j) * X**j * MultiPoly.var("q", comb(j, 2) + comb(n - j, 2)) for j in range(n + 1)),
            ZERO,
        )
        Rhat.append(s if n % 2 == 0 else -s)
    return R, Rhat


def laguerre_pair(count: int) -> tuple[list[MultiPoly], list[MultiPoly]]:
    """L_n from (1/(1-t)) exp(-t x/(1-t)), and the companion family from its case table."""
    N = count - 1
    geom = TruncatedSeries.geometric(N)
    inner = series_mul(TruncatedSeries([0, -X], N), geom)
    L = series_mul(geom, series_compose(TruncatedSeries.exp(N), inner)).coeffs
    comp = []
    for n in range(count):
        if n == 0:
            comp.append(ONE)
        elif n == 1:
            comp.append(X - 1)
        else:
            comp.append(sum((X**j * Fraction(comb(n - 2, j - 2), factorial(j)) for j in range(2, n + 1)), ZERO))
    return list(L), comp


def hermite_pair(count: int) -> tuple[list[MultiPoly], list[MultiPoly]]:
    """Monic probabilists' He_n and G_n = i^n He_n(i x), both by three-term recurrence."""
    He, G = [ONE, X], [ONE, -X]
    for n in range(1, count - 1):
        He.append(X * He[n] - He[n - 1] * n)
        G.append(-X * G[n] + G[n - 1] * n)
    return He[:count], G[:count]


# -- string ids --------------------------------------------------------------------


def _numbers(fn):
    return lambda count: [MultiPoly.const(v) for v in fn(count)]


FAMILIES: dict[str, Callable[[int], list[MultiPoly]]] = {
    "bernoulli.numbers": _numbers(bernoulli_numbers),
    "bernoulli.polys": bernoulli_polys,
    "euler.numbers": _numbers(euler_numbers),
    "euler.polys": euler_polys,
    "kernel.eps": lambda c: [MultiPoly.const(eps(n)) for n in range(c)],
    "kernel.H": lambda c: [MultiPoly.const(H(n)) for n in range(c)],
    "kernel.H2": lambda c: [MultiPoly.const(H2(n)) for n in range(c)],
    "kernel.H3": lambda c: [MultiPoly.const(H3(n)) for n in range(c)],
    "factorial": lambda c: [MultiPoly.const(factorial(n)) for n in range(c)],
    "factorial.rising": lambda c: [rising_factorial(n) for n in range(c)],
    "factorial.falling": lambda c: [falling_factorial(n) for n in range(c)],
    "q.number": lambda c: [q_number(n) for n in range(c)],
    "q.factorial": lambda c: [q_factorial(n) for n in range(c)],
    "q.pochhammer": lambda c: [q_pochhammer(A, n) for n in range(c)],
    "q.pochhammer_q": lambda c: [q_pochhammer(Q, n) for n in range(c)],
    "q.reflected_pochhammer": lambda c: [reflected_pochhammer(X, n) for n in range(c)],
    "rogers_szego.R": lambda c: rogers_szego(c)[0],
    "rogers_szego.Rhat": lambda c: rogers_szego(c)[1],
    "laguerre.L": lambda c: laguerre_pair(c)[0],
    "laguerre.companion": lambda c: laguerre_pair(c)[1],
    "hermite.He": lambda c: hermite_pair(c)[0],
    "hermite.companion": lambda c: hermite_pair(c)[1],
}


def family(name: str, count: int) -> list[MultiPoly]:
    try:
        fn = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}") from None
    if count < 1:
        raise ValueError("count must be >= 1")
    return fn(count)
