"""Acceptance criteria 1-8.  Each test prints one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for just the summary lines.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time
from fractions import Fraction
from math import factorial

import pytest

from riordan_lab.exact_arith import TruncatedSeries, series_compose, series_inv, series_revert
from riordan_lab.identities import CATALOG, I, rand_appell, rand_int_matrix, rand_riordan, run, run_all
from riordan_lab.riordan import gbt, pascal_h, riordan_inv, riordan_mul, riordan_new, riordan_to_matrix, subgroup_member
from riordan_lab.sequences import bernoulli_numbers, bernoulli_numbers_recurrence, euler_numbers, euler_numbers_recurrence
from riordan_lab.triangle import LowerTriangular, from_toeplitz, lt_inverse, lt_inverse_blockwise, lt_mul

CASES = 50


@pytest.fixture
def emit(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def _emit(number: int, title: str, ok: bool, detail: str = ""):
        line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print("\n" + line, flush=True)
        else:
            print(line, flush=True)
        assert ok, line

    return _emit


def criterion_1():
    t0 = time.perf_counter()
    reports = run_all(12, 28)
    elapsed = time.perf_counter() - t0
    failed = [r.id for r in reports if not r.passed]
    ok = not failed and len(reports) >= 40 and elapsed < 60
    return ok, f"{len(reports)} checks, {len(failed)} failed {failed}, {elapsed:.1f} s"


def criterion_2():
    count = 21
    B_mat, E_mat = bernoulli_numbers(count), euler_numbers(count)
    # EGF convolution: t/(e^t-1) and 1/cosh t as reciprocals of exact series
    b_egf = series_inv(TruncatedSeries([Fraction(1, factorial(n + 1)) for n in range(count)]))
    e_egf = series_inv(TruncatedSeries([Fraction(1, factorial(n)) if n % 2 == 0 else 0 for n in range(count)]))
    B_egf = [b_egf[n].constant_term * factorial(n) for n in range(count)]
    E_egf = [e_egf[n].constant_term * factorial(n) for n in range(count)]
    ok = (
        B_mat == B_egf == bernoulli_numbers_recurrence(count)
        and E_mat == E_egf == euler_numbers_recurrence(count)
        and B_mat[20] == B_egf[20] == Fraction(-174611, 330)
    )
    return ok, f"B_20 = {B_mat[20]}, E_20 = {E_mat[20]}"


def criterion_3():
    rng = random.Random(3)
    bad = 0
    for _ in range(CASES):
        A = rand_int_matrix(rng, 8)
        if lt_inverse(A) != lt_inverse_blockwise(A):
            bad += 1
    return bad == 0, f"{CASES} matrices, {bad} disagreements"


def criterion_4():
    rng = random.Random(4)
    bad = 0
    for _ in range(CASES):
        R1, R2 = rand_riordan(rng, 8), rand_riordan(rng, 8)
        if riordan_to_matrix(riordan_mul(R1, R2)) != lt_mul(riordan_to_matrix(R1), riordan_to_matrix(R2)):
            bad += 1
    return bad == 0, f"{CASES} pairs, {bad} failures"


def criterion_5():
    want = {"POCHH_SELF": {"x"}, "QBIN_INV": {"x", "q"}, "QPOCH_PAIR": {"x", "y", "q"}, "BE_POLY": {"x"}}
    details, ok = [], True
    from riordan_lab.exact_arith import Context

    for id_, names in want.items():
        r = run(id_, 8, 24)
        seen = set()
        for lhs, _ in CATALOG[id_].builder(8, Context(24), dict(CATALOG[id_].defaults)):
            rows = lhs.rows if isinstance(lhs, LowerTriangular) else [list(lhs)]
            for row in rows:
                for v in row:
                    seen |= v.variables()
        live = names <= seen
        ok = ok and r.passed and live
        details.append(f"{id_}={r.verdict} live={','.join(sorted(seen))}")
    return ok, "; ".join(details)


def criterion_6():
    reports = [run("PASCAL_CF1", 13), run("PASCAL_CF2", 13)]
    return all(r.passed for r in reports), "n, k <= 12 for alpha in 0, 1, -1, 2, alpha"


def _properties():
    rng = random.Random(7)
    N = 6
    y = TruncatedSeries.identity(N)

    def ring(_):
        A, B, C = (rand_int_matrix(rng, N) for _ in range(3))
        return lt_mul(lt_mul(A, B), C) == lt_mul(A, lt_mul(B, C)) and lt_mul(A, B + C) == lt_mul(A, B) + lt_mul(A, C)

    def inverse(_):
        A = rand_int_matrix(rng, N)
        inv = lt_inverse(A)
        return lt_mul(A, inv) == I(N) == lt_mul(inv, A)

    def reversion(_):
        h = rand_riordan(rng, N).h
        hb = series_revert(h)
        return series_compose(h, hb) == y == series_compose(hb, h)

    def nested(_):
        A = rand_int_matrix(rng, N)
        m = rng.randint(1, N)
        R1, R2 = rand_riordan(rng, N), rand_riordan(rng, N)
        return (
            lt_inverse(A).truncate(m) == lt_inverse(A.truncate(m))
            and riordan_mul(R1, R2).truncate(m) == riordan_mul(R1.truncate(m), R2.truncate(m))
        )

    def preservation(_):
        A = rand_int_matrix(rng, N, unit_diag=True)
        return all(v.is_integral() for row in lt_inverse(A).rows for v in row)

    def toeplitz(_):
        d = [1] + [rng.randint(-4, 4) for _ in range(N - 1)]
        e = [1] + [rng.randint(-4, 4) for _ in range(N - 1)]
        A, B = from_toeplitz(d, N), from_toeplitz(e, N)
        return lt_mul(A, B).is_toeplitz() and lt_inverse(A).is_toeplitz()

    def gbt_inv(_):
        p = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(N)]
        a = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        return gbt(gbt(p, a), -a) == p and gbt(gbt(p, -a), a) == p

    def normality(_):
        R, A = rand_riordan(rng, N), rand_appell(rng, N)
        return subgroup_member("Appell", riordan_mul(riordan_mul(R, A), riordan_inv(R))).member

    def chain(_):
        p = TruncatedSeries([1] + [rng.randint(-3, 3) for _ in range(N - 1)])
        O = riordan_new(p, TruncatedSeries.identity(N))
        P = riordan_new(p, pascal_h(rng.randint(-3, 3), N))
        return all(subgroup_member(k, O).member for k in ("OGroup", "Appell", "PascalGen", "IGroup")) and all(
            subgroup_member(k, P).member for k in ("PascalGen", "IGroup")
        )

    return {
        "ring axioms": ring,
        "inverse laws": inverse,
        "reversion laws": reversion,
        "nested truncation": nested,
        "integer preservation": preservation,
        "Toeplitz closure": toeplitz,
        "GBT involution": gbt_inv,
        "Appell normality": normality,
        "inclusion chain": chain,
    }


def criterion_7():
    counts = {}
    for name, prop in _properties().items():
        counts[name] = sum(1 for i in range(CASES) if not prop(i))
    bad = {k: v for k, v in counts.items() if v}
    return not bad, f"{len(counts)} suites x {CASES} cases, failures {bad or 0}"


def criterion_8():
    cmd = [sys.executable, "-m", "riordan_lab", "verify", "--all", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    ok = a.returncode == 0 and b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    return ok, f"{len(a.stdout.splitlines())} report lines, exit {a.returncode}/{b.returncode}"


CRITERIA = [
    (1, "full identity suite at N=12, D=28", criterion_1),
    (2, "Bernoulli/Euler numbers agree across routes up to index 20", criterion_2),
    (3, "forward substitution equals block recursion", criterion_3),
    (4, "Riordan product is the matrix product", criterion_4),
    (5, "symbolic certification with live indeterminates", criterion_5),
    (6, "generalized Pascal closed forms equal composition", criterion_6),
    (7, "randomized property suites", criterion_7),
    (8, "verify --all output is byte-identical across runs", criterion_8),
]


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_acceptance(emit, number, title, fn):
    ok, detail = fn()
    emit(number, title, ok, detail)


if __name__ == "__main__":
    failures = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        failures += not ok
        print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})", flush=True)
    sys.exit(1 if failures else 0)
