"""Acceptance criteria, one test each; the terminal summary prints PASS/FAIL per line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
The word-moment criteria share one truncated sweep at n <= 27, r = 12 (about a minute).
"""

import itertools
import json
import sys
from math import comb, factorial

import pytest

import reference_data as P
from gepner.algebra import gaussian_multinomial, multinomial
from gepner.cli import main as cli_main
from gepner.distributions import Candidate, classify, logistic_moment
from gepner.enumerate import (
    gepner_poly_perm,
    joint_catalytic_poly,
    multiset_words,
    stat_poly_words,
)
from gepner.moments import family_coeffs, fit_moment_polynomial, limit_standardized, moments_from_poly
from gepner.recurrence import F_catalytic, H_truncated, gepner_poly_words_fast, inv_poly_recurrence
from gepner.stats import gep_fast

pytestmark = pytest.mark.acceptance

WORD_ORDERS = (2, 4, 6, 8, 10, 12)
N_MAX = 27


@pytest.fixture(scope="module")
def word_fits():
    # one sweep at the top order; lower orders reuse its coefficients
    family_coeffs("words", [N_MAX], 12)
    return {r: fit_moment_polynomial("words", r, range(1, N_MAX + 1), guards=2) for r in WORD_ORDERS}


def test_ac1_perm_polynomials():
    """AC1 G_1..G_8 by brute force equal the printed polynomials"""
    for n in range(1, 9):
        assert gepner_poly_perm(n) == P.G[n], n
    assert len(P.G[7].coeffs) == 24 and P.G[7].to_text().endswith("+ 49*q^5 + 7")


def test_ac2_word_polynomials():
    """AC2 g_1..g_5 by brute force and by recurrence equal the printed polynomials"""
    assert sum(1 for _ in multiset_words((5, 5, 5))) == 756756
    for n in range(1, 6):
        brute = stat_poly_words((n, n, n), "gep")
        assert brute == gepner_poly_words_fast(n, n, n) == P.g[n], n
    for n in range(1, 4):
        assert F_catalytic(n, n, n).specialize() == P.g[n]


def test_ac3_macmahon():
    """AC3 inv recurrence = q-multinomial = brute inv = brute maj for all a_i <= 4"""
    for a in itertools.product(range(5), repeat=3):
        qm = gaussian_multinomial(a)
        assert inv_poly_recurrence(*a) == qm, a
        assert stat_poly_words(a, "inv") == qm, a
        assert stat_poly_words(a, "maj") == qm, a


def test_ac4_catalytic_oracle():
    """AC4 catalytic recurrence equals the brute joint polynomial for total <= 9"""
    for a in itertools.product(range(10), repeat=3):
        if sum(a) <= 9:
            assert F_catalytic(*a) == joint_catalytic_poly(a), a


def test_ac5_truncation_soundness():
    """AC5 truncated engine matches Taylor coefficients of exact g_n for n <= 4, r <= 12"""
    exact = {n: gepner_poly_words_fast(n, n, n) for n in range(1, 5)}
    for r in range(2, 13):
        want = {n: g.taylor_at_one(r) for n, g in exact.items()}
        assert H_truncated(4, r) == want, r
        assert H_truncated(4, r, engine="exact") == want, r


def test_ac6_word_moment_polynomials(word_fits):
    """AC6 central moments r=2..12 fitted over n=1..27 with 2 guards equal the printed polynomials"""
    for r, fit in word_fits.items():
        assert len(fit.guard_ns) >= 2
        assert fit.poly == P.WORD_CENTRAL[r], r
    from fractions import Fraction

    assert word_fits[12].poly.leading == Fraction(343717911, 1863680)


def test_ac7_word_limits(word_fits):
    """AC7 kappa_4..kappa_12 exact, logistic matches all tested orders, normal rejected at 4"""
    m2 = word_fits[2].poly
    kappas = {r: limit_standardized(word_fits[r].poly, m2, r) for r in WORD_ORDERS[1:]}
    assert kappas == P.WORD_KAPPA
    assert all(kappas[r] == logistic_moment(r) for r in kappas)
    v = classify(kappas)
    assert v[Candidate.LOGISTIC].overall == "MATCHES-ALL-TESTED"
    assert v[Candidate.NORMAL].overall == "REJECTED-AT-ORDER-4"


def test_ac8_perm_moments():
    """AC8 mean, m2, m4 fitted from G_1..G_10 and limiting kurtosis 87/25"""
    ns = range(1, 11)
    mean = fit_moment_polynomial("perms", 1, ns, kind="raw").poly
    m2 = fit_moment_polynomial("perms", 2, ns).poly
    # degree 8 leaves room for a single guard inside 1..10
    m4 = fit_moment_polynomial("perms", 4, ns, guards=1).poly
    assert (mean, m2, m4) == (P.PERM_MEAN, P.PERM_M2, P.PERM_M4)
    assert limit_standardized(m4, m2, 4) == P.PERM_KAPPA4


def _cli_json(*argv):
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert cli_main([*argv, "--format", "json"]) == 0
    env = json.loads(buf.getvalue())
    env.pop("timing_ms")
    return env


def test_ac9_properties():
    """AC9 reversal, palindromes, odd moments, normalization and --jobs determinism"""
    for m in range(9):
        for w in itertools.product((1, 2, 3), repeat=m):
            a = [w.count(i) for i in (1, 2, 3)]
            assert gep_fast(w) + gep_fast(w[::-1]) == a[0] * a[1] * a[2]
        for p in itertools.permutations(range(1, m + 1)):
            assert gep_fast(p) + gep_fast(p[::-1]) == comb(m, 3)
    for n in range(1, 9):
        G = gepner_poly_perm(n)
        assert G.is_palindromic(comb(n, 3)) and G(1) == factorial(n)
        t = moments_from_poly(G, 7)
        assert t.central[3] == t.central[5] == t.central[7] == 0
    for a in itertools.product(range(13), repeat=3):
        if sum(a) <= 12:
            g = stat_poly_words(a, "gep")
            assert g.is_palindromic(a[0] * a[1] * a[2]) and g(1) == multinomial(a)
            if g(1) > 0:
                t = moments_from_poly(g, 5)
                assert t.central[3] == t.central[5] == 0
    for n in range(1, 6):
        assert P.g[n](1) == factorial(3 * n) // factorial(n) ** 3
    assert gepner_poly_perm(8, jobs=2) == gepner_poly_perm(8, jobs=1)
    assert stat_poly_words((4, 3, 4), "gep", jobs=3) == stat_poly_words((4, 3, 4), "gep")
    assert H_truncated(6, 6, jobs=2) == H_truncated(6, 6, jobs=1)
    for argv in (
        ("poly", "--family", "perms", "--n", "7"),
        ("moments", "--family", "words", "--n", "4", "--max-moment", "6"),
        ("verify", "--suite", "reversal", "--max", "5"),
    ):
        assert _cli_json(*argv, "--jobs", "1") == _cli_json(*argv, "--jobs", "2")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
