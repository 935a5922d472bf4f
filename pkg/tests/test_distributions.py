from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

import reference_data as P
from gepner.distributions import Candidate, classify, logistic_moment, normal_moment, reference_moment


def test_reference_values():
    assert [normal_moment(r) for r in (2, 4, 6, 8)] == [1, 3, 15, 105]
    assert logistic_moment(2) == 1
    assert logistic_moment(4) == F(21, 5)
    assert logistic_moment(6) == F(279, 7)
    assert logistic_moment(3) == 0 and normal_moment(5) == 0
    assert reference_moment("normal", 0) == reference_moment(Candidate.LOGISTIC, 0) == 1


@pytest.mark.parametrize("r", range(2, 21, 2))
def test_logistic_against_symbolic_integral(r):
    # unit-variance logistic has scale s = sqrt(3)/pi; E[X^r] = s^r * integral of x^r sech^2(x/2)/4
    # which equals s^r * 2 (1 - 2^(1-r)) r! zeta(r)
    s = sympy.sqrt(3) / sympy.pi
    exact = sympy.nsimplify(s**r * 2 * (1 - sympy.Rational(2) ** (1 - r)) * sympy.factorial(r) * sympy.zeta(r))
    assert sympy.Rational(logistic_moment(r)) == sympy.simplify(exact)


@pytest.mark.parametrize("r", range(4, 21, 2))
def test_logistic_heavier_than_normal(r):
    assert logistic_moment(r) > normal_moment(r)


def test_classify_words_kappas():
    v = classify(P.WORD_KAPPA)
    assert v[Candidate.LOGISTIC].overall == "MATCHES-ALL-TESTED"
    assert v[Candidate.NORMAL].overall == "REJECTED-AT-ORDER-4"


def test_classify_perm_kurtosis():
    v = classify({4: P.PERM_KAPPA4})
    assert v[Candidate.LOGISTIC].overall == v[Candidate.NORMAL].overall == "REJECTED-AT-ORDER-4"


def test_classify_first_mismatch_is_lowest_order():
    kap = {4: F(3), 6: F(15), 8: F(100)}
    v = classify(kap, [Candidate.NORMAL])
    assert v[Candidate.NORMAL].first_mismatch == 8
    assert v[Candidate.NORMAL].per_order == ((4, True), (6, True), (8, False))


@given(st.permutations([4, 6, 8, 10, 12]))
def test_classify_independent_of_input_order(order):
    kap = {r: P.WORD_KAPPA[r] for r in order}
    assert classify(kap) == classify(P.WORD_KAPPA)


def test_classify_needs_even_order():
    with pytest.raises(ValueError):
        classify({2: F(1), 3: F(0)})
