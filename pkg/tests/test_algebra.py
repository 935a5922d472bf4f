from fractions import Fraction
from math import comb, factorial, prod

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from gepner.algebra import (
    AlgebraError,
    CatalyticPoly,
    NewtonInterpolator,
    RatPoly,
    TruncSeries,
    UniPoly,
    bernoulli,
    gaussian_multinomial,
    interpolate,
    multinomial,
    qfactorial,
    stirling2,
)

small_polys = st.dictionaries(st.integers(0, 6), st.integers(-5, 5), max_size=5).map(UniPoly)
exps4 = st.tuples(*[st.integers(0, 3)] * 4)
mpolys = st.dictionaries(exps4, st.integers(-4, 4), max_size=6).map(CatalyticPoly)
compositions = st.lists(st.integers(0, 4), min_size=1, max_size=4).filter(lambda a: sum(a) <= 12)


def test_qfactorial_examples():
    assert qfactorial(0) == UniPoly(1)
    assert qfactorial(3) == UniPoly([1, 2, 2, 1])
    assert qfactorial(4)(1) == 24
    for m in range(8):
        assert qfactorial(m).degree == comb(m, 2)


def test_qfactorial_matches_product_formula():
    q = sympy.symbols("q")
    for m in range(7):
        expr = sympy.cancel(sympy.prod([(1 - q**j) for j in range(1, m + 1)]) / (1 - q) ** m)
        coeffs = sympy.Poly(expr, q).all_coeffs()[::-1]
        assert qfactorial(m) == UniPoly([int(c) for c in coeffs])


def test_gaussian_multinomial_examples():
    assert gaussian_multinomial((1, 1)) == UniPoly([1, 1])
    assert gaussian_multinomial((1, 1, 1)) == UniPoly([1, 2, 2, 1])
    assert gaussian_multinomial((5, 0, 0)) == UniPoly(1)


def test_gaussian_multinomial_rejects_negative():
    with pytest.raises(AlgebraError):
        gaussian_multinomial((1, -1))


@given(compositions)
def test_gaussian_multinomial_at_one_and_palindromic(a):
    g = gaussian_multinomial(a)
    assert g(1) == factorial(sum(a)) // prod(factorial(x) for x in a) == multinomial(a)
    top = sum(a[i] * a[j] for i in range(len(a)) for j in range(i + 1, len(a)))
    assert g.degree == top
    assert g.is_palindromic(top)


def test_exact_division_refuses_remainder():
    with pytest.raises(AlgebraError):
        UniPoly([1, 0, 1]).exact_div(UniPoly([1, 1]))


@given(small_polys, small_polys, small_polys)
def test_unipoly_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f * g)(1) == f(1) * g(1)
    assert (f + g)(1) == f(1) + g(1)


@given(small_polys)
def test_taylor_at_one_matches_shift(f):
    assert f.taylor_at_one(f.degree or 0) == f.shift(1)


def test_text_format():
    assert UniPoly({4: 4, 2: 16, 0: 4}).to_text() == "4*q^4 + 16*q^2 + 4"
    assert UniPoly({1: 3, 0: 3}).to_text() == "3*q + 3"
    assert UniPoly({}).to_text() == "0"


@pytest.mark.parametrize("r, j, expected", [(3, 2, 3), (4, 2, 7), (5, 5, 1), (3, 4, 0), (0, 0, 1), (4, 0, 0)])
def test_stirling2_examples(r, j, expected):
    assert stirling2(r, j) == expected


def test_stirling2_against_sympy():
    from sympy.functions.combinatorial.numbers import stirling

    for r in range(15):
        for j in range(r + 1):
            assert stirling2(r, j) == stirling(r, j, kind=2)


def test_bernoulli_examples():
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    for r in range(2, 31, 2):
        b = sympy.bernoulli(r)
        assert bernoulli(r) == Fraction(int(b.p), int(b.q))


@pytest.mark.parametrize("r", [0, 1, 3, 7])
def test_bernoulli_rejects_odd_and_small(r):
    with pytest.raises(AlgebraError):
        bernoulli(r)


def test_interpolate_examples():
    assert interpolate([(1, 1), (2, 4), (3, 9)]) == RatPoly([0, 0, 1])
    assert interpolate([(n, Fraction(n**3, 2)) for n in range(1, 5)]) == RatPoly([0, 0, 0, Fraction(1, 2)])
    with pytest.raises(AlgebraError):
        interpolate([(1, 1), (1, 2)])
    with pytest.raises(AlgebraError):
        interpolate([])


@given(st.lists(st.tuples(st.integers(-20, 20), st.fractions(max_denominator=50)), min_size=1, max_size=8, unique_by=lambda t: t[0]))
def test_interpolate_reproduces_points(points):
    p = interpolate(points)
    assert all(p(x) == y for x, y in points)
    assert p.is_zero() or p.degree < len(points)
    n = sympy.symbols("n")
    ref = sympy.Poly(sympy.interpolate([(x, sympy.Rational(y.numerator, y.denominator)) for x, y in points], n), n)
    assert [Fraction(int(c.p), int(c.q)) for c in ref.all_coeffs()[::-1]] == list(p.coeffs) or (p.is_zero() and ref.is_zero)


def test_newton_guard_point_is_incremental():
    ni = NewtonInterpolator()
    for x in range(1, 4):
        ni.add(x, x * x)
    before = list(ni.coeffs)
    assert ni(4) == 16
    ni.add(4, 16)
    assert ni.coeffs[:3] == before and ni.coeffs[3] == 0


def test_ratpoly_factored_text():
    m6 = RatPoly([Fraction(1, 448)]) * RatPoly([0, 1]) ** 9 * RatPoly([-128, 512, -656, 279])
    assert m6.factored_text() == "1/448 * n^9 * (279*n^3 - 656*n^2 + 512*n - 128)"
    assert RatPoly([0, 0, 0, 0, Fraction(1, 4)]).factored_text() == "1/4 * n^4"


# truncated series


def test_substitute_examples():
    x = TruncSeries.variable("x", 2)
    assert x.substitute("x") == TruncSeries(2, {(1, 0, 0, 0): 1, (0, 1, 0, 0): 1, (1, 1, 0, 0): 1})
    assert TruncSeries.variable("x", 1).substitute("x") == TruncSeries(1, {(1, 0, 0, 0): 1, (0, 1, 0, 0): 1})
    x2 = TruncSeries(2, {(0, 2, 0, 0): 1})
    assert x2.substitute("x") == TruncSeries(2, {(2, 0, 0, 0): 1, (1, 1, 0, 0): 2, (0, 2, 0, 0): 1})


def test_mul_binomial_examples():
    one = TruncSeries.one(2)
    assert one.mul_binomial("z", 2) == TruncSeries(2, {(0, 0, 0, 0): 1, (0, 0, 0, 1): 2, (0, 0, 0, 2): 1})
    assert one.mul_binomial("z", 5) == TruncSeries(2, {(0, 0, 0, 0): 1, (0, 0, 0, 1): 5, (0, 0, 0, 2): 10})
    s = TruncSeries(3, {(1, 1, 0, 0): 7, (0, 0, 2, 1): -2})
    assert s.mul_binomial("y", 0) == s


def _to_sympy(s, syms):
    return sympy.Add(*[c * sympy.prod([v**e for v, e in zip(syms, k)]) for k, c in s.terms.items()])


def _from_sympy(expr, syms, order):
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return TruncSeries(order, {k: int(c) for k, c in poly.terms()})


@given(st.dictionaries(st.tuples(*[st.integers(0, 3)] * 4), st.integers(-5, 5), max_size=6), st.integers(0, 6), st.sampled_from("xyz"))
def test_substitute_matches_symbolic_expansion(terms, order, v):
    syms = sympy.symbols("p x y z")
    s = TruncSeries(order, terms)
    expr = _to_sympy(s, syms)
    sv = dict(zip("pxyz", syms))
    image = expr.subs(sv[v], syms[0] + sv[v] + syms[0] * sv[v], simultaneous=True)
    assert s.substitute(v) == _from_sympy(image, syms, order)


@given(mpolys, mpolys)
def test_truncated_product_agrees_with_exact_product(f, g):
    for order in range(7):
        prod_trunc = f.truncate(order) * g.truncate(order)
        assert prod_trunc == (f * g).truncate(order)


def test_catalytic_poly_shift_and_specialize():
    f = CatalyticPoly({(1, 2, 0, 1): 3, (0, 0, 0, 0): 1})
    assert f.q_shift(1) == CatalyticPoly({(3, 2, 0, 1): 3, (0, 0, 0, 0): 1})
    assert f.q_shift(3).specialize() == UniPoly({2: 3, 0: 1})
    with pytest.raises(AlgebraError):
        f.q_shift(0)
