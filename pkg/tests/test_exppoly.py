from fractions import Fraction
from math import factorial

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from gcmoments.exppoly import (
    ExpPoly,
    ep_add,
    ep_differentiate,
    ep_eval,
    ep_integrate,
    ep_limit_at_infinity,
    ep_mul,
    ep_scale,
)

from reference_forms import y_moment

E = ExpPoly.exp
T = ExpPoly.t

RATES = [Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 3)]


@st.composite
def exppolys(draw, rates=RATES, max_degree=4):
    terms = {}
    for r in draw(st.lists(st.sampled_from(rates), min_size=0, max_size=4, unique=True)):
        deg = draw(st.integers(0, max_degree))
        terms[r] = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=12), min_size=deg + 1, max_size=deg + 1))
    return ExpPoly(terms)


def exact_value(f: ExpPoly, t, dps=60):
    """High-precision evaluation from the exact rational data."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t)
        total = mpmath.mpf(0)
        for r, coeffs in f.terms.items():
            e = mpmath.exp(mpmath.mpf(r.numerator) / r.denominator * t)
            for j, c in enumerate(coeffs):
                total += mpmath.mpf(c.numerator) / c.denominator * t**j * e
        return total


# canonical form and ring operations


def test_canonical_form():
    assert ExpPoly({0: [1, 0, 0], Fraction(-1, 2): [0, 0]}) == ExpPoly.const(1)
    assert ExpPoly().is_zero() and ExpPoly({1: [0]}).is_zero()
    assert E(Fraction(1, 2)).rates == [Fraction(1, 2)]


def test_mul_by_exponential():
    a = Fraction(-3, 4)
    assert ep_mul(T(), E(a)) == ExpPoly({a: [0, 1]})


def test_add_negation_is_zero():
    f = E(-1, 3) + T(2, Fraction(1, 5)) - E(Fraction(1, 3)) * T()
    assert ep_add(f, ep_scale(f, -1)).is_zero()


def test_difference_of_squares():
    assert (1 - E(-1)) * (1 + E(-1)) == 1 - E(-2)


@given(exppolys(), exppolys(), exppolys())
@settings(max_examples=40, deadline=None)
def test_mul_commutative_associative(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_power():
    f = 1 - E(-1)
    assert f**3 == f * f * f
    assert f**0 == ExpPoly.const(1)


def test_floats_rejected():
    with pytest.raises(TypeError):
        E(-1) * 0.5


# integration


def test_integrate_constant():
    assert ep_integrate(ExpPoly.const(1)) == T()


@pytest.mark.parametrize("t", [1.0, 2.0, 5.0])
def test_integrate_against_quadrature(t):
    a = Fraction(1, 2)
    F = ep_integrate(T() * E(a))
    closed = (E(a) * (T(1, a) - 1) + 1) / a**2
    assert F == closed
    numeric, _ = quad(lambda s: s * mpmath.e ** (0.5 * s), 0, t, epsabs=1e-13, epsrel=1e-13)
    assert F(t) == pytest.approx(float(numeric), rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(-1, 2), Fraction(2, 3), Fraction(-2, 3), Fraction(1)])
def test_recurrence_identity_with_prefactor(n, alpha):
    lhs = ep_integrate(T(n) * E(alpha)) * ((-alpha) ** (n + 1) / factorial(n))
    partial = sum((T(k, (-alpha) ** k / factorial(k)) for k in range(n + 1)), ExpPoly())
    rhs = 1 - E(alpha) * partial
    assert lhs == rhs


@given(exppolys())
@settings(max_examples=60, deadline=None)
def test_fundamental_theorem(f):
    F = ep_integrate(f)
    assert F.at_zero() == 0
    assert ep_differentiate(F) == f


@given(exppolys(), exppolys(), st.fractions(min_value=-3, max_value=3, max_denominator=7))
@settings(max_examples=30, deadline=None)
def test_integration_is_linear(a, b, c):
    assert ep_integrate(a + b * c) == ep_integrate(a) + ep_integrate(b) * c


# differentiation


def test_differentiate_basics():
    assert ep_differentiate(T(2)) == T(1, 2)
    r = Fraction(-5, 3)
    assert ep_differentiate(E(r)) == E(r, r)


# evaluation


def test_eval_at_zero():
    f = T() - (1 - E(-1)) * 2
    assert ep_eval(f, 0.0) == 0.0


def test_eval_large_t_approaches_asymptote():
    assert ep_eval(y_moment(2, 1), 40.0) == pytest.approx(39.0, rel=1e-14)


@given(exppolys(rates=[Fraction(r, 4) for r in range(-8, 3)]), st.fractions(min_value=0, max_value=20, max_denominator=8))
@settings(max_examples=80, deadline=None)
def test_eval_matches_exact(f, t):
    exact = exact_value(f, t)
    magnitude = sum(abs(exact_value(ExpPoly({r: [abs(c) for c in cs]}), t)) for r, cs in f.terms.items())
    # relative to the value, scaled by the condition number of the sum
    assert abs(ep_eval(f, float(t)) - exact) <= 1e-12 * max(magnitude, 1e-300)


@pytest.mark.parametrize("t", [0.5, 3.0, 12.5, 25.0])
def test_eval_relative_error_same_sign_terms(t):
    f = ExpPoly({Fraction(-2): [Fraction(1, 3), Fraction(2, 7)], Fraction(-1, 2): [5, 0, Fraction(1, 9)], 0: [1, 1], Fraction(2): [Fraction(1, 11)]})
    exact = exact_value(f, t)
    assert abs(ep_eval(f, t) - exact) <= 1e-12 * abs(exact)


# limits


def test_limits():
    assert ep_limit_at_infinity(1 - E(Fraction(-1, 2))) == 1
    assert ep_limit_at_infinity(T()) is None
    assert ep_limit_at_infinity(E(Fraction(1, 3))) is None
    assert ep_limit_at_infinity(T(3) * E(-1) + 7) == 7


# rendering


def test_render():
    f = E(Fraction(-2, 3), Fraction(9, 2)) + T(1, -2) + Fraction(3, 2)
    assert f.render() == "9/2 * exp(-2/3*t) + 3/2 - 2 * t"
    assert ExpPoly().render() == "0"
    assert (T(2) * E(-1)).render() == "1 * t^2 * exp(-1*t)"
