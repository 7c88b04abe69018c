import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from cmkit import specials as sp
from cmkit.errors import DomainError

mpmath.mp.dps = 40


def rel(a, b):
    return abs(a - b) / abs(b)


class TestPolygamma:
    def test_known_values(self):
        assert sp.digamma(1.0) == pytest.approx(-sp.EULER_GAMMA, rel=1e-15)
        assert sp.polygamma(1, 1.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
        assert sp.polygamma(2, 1.0) == pytest.approx(-2 * float(mpmath.zeta(3)), rel=1e-14)
        assert sp.polygamma(1, 0.5) == pytest.approx(math.pi**2 / 2, rel=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 5, 8])
    @pytest.mark.parametrize("x", [1e-3, 0.1, 0.7, 1.0, 3.3, 17.0, 250.0, 1e5])
    def test_against_mpmath(self, n, x):
        assert rel(sp.polygamma(n, x), float(mpmath.polygamma(n, x))) < 1e-12

    @given(st.integers(0, 6), st.floats(0.01, 500.0))
    @settings(max_examples=80, deadline=None)
    def test_recurrence(self, n, x):
        # psi^(n)(x + 1) = psi^(n)(x) + (-1)^n n! / x^(n+1)
        lhs = sp.polygamma(n, x + 1)
        a, b = sp.polygamma(n, x), (-1) ** n * math.factorial(n) / x ** (n + 1)
        # the two terms on the right cancel heavily for small x
        assert abs(lhs - (a + b)) <= 1e-13 * (abs(a) + abs(b)) + 1e-13

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            sp.polygamma(1, 0.0)
        with pytest.raises(DomainError):
            sp.polygamma(-1, 1.0)


class TestExpIntegral:
    @pytest.mark.parametrize("t", [1e-8, 1e-3, 0.2, 1.0, 2.5, 10.0, 50.0, 700.0])
    def test_against_scipy(self, t):
        assert rel(sp.exp_integral_e1(t), special.exp1(t)) < 1e-13

    def test_small_argument_expansion(self):
        t = 1e-10
        assert sp.exp_integral_e1(t) == pytest.approx(-sp.EULER_GAMMA - math.log(t) + t, rel=1e-14)

    def test_large_argument_underflows_to_zero(self):
        assert sp.exp_integral_e1(1000.0) == 0.0


class TestBessel:
    @pytest.mark.parametrize("n", [0, 1, 2, 5])
    @pytest.mark.parametrize("z", [0.0, 1e-4, 0.5, 2.0, 9.0, 30.0, 200.0])
    def test_against_scipy(self, n, z):
        ref = special.iv(n, z)
        got = sp.bessel_i(n, z)
        assert got == pytest.approx(ref, rel=1e-13, abs=1e-300)

    def test_i1_is_order_one(self):
        assert sp.bessel_i1(1.3) == sp.bessel_i(1, 1.3)


class TestBernoulli:
    def test_first_numbers(self):
        assert sp.BERNOULLI[:5] == [Fraction(1), Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]

    def test_even_numbers_against_mpmath(self):
        for k, b in enumerate(sp.BERNOULLI_EVEN, start=1):
            assert b == pytest.approx(float(mpmath.bernoulli(2 * k)), rel=1e-15)

    def test_odd_numbers_vanish(self):
        assert all(sp.BERNOULLI[k] == 0 for k in range(3, 42, 2))


def test_vectorized_matches_scalar():
    xs = np.array([0.5, 1.0, 2.0])
    vec = sp.vectorized(lambda x: sp.polygamma(1, x))
    assert np.allclose(vec(xs), [sp.polygamma(1, x) for x in xs], rtol=0, atol=0)
