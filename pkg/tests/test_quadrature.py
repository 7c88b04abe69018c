import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sci

from cmkit.errors import DivergenceError
from cmkit.quadrature import (
    gauss_kronrod,
    integrate,
    integrate_halfline,
    oscillatory_integral,
    wynn_epsilon,
)


def test_gauss_kronrod_exact_for_polynomials():
    # G7K15 integrates degree-22 polynomials exactly
    v, err = gauss_kronrod(lambda x: x**20, 0.0, 1.0)[:2]
    assert v == pytest.approx(1 / 21, rel=1e-15)


@pytest.mark.parametrize("f,a,b", [
    (np.sin, 0.0, math.pi),
    (lambda x: np.exp(-x) * np.cos(5 * x), 0.0, 3.0),
    (lambda x: 1 / (1 + 25 * x**2), -1.0, 1.0),
    (np.sqrt, 0.0, 2.0),
])
def test_integrate_against_scipy(f, a, b):
    ref = sci.quad(f, a, b, epsabs=1e-14, epsrel=1e-13)[0]
    r = integrate(f, [a, b], rtol=1e-12)
    assert r.value == pytest.approx(ref, rel=1e-11)
    assert r.error <= 1e-9 * abs(ref) + 1e-14


@given(st.floats(0.2, 5.0), st.floats(0.5, 3.0))
@settings(max_examples=40, deadline=None)
def test_halfline_gamma_integrals(rate, c):
    # int t^(c-1) exp(-rate t) dt = Gamma(c) / rate^c
    r = integrate_halfline(lambda t: t ** (c - 1) * np.exp(-rate * t), scale=1 / rate, rtol=1e-11)
    assert r.value == pytest.approx(math.gamma(c) / rate**c, rel=1e-9)


def test_halfline_log_singularity():
    r = integrate_halfline(lambda t: -np.log(t) * np.exp(-t), rtol=1e-12)
    assert r.value == pytest.approx(0.5772156649015329, rel=1e-10)


def test_halfline_finite_upper():
    r = integrate_halfline(lambda t: np.ones_like(t), upper=3.0)
    assert r.value == pytest.approx(3.0, rel=1e-13)


def test_halfline_divergence():
    with pytest.raises(DivergenceError):
        integrate_halfline(lambda t: 1 / (1 + t))


def test_wynn_accelerates_alternating_series():
    partial = np.cumsum([(-1) ** k / (k + 1) for k in range(20)])
    assert abs(partial[-1] - math.log(2)) > 1e-2
    assert wynn_epsilon(partial) == pytest.approx(math.log(2), abs=1e-12)


def test_wynn_short_sequence():
    assert wynn_epsilon([1.0, 2.0]) == 2.0


@pytest.mark.parametrize("a", [0.3, 1.0, 4.0])
def test_oscillatory_dirichlet(a):
    r = oscillatory_integral(lambda x: np.sin(a * x) / x, omega=a, tol=1e-9)
    assert r.value == pytest.approx(math.pi / 2, abs=1e-8)


def test_oscillatory_damped():
    # int_0^inf sin(x)/(x (1 + x)) dx against scipy's weighted quadrature
    ref = sci.quad(lambda x: np.sin(x) / x / (1 + x), 0, 1)[0] + sci.quad(
        lambda x: 1 / x / (1 + x), 1, np.inf, weight="sin", wvar=1.0)[0]
    r = oscillatory_integral(lambda x: np.sin(x) / (x * (1 + x)), tol=1e-10)
    assert r.value == pytest.approx(ref, abs=1e-8)
