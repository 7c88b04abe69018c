import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmkit import expr as ex
from cmkit import laplace, measure
from cmkit.errors import ConstraintError, DivergenceError
from cmkit.measure import Measure

T = ex.X


def exp_density(rate=1.0, support=60.0):
    return Measure(density=ex.exp(ex.Const(-rate) * T), support_hint=support)


class TestConstruction:
    def test_atoms_merge_and_sort(self):
        mu = Measure(atoms=((2.0, 1.0), (0.5, 1.0), (2.0, 0.5)))
        assert mu.atoms == ((0.5, 1.0), (2.0, 1.5))

    @pytest.mark.parametrize("atoms", [((-1.0, 1.0),), ((1.0, 0.0),), ((1.0, math.inf),)])
    def test_invalid_atoms(self, atoms):
        with pytest.raises(ConstraintError):
            Measure(atoms=atoms)

    def test_density_from_text(self):
        mu = Measure(density="t*exp(-t)")
        assert mu.density(np.array([1.0]))[0] == pytest.approx(math.exp(-1))

    def test_support_hint_truncates(self):
        mu = measure.lebesgue(2.0)
        assert measure.total_mass(mu) == pytest.approx(2.0, rel=1e-12)
        assert measure.cumulative(mu, 0.5) == pytest.approx(0.5, rel=1e-12)


class TestAlgebra:
    def test_scale(self):
        mu = Measure(atoms=((0.0, 1.0),), density=ex.exp(-T))
        half = measure.scale(mu, 0.5)
        assert measure.total_mass(half) == pytest.approx(1.0, rel=1e-10)
        with pytest.raises(ConstraintError):
            measure.scale(mu, -1.0)

    def test_add(self):
        s = measure.add(measure.dirac(1.0), exp_density())
        assert laplace.transform(s, 1.0) == pytest.approx(math.exp(-1) + 0.5, rel=1e-9)

    def test_atoms_convolve_to_atoms(self):
        c = measure.convolve(measure.dirac(1.0), measure.dirac(2.0))
        assert c.atoms == ((3.0, 1.0),)
        assert laplace.transform(c, 1.0) == pytest.approx(math.exp(-3), rel=1e-12)

    def test_shifted_density(self):
        c = measure.convolve(measure.dirac(0.5), exp_density())
        assert c.density(np.array([0.25, 1.5])) == pytest.approx([0.0, math.exp(-1.0)])

    def test_density_square(self):
        # exp(-t) * exp(-t) = t exp(-t)
        c = measure.convolve(exp_density(), exp_density())
        assert c.density(np.array([1.0]))[0] == pytest.approx(math.exp(-1), abs=1e-6)
        assert c.density(np.array([3.0]))[0] == pytest.approx(3 * math.exp(-3), abs=1e-6)

    def test_density_convolution_needs_support(self):
        with pytest.raises(ConstraintError):
            measure.convolve(Measure(density=ex.exp(-T)), exp_density())

    @given(st.floats(0.0, 3.0), st.floats(0.1, 2.0), st.floats(0.3, 3.0), st.floats(0.2, 4.0))
    @settings(max_examples=25, deadline=None)
    def test_product_rule_atom_density(self, loc, mass, rate, x):
        mu = measure.dirac(loc, mass)
        nu = exp_density(rate, support=80.0 / rate)
        c = measure.convolve(mu, nu)
        lhs = laplace.transform(c, x)
        assert lhs == pytest.approx(laplace.transform(mu, x) * laplace.transform(nu, x), rel=1e-8)


class TestQueries:
    def test_cumulative_counts_atoms(self):
        mu = Measure(atoms=((0.0, 1.0), (2.0, 0.5)))
        assert measure.cumulative(mu, -1.0) == 0.0
        assert measure.cumulative(mu, 1.0) == 1.0
        assert measure.cumulative(mu, 2.0) == 1.5

    def test_exponential_distribution(self):
        mu = Measure(density=ex.exp(-T))
        for t in (0.1, 1.0, 5.0):
            assert measure.cumulative(mu, t) == pytest.approx(-math.expm1(-t), rel=1e-10)

    def test_is_positive(self):
        assert measure.is_positive(Measure(density=T * ex.exp(-T)), np.linspace(0, 10, 50))
        assert not measure.is_positive(Measure(density=ex.Const(1.0) - T), np.linspace(0, 10, 50))

    def test_infinite_mass(self):
        with pytest.raises(DivergenceError):
            measure.total_mass(Measure(density=ex.Const(1.0)))


class TestStieltjes:
    def test_atom(self):
        # 1/(x + 2) is the transform of exp(-2u)
        nu = measure.stieltjes_to_laplace(measure.dirac(2.0))
        assert nu.density(np.array([1.0]))[0] == pytest.approx(math.exp(-2))
        assert laplace.transform(nu, 3.0) == pytest.approx(1 / 5, rel=1e-10)

    def test_lebesgue(self):
        # int_0^1 ds/(x + s) = log(1 + 1/x)
        nu = measure.stieltjes_to_laplace(measure.lebesgue(1.0))
        for x in (0.5, 2.0):
            assert laplace.transform(nu, x) == pytest.approx(math.log1p(1 / x), rel=1e-8)

    def test_divergent(self):
        with pytest.raises(DivergenceError):
            measure.stieltjes_to_laplace(Measure(density=ex.Const(1.0)))


class TestJSON:
    def test_round_trip(self):
        mu = Measure(atoms=((0.0, 1.0), (1.5, 0.25)), density="t^0.5*exp(-2*t)", support_hint=40)
        again = measure.from_json(measure.to_json(mu))
        assert again.atoms == mu.atoms
        assert again.support_hint == mu.support_hint
        ts = np.array([0.1, 1.0, 3.0])
        assert np.allclose(again.density(ts), mu.density(ts), rtol=1e-15)

    def test_document_shape(self):
        doc = json.loads(measure.to_json(measure.dirac(1.0)))
        assert doc == {"atoms": [{"t": 1.0, "mass": 1.0}], "density": None, "support_hint": None}

    def test_tabulated_density_has_no_text_form(self):
        c = measure.convolve(exp_density(), exp_density())
        with pytest.raises(ConstraintError):
            measure.to_json(c)
