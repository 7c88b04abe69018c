import json
import math

import mpmath
import numpy as np
import pytest

from cmkit import cmtest, gammaex as ge
from cmkit import expr as ex

mpmath.mp.dps = 50
GRID = ge.default_t_grid()


def mp_h_a(t, a):
    t = mpmath.mpf(t)
    return t - 2 + (2 + t) * mpmath.exp(-t) - t**3 / 6 * mpmath.exp(-a * t)


def mp_h_b(t, b):
    t = mpmath.mpf(t)
    return t * mpmath.exp(-b * t) / (1 - mpmath.exp(-t)) + t * (b - mpmath.mpf(1) / 2) - 1


class TestW:
    def test_density_near_zero(self):
        assert 0 < ge.w_density(1e-6) < 1e-6
        assert ge.w_density(0.0) == 0.0

    def test_density_at_one(self):
        assert ge.w_density(1.0) == pytest.approx(2 - 1 / (1 - math.exp(-1)), rel=1e-14)

    def test_density_positive(self):
        assert np.all(ge.w_density(np.geomspace(1e-4, 100, 400)) > 0)

    def test_value_and_quadrature(self):
        assert ge.w_value(1.0) == pytest.approx(2 - math.pi**2 / 6, rel=1e-14)
        assert ge.w_by_quadrature(1.0) == pytest.approx(ge.w_value(1.0), rel=1e-7)

    def test_expression_matches(self):
        assert ex.evaluate(ge.w_expr(), 2.5) == pytest.approx(ge.w_value(2.5), rel=1e-14)


class TestGa:
    @pytest.mark.parametrize("t", [1e-4, 1e-3, 0.01, 0.5, 0.999, 1.0, 1.001, 3.0, 30.0])
    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
    def test_normalized_against_mpmath(self, t, a):
        want = float(mp_h_a(t, a) / mpmath.mpf(t) ** 3)
        assert ge.h_a_normalized(t, a) == pytest.approx(want, rel=1e-12, abs=1e-16)

    def test_series_switch_continuity(self):
        s = ge.SERIES_SWITCH
        below, above = ge.h_a_normalized(s * (1 - 1e-12), 0.5), ge.h_a_normalized(s, 0.5)
        assert below == pytest.approx(above, rel=1e-10)

    def test_u_limits(self):
        assert 0.49 < ge.u(1e-3) < 0.51
        big = np.array([1e2, 1e3, 1e4])
        # u(t) ~ log(t)/t at infinity
        assert np.all(np.diff(ge.u(big)) < 0) and ge.u(1e4) < 0.01

    def test_u_decreasing(self):
        assert np.all(np.diff(ge.u(np.geomspace(1e-2, 50, 200))) < 0)

    def test_threshold_densities(self):
        assert np.min(ge.h_a(GRID, 0.5)) >= -1e-12
        assert np.max(ge.h_a(GRID, 0.0)) <= 1e-12

    def test_limit_at_infinity(self):
        assert abs(ge.g_a_value(50.0, 0.5)) < 1e-3

    def test_signs_on_grid(self):
        xs = np.geomspace(0.1, 20, 30)
        g_half = np.array([ge.g_a_value(x, 0.5) for x in xs])
        assert np.all(g_half > 0) and np.all(np.diff(g_half) < 0)
        assert all(ge.g_a_value(x, 0.0) < 0 for x in xs)

    def test_expression_matches(self):
        assert ex.evaluate(ge.g_a_expr(0.5), 1.5) == pytest.approx(ge.g_a_value(1.5, 0.5), rel=1e-12)


class TestPhi:
    def test_coefficient_roots(self):
        lo, hi = 0.5 - 1 / math.sqrt(12), 0.5 + 1 / math.sqrt(12)
        assert ge.small_t_coefficient(lo) == pytest.approx(0, abs=1e-15)
        assert ge.small_t_coefficient(hi) == pytest.approx(0, abs=1e-15)
        assert ge.small_t_coefficient(0.7) == pytest.approx(-0.021667, abs=1e-6)
        assert ge.small_t_coefficient(0.85) == pytest.approx(0.36125 - 0.425 + 1 / 12, abs=1e-15)

    def test_ratio_at_small_t(self):
        assert ge.h_b(1e-3, 1.0) / 1e-6 == pytest.approx(1 / 12, rel=1e-3)

    @pytest.mark.parametrize("t", [1e-4, 0.01, 0.3, 0.49999, 0.5, 2.0, 40.0])
    @pytest.mark.parametrize("b", [0.6, 0.7886751, 1.0, 1.5])
    def test_against_mpmath(self, t, b):
        want = float(mp_h_b(t, b) / mpmath.mpf(t) ** 2)
        assert ge.h_b_over_t2(t, b) == pytest.approx(want, rel=1e-10, abs=1e-15)

    def test_monotone_in_b(self):
        assert np.all(ge.h_b(GRID, 0.9) > ge.h_b(GRID, 0.8))

    def test_wrong_shift_grows(self):
        vals = [abs(ge.phi_bc_value(x, 1.0, 0.3)) for x in (10, 100, 1000)]
        assert vals[0] < vals[1] < vals[2]

    def test_constant_at_infinity(self):
        # with c = b - 1/2 the function tends to log(2 pi)/2, the atom at 0
        assert ge.phi_bc_value(1e6, 1.0, 0.5) == pytest.approx(ge.HALF_LOG_2PI, abs=1e-6)


class TestRepresentations:
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
    def test_closed_forms_match_quadrature(self, x):
        assert ge.w_by_quadrature(x) == pytest.approx(ge.w_value(x), rel=1e-6)
        for a in (0.0, 0.5, 1.0):
            closed = ge.g_a_value(x, a)
            assert abs(ge.g_a_by_quadrature(x, a) - closed) <= 1e-6 * (1 + abs(closed))
        for b in (0.79, 0.9, 1.2):
            closed = ge.phi_bc_value(x, b, b - 0.5)
            assert abs(ge.phi_by_quadrature(x, b) - closed) <= 1e-6 * (1 + abs(closed))

    @pytest.mark.parametrize("label,f", [
        ("W", ge.w_expr()),
        ("G_1/2", ge.g_a_expr(0.5)),
        ("G_1", ge.g_a_expr(1.0)),
        ("-G_0", -ge.g_a_expr(0.0)),
        ("phi_0.79", ge.phi_bc_expr(0.79, 0.29)),
    ])
    def test_cm_consistent(self, label, f):
        assert cmtest.cm_grid_check(f, K=6).verdict == "consistent"

    @pytest.mark.parametrize("f", [ge.g_a_expr(0.4), ge.phi_bc_expr(0.75, 0.25)])
    def test_cm_refuted(self, f):
        r = cmtest.cm_grid_check(f, K=6)
        assert r.refuted and cmtest.recheck_witness(f, r.witnesses[0])[2]


class TestThresholds:
    def test_scan_a(self):
        r = ge.scan_exa_a()
        assert r.status == "bracketed" and r.contains_claim
        assert r.bracket[1] - r.bracket[0] <= 1e-4
        assert r.witness_below[2] < 0 <= r.margin_above + 1e-10

    def test_scan_b(self):
        r = ge.scan_exa_b()
        assert r.status == "bracketed" and r.contains_claim
        assert abs(0.5 * sum(r.bracket) - ge.B_THRESHOLD) <= 1e-4

    def test_degenerate(self):
        r = ge.threshold_scan(lambda p, t: np.exp(-t) + p, (0.0, 1.0))
        assert r.status == "always_nonnegative" and r.bracket == (0.0, 0.0)

    def test_never(self):
        r = ge.threshold_scan(lambda p, t: -np.ones_like(t), (0.0, 1.0))
        assert r.status == "never_nonnegative" and r.bracket is None

    def test_nonmonotone(self):
        r = ge.threshold_scan(lambda p, t: np.full_like(t, math.sin(6 * p)), (0.0, 1.0))
        assert r.status == "nonmonotone"

    def test_to_dict(self):
        d = json.loads(json.dumps(ge.scan_exa_a().to_dict()))
        assert d["parameter"] == "a" and d["contains_claim"]
