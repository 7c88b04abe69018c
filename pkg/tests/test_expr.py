import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from cmkit import expr as ex
from cmkit.errors import (
    BranchCutError,
    DomainError,
    JetOverflowError,
    NonFiniteError,
    ParseError,
    UnsupportedNodeError,
)

mpmath.mp.dps = 40


# ---------------------------------------------------------------------------
# random expression trees that stay finite for x in [0.5, 4]

consts = st.floats(0.1, 3.0).map(lambda v: ex.Const(round(v, 3)))


def _extend(children):
    return st.one_of(
        st.builds(ex.Add, children, children),
        st.builds(ex.Sub, children, children),
        st.builds(ex.Mul, children, children),
        st.builds(lambda a, b: ex.Div(a, ex.Add(ex.Const(1.0), ex.Mul(b, b))), children, children),
        st.builds(lambda a: ex.exp(ex.Div(a, ex.Add(ex.Const(1.0), ex.Mul(a, a)))), children),
        st.builds(lambda a: ex.log(ex.Add(ex.Const(1.0), ex.Mul(a, a))), children),
        st.builds(ex.Neg, children),
        st.builds(lambda a, p: ex.Pow(ex.Add(ex.Const(1.0), ex.Mul(a, a)), p), children,
                  st.sampled_from([0.5, -1.0, 2.0, -1.5, 3.0])),
    )


trees = st.recursive(st.one_of(st.just(ex.X), consts), _extend, max_leaves=8)


def mp_eval(e, x):
    """Reference evaluation in mpmath."""
    if isinstance(e, ex.Const):
        return mpmath.mpf(e.value)
    if isinstance(e, ex.Var):
        return x
    if isinstance(e, ex.Add):
        return mp_eval(e.left, x) + mp_eval(e.right, x)
    if isinstance(e, ex.Sub):
        return mp_eval(e.left, x) - mp_eval(e.right, x)
    if isinstance(e, ex.Mul):
        return mp_eval(e.left, x) * mp_eval(e.right, x)
    if isinstance(e, ex.Div):
        return mp_eval(e.left, x) / mp_eval(e.right, x)
    if isinstance(e, ex.Neg):
        return -mp_eval(e.arg, x)
    if isinstance(e, ex.Pow):
        return mp_eval(e.base, x) ** e.exponent
    if isinstance(e, ex.Func):
        a = mp_eval(e.arg, x)
        return {"exp": mpmath.exp, "log": mpmath.log, "lgamma": mpmath.loggamma,
                "E1": mpmath.e1, "I1": lambda z: mpmath.besseli(1, z)}[e.name](a)
    if isinstance(e, ex.Polygamma):
        return mpmath.polygamma(e.order, mp_eval(e.arg, x))
    raise TypeError(e)


# ---------------------------------------------------------------------------
# parser


class TestParse:
    def test_precedence(self):
        assert ex.evaluate(ex.parse("1 + 2*x^2"), 3.0) == 19.0
        assert ex.evaluate(ex.parse("-x^2"), 3.0) == -9.0
        assert ex.evaluate(ex.parse("x/2/4"), 8.0) == 1.0
        assert ex.evaluate(ex.parse("x^-2"), 2.0) == 0.25

    def test_exponent_is_a_single_number(self):
        with pytest.raises(ParseError):
            ex.parse("2^3^2")
        with pytest.raises(ParseError):
            ex.parse("x^x")

    def test_trees(self):
        assert ex.parse("exp(-x)") == ex.Func("exp", ex.Neg(ex.X))
        assert ex.parse("1/(2*x+3)^1.5") == ex.Div(
            ex.Const(1.0), ex.Pow(ex.Add(ex.Mul(ex.Const(2.0), ex.X), ex.Const(3.0)), 1.5))

    def test_functions(self):
        f = ex.parse("exp(x) + log(x) + lgamma(x) + E1(x) + I1(x) + polygamma(1, x)")
        x = 1.7
        want = (math.exp(x) + math.log(x) + math.lgamma(x) + float(mpmath.e1(x))
                + float(mpmath.besseli(1, x)) + float(mpmath.polygamma(1, x)))
        assert ex.evaluate(f, x) == pytest.approx(want, rel=1e-14)

    def test_scientific_constants(self):
        assert ex.evaluate(ex.parse("1.5e-3*x + 2E2"), 1000.0) == pytest.approx(201.5)

    def test_other_variable(self):
        assert ex.evaluate(ex.parse("t*exp(-t)", var="t"), 1.0) == pytest.approx(math.exp(-1))

    @pytest.mark.parametrize("text,offset", [
        ("x +", 3),
        ("2**x", 2),
        ("foo(x)", 0),
        ("(x", 2),
        ("x $ 1", 2),
    ])
    def test_errors_carry_offset(self, text, offset):
        with pytest.raises(ParseError) as info:
            ex.parse(text)
        assert info.value.offset == offset

    def test_polygamma_needs_integer_order(self):
        with pytest.raises(ParseError):
            ex.parse("polygamma(1.5, x)")


class TestPrinter:
    @pytest.mark.parametrize("text", [
        "-x^2 + 3*x/(1 + x)",
        "exp(-x)",
        "log(1 + 1/x)",
        "1/(2*x + 0.5)^1.5",
        "polygamma(2, x)",
        "x - (1 - x)",
        "x/(2*x)",
    ])
    def test_canonical_text_is_fixed(self, text):
        assert ex.to_text(ex.parse(text)) == text

    @given(trees)
    @settings(max_examples=200, deadline=None)
    def test_round_trip_preserves_value(self, e):
        again = ex.parse(ex.to_text(e))
        assert ex.to_text(again) == ex.to_text(ex.parse(ex.to_text(again)))
        for x in (0.7, 2.3):
            try:
                v = ex.evaluate(e, x)
            except (DomainError, NonFiniteError):
                continue
            assert ex.evaluate(again, x) == pytest.approx(v, rel=1e-12, abs=1e-12)

    def test_integer_constants_print(self):
        assert ex.to_text(ex.Mul(ex.Const(2), ex.X)) == "2*x"


class TestEvaluate:
    def test_vectorized(self):
        out = ex.evaluate(ex.parse("x^2"), np.array([1.0, 2.0, 3.0]))
        assert np.array_equal(out, [1.0, 4.0, 9.0])

    def test_domain_error(self):
        with pytest.raises(DomainError):
            ex.evaluate(ex.parse("log(x)"), -1.0)

    def test_overflow_is_nonfinite(self):
        with pytest.raises(NonFiniteError):
            ex.evaluate(ex.parse("exp(x)"), 1000.0)

    def test_operators_build_trees(self):
        f = ex.exp(-ex.X) * 2 + 1 / (ex.X + 1)
        assert ex.evaluate(f, 1.0) == pytest.approx(2 * math.exp(-1) + 0.5)

    def test_substitute(self):
        f = ex.substitute(ex.parse("exp(-x)"), ex.parse("x^2"))
        assert ex.evaluate(f, 2.0) == pytest.approx(math.exp(-4))
        assert ex.contains_var(f)
        assert not ex.contains_var(ex.parse("2 + 3"))


class TestJets:
    @pytest.mark.parametrize("text", [
        "exp(-2*x)", "log(1 + 1/x)", "1/(x + 1)^2.5", "lgamma(x)", "polygamma(1, x)",
        "E1(x)", "I1(x)", "x^3 - 2*x", "exp(1/x)", "log(1 + x)/x", "x*exp(-x)",
    ])
    @pytest.mark.parametrize("x", [0.3, 1.0, 4.5])
    def test_against_mpmath_derivatives(self, text, x):
        f = ex.parse(text)
        got = ex.jet_eval(f, x, 8).coeffs
        want = mpmath.diffs(lambda z: mp_eval(f, z), mpmath.mpf(x), 8)
        for k, w in enumerate(want):
            w = float(w)
            assert got[k] == pytest.approx(w, rel=1e-9, abs=1e-12 * (1 + abs(got[0]))), k

    @given(trees, st.floats(0.5, 4.0))
    @settings(max_examples=60, deadline=None)
    def test_random_trees_against_mpmath(self, e, x):
        try:
            got = ex.jet_eval(e, x, 4).coeffs
        except (DomainError, NonFiniteError):
            assume(False)
        want = [float(v) for v in mpmath.diffs(lambda z: mp_eval(e, z), mpmath.mpf(x), 4)]
        scale = max(1.0, *map(abs, want))
        for g, w in zip(got, want):
            assert abs(g - w) <= 1e-9 * scale

    def test_reciprocal(self):
        assert ex.jet_eval(ex.parse("1/x"), 2.0, 3).coeffs == pytest.approx((0.5, -0.25, 0.25, -0.375))

    def test_lgamma_seeded_by_digamma(self):
        # Psi(1) = lim (log n - H_n), summed with the first correction term as an oracle
        n = 10**6
        psi1 = math.log(n) - math.fsum(1.0 / k for k in range(1, n + 1)) + 1 / (2 * n)
        assert ex.jet_eval(ex.parse("lgamma(x)"), 1.0, 1).coeffs[1] == pytest.approx(psi1, abs=1e-10)

    def test_order_zero_is_value(self):
        f = ex.parse("log(1 + x)/x")
        assert ex.jet_eval(f, 2.0, 0).coeffs[0] == pytest.approx(ex.evaluate(f, 2.0), rel=1e-15)

    def test_high_order_exponential(self):
        d = ex.jet_eval(ex.parse("exp(-3*x)"), 1.0, 20).coeffs
        for k, v in enumerate(d):
            assert v == pytest.approx((-3.0) ** k * math.exp(-3.0), rel=1e-12)

    def test_overflow(self):
        with pytest.raises(JetOverflowError):
            ex.jet_eval(ex.parse("exp(exp(x))"), 10.0, 5)

    def test_base_point_must_be_positive(self):
        with pytest.raises(DomainError):
            ex.jet_eval(ex.parse("x"), 0.0, 1)


class TestComplex:
    def test_principal_log(self):
        assert ex.eval_complex(ex.parse("log(x + 1)"), 1j) == pytest.approx(
            complex(mpmath.log(1 + 1j)), rel=1e-15)

    def test_matches_real_on_real_axis(self):
        f = ex.parse("exp(-x)/(x + 1)^1.5 + log(1 + 1/x)")
        assert ex.eval_complex(f, 2.0 + 0j).real == pytest.approx(ex.evaluate(f, 2.0), rel=1e-14)

    def test_characteristic_function_of_gamma(self):
        # (1 + x)^-2 at -i s is the characteristic function (1 - i s)^-2
        s = np.array([0.5, 3.0])
        got = ex.eval_complex(ex.parse("1/(x + 1)^2"), -1j * s)
        assert np.allclose(got, (1 - 1j * s) ** -2.0, rtol=1e-14)

    def test_unsupported_node(self):
        with pytest.raises(UnsupportedNodeError):
            ex.eval_complex(ex.parse("lgamma(x)"), 1j)

    def test_branch_cut(self):
        with pytest.raises(BranchCutError):
            ex.eval_complex(ex.parse("log(x)"), -1 + 0j)
