"""
Laplace transforms of measures, the catalog of explicit pairs, and
completely monotone probability densities built as exponential mixtures.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import expr as ex
from .errors import ConstraintError
from .measure import ExprDensity, Measure, dirac, total_mass
from .quadrature import integrate_halfline

DEFAULT_TOL = 1e-9


def transform(mu, x, tol=DEFAULT_TOL):
    """``int exp(-x t) dmu(t)`` for ``x > 0``.

    Atoms are summed exactly; the density part is integrated adaptively with
    relative tolerance ``tol`` (and an absolute floor at roundoff level of
    ``int |integrand|``).

    Raises
    ------
    DivergenceError
        When the integrand does not decay.
    ConvergenceError
        When the quadrature budget is exhausted.
    """
    return transform_detail(mu, x, tol)[0]


def transform_detail(mu, x, tol=DEFAULT_TOL):
    """Like :func:`transform` but returns ``(value, error_estimate)``."""
    x = float(x)
    if not x > 0:
        raise ConstraintError(f"transform needs x > 0, got {x}")
    value = math.fsum(m * math.exp(-x * loc) for loc, m in mu.atoms)
    error = 0.0
    d = mu.effective_density
    if d is not None:
        upper = mu.support_hint if mu.support_hint is not None else math.inf

        def integrand(t):
            return d(t) * np.exp(-x * t)

        r = integrate_halfline(integrand, scale=1.0 / x, rtol=tol, upper=upper, breaks=d.breaks)
        value += r.value
        error = r.error
    return value, error


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class TransformPair:
    """A function together with the measure it is the Laplace transform of."""

    name: str
    params: dict
    function: ex.Expr
    measure: Measure
    constraint_doc: str = ""

    def check(self, xs, tol=1e-11):
        """``(x, function(x), transform(x))`` rows for each x."""
        return [(x, ex.evaluate(self.function, x), transform(self.measure, x, tol)) for x in xs]


@dataclass(frozen=True)
class _Entry:
    builder: object
    params: tuple
    doc: str
    draw: object = field(repr=False, default=None)


def _t():
    return ex.X


def _times(c, e):
    return e if c == 1 else ex.Const(c) * e


def _power(e, p):
    if p == 0:
        return ex.Const(1.0)
    return e if p == 1 else ex.Pow(e, p)


def _decay(rate, v):
    """``exp(-rate * v)``, printed without a negative constant."""
    arg = v if rate == 1 else ex.Mul(ex.Const(rate), v)
    return ex.exp(-arg) if rate == 1 else ex.exp(ex.Mul(ex.Neg(ex.Const(rate)), v))


def _milsam1(a):
    if not a >= 0:
        raise ConstraintError("milsam1 needs a >= 0")
    return (_decay(a, ex.X) if a else ex.Const(1.0)), dirac(a)


def _milsam2(a, b, c):
    if a < 0 or b < 0 or c < 0 or a * a + b * b == 0:
        raise ConstraintError("milsam2 needs a, b, c >= 0 and a^2 + b^2 > 0")
    inner = _times(a, ex.X) if a else ex.Const(b)
    if a and b:
        inner = inner + b
    function = ex.Const(1.0) / _power(inner, c) if c else ex.Const(1.0)
    if c == 0:
        return function, dirac(0.0, 1.0)
    if a == 0:
        return function, dirac(0.0, b ** (-c))
    t = _t()
    factors = [f for f in (_power(t, c - 1.0), _decay(b / a, t) if b else None)
               if f is not None and f != ex.Const(1.0)]
    density = factors[0] * factors[1] if len(factors) == 2 else (factors or [ex.Const(1.0)])[0]
    density = _times(1.0 / (a**c * math.gamma(c)), density)
    return function, Measure(density=density)


def _milsam3(a, b):
    if not (a >= 1 and b > 0):
        raise ConstraintError("milsam3 needs a >= 1 and b > 0")
    function = ex.log(ex.Const(a) + ex.Const(b) / ex.X)
    t = _t()
    density = (ex.Const(1.0) - _decay(b / a, t)) / t
    atoms = ((0.0, math.log(a)),) if a > 1 else ()
    return function, Measure(atoms=atoms, density=density)


def _milsam4():
    function = ex.log(ex.X + 1.0) / ex.X
    return function, Measure(density=ex.e1(_t()))


def _milsam5(a):
    if not a > 0:
        raise ConstraintError("milsam5 needs a > 0")
    function = ex.exp(ex.Const(a) / ex.X)
    t = _t()
    root = ex.Pow(_times(a, t), 0.5)
    density = _times(a, ex.i1(ex.Const(2.0) * root) / root)
    return function, Measure(atoms=((0.0, 1.0),), density=density)


def _psin(n):
    n = int(n)
    if n < 1:
        raise ConstraintError("psin needs an integer n >= 1")
    function = ex.polygamma(n, ex.X)
    t = _t()
    ratio = _power(t, float(n)) / (ex.Const(1.0) - ex.exp(-t))
    density = ratio if n % 2 == 1 else -ratio
    return function, Measure(density=density)


def _recxn(a):
    if not a > -1:
        raise ConstraintError("recxn needs a > -1")
    function = ex.Const(1.0) / _power(ex.X, a + 1.0)
    density = _times(1.0 / math.gamma(a + 1.0), _power(_t(), a))
    return function, Measure(density=density)


CATALOG = {
    "milsam1": _Entry(
        _milsam1, ("a",), "exp(-a x) <-> unit mass at a; a >= 0",
        lambda rng: {"a": float(rng.uniform(0.0, 3.0))},
    ),
    "milsam2": _Entry(
        _milsam2, ("a", "b", "c"),
        "(a x + b)^-c <-> exp(-b t/a) t^(c-1) / (a^c Gamma(c)); a, b, c >= 0, a^2 + b^2 > 0",
        lambda rng: {"a": float(rng.uniform(0.2, 3.0)), "b": float(rng.uniform(0.0, 3.0)),
                     "c": float(rng.uniform(0.5, 3.0))},
    ),
    "milsam3": _Entry(
        _milsam3, ("a", "b"),
        "log(a + b/x) <-> log(a) mass at 0 + (1 - exp(-b t/a))/t; a >= 1, b > 0",
        lambda rng: {"a": float(rng.uniform(1.0, 4.0)), "b": float(rng.uniform(0.1, 3.0))},
    ),
    "milsam4": _Entry(_milsam4, (), "log(1 + x)/x <-> E1(t)", lambda rng: {}),
    "milsam5": _Entry(
        _milsam5, ("a",), "exp(a/x) <-> unit mass at 0 + a I1(2 sqrt(a t))/sqrt(a t); a > 0",
        lambda rng: {"a": float(rng.uniform(0.1, 2.0))},
    ),
    "psin": _Entry(
        _psin, ("n",), "polygamma(n, x) <-> (-1)^(n+1) t^n/(1 - exp(-t)); n = 1, 2, ...",
        lambda rng: {"n": int(rng.integers(1, 4))},
    ),
    "recxn": _Entry(
        _recxn, ("a",), "x^-(a+1) <-> t^a / Gamma(a + 1); a > -1",
        lambda rng: {"a": float(rng.choice([0.5, 1.0, 2.0]))},
    ),
}


def catalog(name, **params):
    """Instantiate the named transform pair.

    Raises
    ------
    ConstraintError
        For an unknown name, missing parameters, or parameters outside the
        pair's admissible region.
    """
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ConstraintError(f"unknown transform pair {name!r}; known: {sorted(CATALOG)}") from None
    missing = [p for p in entry.params if p not in params]
    extra = [p for p in params if p not in entry.params]
    if missing or extra:
        raise ConstraintError(f"{name} takes parameters {entry.params}, got {sorted(params)}")
    function, measure = entry.builder(**params)
    return TransformPair(name, dict(params), function, measure, entry.doc)


def random_params(name, rng):
    """An admissible random parameter draw for the named pair."""
    return CATALOG[name].draw(rng)


# ---------------------------------------------------------------------------
# CM probability densities


class MixtureDensity:
    """``x -> int t exp(-x t) dnu(t)``, a mixture of exponential densities.

    Every such function is a completely monotone probability density on
    ``(0, inf)`` when ``nu`` is a probability measure without an atom at 0.
    """

    is_cm_density = True

    def __init__(self, nu):
        self.nu = nu
        self._tilted = _tilt(nu)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty(x.shape)
        for idx, val in np.ndenumerate(x):
            out[idx] = transform(self._tilted, val, tol=1e-12)
        return float(out) if out.ndim == 0 else out

    def to_expr(self):
        """Expression form, available when ``nu`` is purely atomic."""
        if self.nu.density is not None:
            raise ConstraintError("only atomic mixing measures have an expression form")
        e = None
        for t, w in self.nu.atoms:
            term = ex.Const(w * t) * ex.exp(ex.Const(-t) * ex.X)
            e = term if e is None else e + term
        return e

    def normalization(self):
        """Numerical value of ``int_0^inf f(x) dx`` (1 for a probability density)."""
        if self.nu.density is None:
            f = self.to_expr()
            rate = min(t for t, _ in self.nu.atoms)
            return integrate_halfline(lambda x: ex.evaluate(f, x), scale=1.0 / rate, rtol=1e-12).value
        return integrate_halfline(self, rtol=1e-10).value


def _tilt(nu):
    atoms = tuple((t, t * m) for t, m in nu.atoms)
    d = nu.density
    if d is None:
        return Measure(atoms=atoms)
    if isinstance(d, ExprDensity):
        density = ExprDensity(ex.X * d.expression)
    else:
        base = d
        density = lambda t: np.asarray(t) * base(t)  # noqa: E731
    return Measure(atoms=atoms, density=density, support_hint=nu.support_hint)


def exponential_mixture(nu, mass_tol=1e-8):
    """CM probability density with mixing measure ``nu`` over exponential rates.

    Raises
    ------
    ConstraintError
        If ``nu`` is not a probability measure or has an atom at rate 0.
    """
    if nu.mass_at_zero() > 0:
        raise ConstraintError("the mixing measure has an atom at rate 0")
    mass = total_mass(nu)
    if abs(mass - 1.0) > mass_tol:
        raise ConstraintError(f"mixing measure must have mass 1, got {mass:.12g}")
    return MixtureDensity(nu)


def mean_parametrized_mixture(atoms):
    """Mixture ``sum w_i exp(-x/s_i)/s_i`` parametrized by component means ``s_i``."""
    atoms = [(float(s), float(w)) for s, w in atoms]
    if any(not s > 0 for s, _ in atoms):
        raise ConstraintError("component means must be positive")
    if any(not w > 0 for _, w in atoms):
        raise ConstraintError("weights must be positive")
    if abs(sum(w for _, w in atoms) - 1.0) > 1e-8:
        raise ConstraintError("weights must sum to 1")
    return exponential_mixture(Measure(atoms=tuple((1.0 / s, w) for s, w in atoms)))
