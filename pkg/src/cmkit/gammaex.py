"""
Three completely monotone functions built from the Gamma function.

* ``W(x) = 1/x + 1/x^2 - psi'(x)``, the Laplace transform of
  ``d(t) = 1 + t - t/(1 - exp(-t))``.
* ``G_a(x) = log Gamma(x) - (x - 1/2) log x - psi'(x + a)/12 + x - log(2 pi)/2``,
  the Laplace transform of ``h_a(t) / (2 t^2 (1 - exp(-t)))`` with
  ``h_a(t) = t - 2 + (2 + t) exp(-t) - (t^3/6) exp(-a t)``.  It is CM exactly
  for ``a >= 1/2``, and ``-G_a`` is CM exactly for ``a = 0``.
* ``phi_{b,c}(x) = x + log Gamma(x + b) - (x + c) log x``, CM exactly for
  ``c = b - 1/2`` and ``b >= 1/2 + 1/sqrt(12)``; then
  ``phi_{b,c}(x) - log(2 pi)/2`` is the Laplace transform of ``h_b(t)/t^2``
  with ``h_b(t) = t exp(-b t)/(1 - exp(-t)) + t (b - 1/2) - 1``.

All three densities cancel catastrophically near ``t = 0``; there they are
summed from their Maclaurin series.  Parameter thresholds are located by
bisection on the sign of the density.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from . import expr as ex
from .errors import ConstraintError
from .quadrature import integrate_halfline
from .specials import BERNOULLI, polygamma

HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
A_THRESHOLD = 0.5
B_THRESHOLD = 0.5 + 1.0 / math.sqrt(12.0)

SERIES_SWITCH = 1.0
BERNOULLI_SWITCH = 0.5
_SERIES_TERMS = 26


def _vectorize(func):
    def wrapper(t, *args):
        scalar = np.ndim(t) == 0
        ta = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([func(float(v), *args) for v in ta.ravel()]).reshape(ta.shape)
        return float(out[0]) if scalar else out

    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# W


def _w_density(t):
    if t <= 0:
        return 0.0
    if t < 1e-4:
        return t / 2 - t * t / 12 + t**4 / 720
    return 1.0 + t - t / (-math.expm1(-t))


w_density = _vectorize(_w_density)
w_density.__doc__ = """``1 + t - t/(1 - exp(-t))``, positive for ``t > 0`` and 0 at the origin."""


def w_value(x):
    """``1/x + 1/x^2 - psi'(x)``."""
    x = float(x)
    return 1.0 / x + 1.0 / (x * x) - polygamma(1, x)


def w_expr():
    return ex.parse("1/x + 1/x^2 - polygamma(1, x)")


# ---------------------------------------------------------------------------
# G_a


def _p_over_t3(t):
    """``((2 + t) exp(-t) + t - 2) / t^3``."""
    if t < SERIES_SWITCH:
        # sum_{n>=3} (-1)^(n+1) (n-2) t^(n-3) / n!
        total, term = 0.0, 1.0 / 6.0
        for n in range(3, 3 + _SERIES_TERMS):
            total += term
            term *= -t * (n - 1) / ((n - 2) * (n + 1))
        return total
    return ((2.0 + t) * math.exp(-t) + t - 2.0) / t**3


def _h_a_normalized(t, a):
    return _p_over_t3(t) - math.exp(-a * t) / 6.0


def _h_a(t, a):
    return t**3 * _h_a_normalized(t, a)


h_a = _vectorize(_h_a)
h_a.__doc__ = """``t - 2 + (2 + t) exp(-t) - (t^3/6) exp(-a t)``."""

h_a_normalized = _vectorize(_h_a_normalized)
h_a_normalized.__doc__ = """``h_a(t) / t^3``; same sign as ``h_a`` and free of underflow near 0."""


def _u(t):
    if t < SERIES_SWITCH:
        # 6 p(t)/t^3 - 1 from its series, so log1p keeps full precision
        total, term = 0.0, -0.5
        for n in range(4, 4 + _SERIES_TERMS):
            total += term
            term *= -t * (n - 1) / ((n - 2) * (n + 1))
        return -math.log1p(total * t) / t
    return -(math.log(6.0) + math.log(_p_over_t3(t))) / t


u = _vectorize(_u)
u.__doc__ = """``-log(6 p(t) / t^3) / t`` with ``p(t) = (2 + t) exp(-t) + t - 2``.

``h_a(t) >= 0`` exactly when ``a >= u(t)``; ``u`` decreases from 1/2 at 0+
towards 0 at infinity.
"""


def g_a_value(x, a):
    """Closed form of ``G_a(x)``."""
    x, a = float(x), float(a)
    if a < 0:
        raise ConstraintError("a must be nonnegative")
    return (math.lgamma(x) - (x - 0.5) * math.log(x) - polygamma(1, x + a) / 12.0
            + x - HALF_LOG_2PI)


def _g_a_density(t, a):
    if t <= 0:
        return 0.0
    return _h_a_normalized(t, a) * t / (2.0 * -math.expm1(-t))


g_a_density = _vectorize(_g_a_density)
g_a_density.__doc__ = """``h_a(t) / (2 t^2 (1 - exp(-t)))``."""


def g_a_expr(a):
    a = float(a)
    return (ex.lgamma(ex.X) - (ex.X - 0.5) * ex.log(ex.X)
            - ex.polygamma(1, ex.X + a) / 12.0 + ex.X - HALF_LOG_2PI)


# ---------------------------------------------------------------------------
# phi_{b,c}


def _bernoulli_poly_coeffs(x, count):
    """``B_n(x)/n!`` for ``n = 0 .. count-1`` (exact, then rounded)."""
    xf = Fraction(x)
    out = []
    for n in range(count):
        s = sum(math.comb(n, k) * BERNOULLI[k] * xf ** (n - k) for k in range(n + 1))
        out.append(float(s / math.factorial(n)))
    return out


_BP_CACHE = {}


def _h_b_over_t2(t, b):
    if t < BERNOULLI_SWITCH:
        coeffs = _BP_CACHE.get(b)
        if coeffs is None:
            coeffs = _BP_CACHE.setdefault(b, _bernoulli_poly_coeffs(1.0 - b, 32))
        # sum_{n>=2} B_n(1-b) t^(n-2) / n!, Horner from the top
        total = 0.0
        for c in reversed(coeffs[2:]):
            total = total * t + c
        return total
    return (t * math.exp(-b * t) / -math.expm1(-t) + t * (b - 0.5) - 1.0) / (t * t)


def _h_b(t, b):
    return t * t * _h_b_over_t2(t, b)


h_b = _vectorize(_h_b)
h_b.__doc__ = """``t exp(-b t)/(1 - exp(-t)) + t (b - 1/2) - 1``."""

h_b_over_t2 = _vectorize(_h_b_over_t2)
h_b_over_t2.__doc__ = """``h_b(t) / t^2``, the density representing ``phi_{b, b-1/2}``."""


def small_t_coefficient(b):
    """``lim_{t->0} h_b(t)/t^2 = b^2/2 - b/2 + 1/12``."""
    return b * b / 2 - b / 2 + 1.0 / 12.0


def phi_bc_value(x, b, c):
    """``x + log Gamma(x + b) - (x + c) log x``."""
    x = float(x)
    if b < 0 or c < 0:
        raise ConstraintError("b and c must be nonnegative")
    return x + math.lgamma(x + b) - (x + c) * math.log(x)


def phi_bc_expr(b, c):
    return ex.X + ex.lgamma(ex.X + float(b)) - (ex.X + float(c)) * ex.log(ex.X)


# ---------------------------------------------------------------------------
# quadrature cross-checks


def laplace_of(density, x, rtol=1e-12):
    """``int_0^inf density(t) exp(-x t) dt`` for a vectorized density."""
    x = float(x)
    return integrate_halfline(lambda t: density(t) * np.exp(-x * t), scale=1.0 / x,
                              rtol=rtol).value


def w_by_quadrature(x):
    return laplace_of(w_density, x)


def g_a_by_quadrature(x, a):
    return laplace_of(lambda t: g_a_density(t, a), x)


def phi_by_quadrature(x, b):
    """``log(2 pi)/2 + int h_b(t)/t^2 exp(-x t) dt``, which equals ``phi_{b, b-1/2}(x)``."""
    return HALF_LOG_2PI + laplace_of(lambda t: h_b_over_t2(t, b), x)


# ---------------------------------------------------------------------------
# threshold scans


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of a bisection for the smallest parameter with a nonnegative density.

    ``status`` is ``"bracketed"``, ``"always_nonnegative"`` (the bracket
    collapses to the lower end of the range), ``"never_nonnegative"`` or
    ``"nonmonotone"``; only a bracketed result carries a threshold.
    """

    parameter_name: str
    claimed_threshold: float
    bracket: tuple
    witness_below: tuple
    margin_above: float
    status: str
    evaluations: int = 0

    @property
    def contains_claim(self):
        if self.bracket is None or self.claimed_threshold is None:
            return False
        lo, hi = self.bracket
        return lo <= self.claimed_threshold <= hi

    def to_dict(self):
        return {
            "parameter": self.parameter_name,
            "claimed_threshold": self.claimed_threshold,
            "bracket": None if self.bracket is None else list(self.bracket),
            "witness_below": None if self.witness_below is None else list(self.witness_below),
            "margin_above": self.margin_above,
            "status": self.status,
            "contains_claim": self.contains_claim,
        }


def default_t_grid():
    return np.geomspace(1e-4, 200.0, 2000)


def threshold_scan(density, param_range, t_grid=None, width=1e-4, floor=-1e-10,
                   parameter_name="p", claimed=None, probes=11):
    """Bisect for the parameter where ``min_t density(param, t) >= floor`` starts to hold.

    Parameters
    ----------
    density : callable
        ``density(param, t_array) -> array``, assumed nondecreasing in
        ``param``.
    param_range : (lo, hi)
    t_grid : array, optional
        Defaults to 2000 log-spaced points on ``[1e-4, 200]``.
    width : float
        Final bracket width.
    floor : float
        The predicate threshold for the minimum over ``t_grid``.
    probes : int
        Equally spaced parameters checked for a single false-to-true switch
        before bisecting.

    Returns
    -------
    ThresholdResult
    """
    t_grid = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    lo, hi = map(float, param_range)
    count = 0

    def minimum(p):
        nonlocal count
        count += 1
        vals = np.asarray(density(p, t_grid), dtype=float)
        i = int(np.argmin(vals))
        return float(vals[i]), float(t_grid[i])

    def ok(p):
        return minimum(p)[0] >= floor

    pattern = [ok(p) for p in np.linspace(lo, hi, probes)]
    switches = sum(1 for a, b in zip(pattern[:-1], pattern[1:]) if a != b)
    if switches > 1 or (switches == 1 and pattern[0]):
        return ThresholdResult(parameter_name, claimed, None, None, math.nan, "nonmonotone", count)
    if pattern[0]:
        return ThresholdResult(parameter_name, claimed, (lo, lo), None, minimum(lo)[0],
                               "always_nonnegative", count)
    if not pattern[-1]:
        v, t = minimum(hi)
        return ThresholdResult(parameter_name, claimed, None, (hi, t, v), math.nan,
                               "never_nonnegative", count)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    v, t = minimum(lo)
    return ThresholdResult(parameter_name, claimed, (lo, hi), (lo, t, v), minimum(hi)[0],
                           "bracketed", count)


def scan_exa_a(param_range=(0.0, 1.0), t_grid=None, **kwargs):
    """Threshold in ``a`` for ``h_a >= 0`` (equivalently ``G_a`` CM); expected 1/2."""
    return threshold_scan(lambda a, t: h_a_normalized(t, a), param_range, t_grid, parameter_name="a",
                          claimed=A_THRESHOLD, **kwargs)


def scan_exa_b(param_range=(0.6, 1.0), t_grid=None, **kwargs):
    """Threshold in ``b`` for ``h_b >= 0`` (equivalently ``phi_{b,b-1/2}`` CM); expected 1/2 + 1/sqrt(12)."""
    return threshold_scan(lambda b, t: h_b_over_t2(t, b), param_range, t_grid,
                          parameter_name="b", claimed=B_THRESHOLD, **kwargs)
