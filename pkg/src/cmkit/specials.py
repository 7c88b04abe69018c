"""
Special functions needed by the Laplace pairs and Gamma-function examples.

Everything here is self-contained double-precision code:

* ``polygamma(n, x)``: upward recurrence to a large argument, then the
  Stirling-type asymptotic series.
* ``exp_integral_e1(t)``: power series for small ``t``, continued fraction
  otherwise.
* ``bessel_i1(z)`` (and the integer-order helper ``bessel_i``): ascending
  series, with the Hankel asymptotic form for large arguments.

The scalar routines accept Python floats.  ``vectorized`` wraps any of them for
numpy arrays.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class SpecialsConfig:
    """Tuning knobs for the special-function kernels.

    Attributes
    ----------
    series_tol : float
        Relative truncation tolerance of every series.
    recurrence_shift : int
        Polygamma arguments are shifted above ``recurrence_shift + n`` before
        the asymptotic series is summed.
    e1_switch : float
        ``E1`` uses its power series for ``t <= e1_switch`` and the continued
        fraction above it.
    bessel_switch : float
        ``I_n`` switches to the asymptotic form for ``z > max(bessel_switch, n**2)``.
    """

    series_tol: float = 1e-16
    recurrence_shift: int = 12
    e1_switch: float = 1.0
    bessel_switch: float = 40.0

    def __post_init__(self):
        if not 0 < self.series_tol <= 1e-6:
            raise ValueError("series_tol must lie in (0, 1e-6]")
        if self.recurrence_shift < 1:
            raise ValueError("recurrence_shift must be >= 1")


DEFAULT_CONFIG = SpecialsConfig()


def _bernoulli_numbers(count):
    """Exact B_0..B_{count-1} (with B_1 = -1/2) by the Akiyama-Tanigawa algorithm."""
    out = []
    a = [Fraction(0)] * count
    for m in range(count):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if count > 1:
        out[1] = -out[1]
    return out


BERNOULLI = _bernoulli_numbers(42)
# B_2, B_4, ... as floats, used by the asymptotic series and Euler-Maclaurin tails
BERNOULLI_EVEN = [float(BERNOULLI[2 * k]) for k in range(1, 21)]


def polygamma(n, x, config=DEFAULT_CONFIG):
    """Polygamma function of order ``n``, the (n+1)-th derivative of log Gamma.

    Parameters
    ----------
    n : int
        Nonnegative order; ``n = 0`` gives the digamma function.
    x : float
        Positive argument.

    Returns
    -------
    float
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"polygamma order must be nonnegative, got {n}")
    x = float(x)
    if not x > 0:
        raise DomainError(f"polygamma requires x > 0, got {x}")

    target = config.recurrence_shift + n
    m = max(0, math.ceil(target - x))
    xs = x + m

    asym = _polygamma_asymptotic(n, xs)
    if m == 0:
        return asym

    # psi^(n)(x) = psi^(n)(x + m) - (-1)^n n! sum_{j<m} (x + j)^-(n+1)
    acc = 0.0
    for j in range(m - 1, -1, -1):
        acc += (x + j) ** (-(n + 1))
    sign = -1.0 if n % 2 == 0 else 1.0
    return asym + sign * math.factorial(n) * acc


def _polygamma_asymptotic(n, x):
    if n == 0:
        s = math.log(x) - 0.5 / x
        x2 = x * x
        p = x2
        for k, b in enumerate(BERNOULLI_EVEN[:12], start=1):
            term = b / (2 * k * p)
            s -= term
            if abs(term) < 1e-17 * abs(s):
                break
            p *= x2
        return s

    sign = 1.0 if n % 2 == 1 else -1.0
    # work with x^-n scaled terms to keep factorials from overflowing early
    s = math.factorial(n - 1) / x**n + math.factorial(n) / (2.0 * x ** (n + 1))
    coeff = math.factorial(n - 1)  # running (2k + n - 1)! / (2k)!
    for k in range(1, 20):
        coeff *= (2 * k + n - 1) * (2 * k + n - 2) / ((2 * k) * (2 * k - 1))
        term = BERNOULLI_EVEN[k - 1] * coeff / x ** (2 * k + n)
        s += term
        if abs(term) < 1e-17 * abs(s):
            break
    return sign * s


def digamma(x, config=DEFAULT_CONFIG):
    return polygamma(0, x, config)


def exp_integral_e1(t, config=DEFAULT_CONFIG):
    """Exponential integral E1(t) = int_1^inf exp(-t u) du / u for t > 0."""
    t = float(t)
    if not t > 0:
        raise DomainError(f"E1 requires t > 0, got {t}")
    if t <= config.e1_switch:
        # E1(t) = -gamma - log t - sum_{k>=1} (-t)^k / (k k!)
        s = 0.0
        term = 1.0
        for k in range(1, 200):
            term *= -t / k
            contrib = term / k
            s += contrib
            if abs(contrib) < config.series_tol * abs(s):
                break
        return -EULER_GAMMA - math.log(t) - s
    if t > 745.0:
        return 0.0
    # modified Lentz evaluation of the continued fraction
    tiny = 1e-300
    b = t + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        a = -i * i
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < config.series_tol:
            break
    return h * math.exp(-t)


def bessel_i(n, z, config=DEFAULT_CONFIG):
    """Modified Bessel function of the first kind I_n(z) for integer ``n``, ``z >= 0``."""
    n = abs(int(n))
    z = float(z)
    if z < 0:
        raise DomainError(f"bessel_i requires z >= 0, got {z}")
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    if z > max(config.bessel_switch, n * n):
        return _bessel_i_asymptotic(n, z, config)
    half = 0.5 * z
    q = half * half
    # leading term (z/2)^n / n!, built by logs to dodge overflow for large n
    term = math.exp(n * math.log(half) - math.lgamma(n + 1))
    s = term
    for m in range(1, 1000):
        term *= q / (m * (m + n))
        s += term
        if term < config.series_tol * s:
            break
    return s


def _bessel_i_asymptotic(n, z, config):
    mu = 4.0 * n * n
    s = 1.0
    term = 1.0
    prev = math.inf
    for k in range(1, 60):
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if abs(term) > prev:
            break
        s += term
        prev = abs(term)
        if prev < config.series_tol:
            break
    if z > 709.0:
        return math.inf
    return math.exp(z) / math.sqrt(2.0 * math.pi * z) * s


def bessel_i1(z, config=DEFAULT_CONFIG):
    """Modified Bessel function I_1(z) for z >= 0."""
    return bessel_i(1, z, config)


def vectorized(func):
    """Lift a scalar special function to numpy arrays (float output)."""
    vf = np.vectorize(func, otypes=[float])

    def wrapper(*args):
        out = vf(*args)
        return out if out.ndim else float(out)

    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper
