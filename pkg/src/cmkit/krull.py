"""
Derivatives of solutions of ``g(x + 1) - g(x) = f(x)``.

For ``f`` with monotone derivatives tending to zero the solution is fixed up
to an additive constant by::

    g'(x)     = lim_n  f(x + n) - sum_{k=0}^{n} f'(x + k)
    g^(j)(x)  = - sum_{k>=0} f^(j)(x + k)          (j >= 2)

Both sums converge slowly (``f = log`` gives terms like ``1/k^2``), so after a
few direct terms the remainder is replaced by its Euler-Maclaurin expansion.
Derivatives of ``f`` come from jets, so only the expression is needed.
"""

import math

from . import expr as ex
from .errors import ConvergenceError, DivergenceError, NonFiniteError
from .specials import BERNOULLI_EVEN

EM_TERMS = 4  # Bernoulli corrections B_2 .. B_8


def _as_f(f):
    return ex.parse(f) if isinstance(f, str) else ex.as_expr(f)


def _require_decay(f, order, x, what):
    """Raise unless ``|f^(order)|`` shrinks towards 0 far to the right of ``x``."""
    try:
        near, mid, far = (abs(ex.jet_eval(f, x + s, order)[order]) for s in (0.0, 1e3, 1e6))
    except NonFiniteError:
        raise DivergenceError(f"f^({order}) overflows far out; {what} diverges") from None
    if far == 0.0 or (far < mid < near) or (far < mid and far < 1e-12):
        return
    raise DivergenceError(f"f^({order}) does not decay at infinity; {what} diverges")


def _em_coeffs(terms):
    return [BERNOULLI_EVEN[i] / math.factorial(2 * i + 2) for i in range(terms)]


def krull_gprime(f, x, N=10_000, tol=1e-12, em_terms=EM_TERMS):
    """``g'(x)`` for the solution of ``g(x + 1) - g(x) = f(x)``.

    The n-th estimate is the Euler-Maclaurin completed limit::

        f(x+n+1) - sum_{k<=n} f'(x+k) - f'(x+n+1)/2 + sum_i B_2i/(2i)! f^(2i)(x+n+1)

    and the iteration stops at the first ``n`` where two consecutive
    estimates differ by less than ``tol``.

    Raises
    ------
    ConvergenceError
        If no such ``n <= N`` exists.
    """
    f = _as_f(f)
    x = float(x)
    coeffs = _em_coeffs(em_terms)
    order = 2 * em_terms
    partial = 0.0
    prev = None
    for n in range(N + 1):
        partial += ex.jet_eval(f, x + n, 1)[1]
        d = ex.jet_eval(f, x + n + 1, order)
        est = d[0] - partial - d[1] / 2 + math.fsum(c * d[2 * i + 2] for i, c in enumerate(coeffs))
        if prev is not None and abs(est - prev) < tol:
            _require_decay(f, 1, x + n, "the limit defining g'")
            return est
        prev = est
    raise ConvergenceError(f"g'({x}) did not converge within {N} terms")


def krull_gderiv(f, j, x, N=10_000, tol=1e-12, em_terms=EM_TERMS):
    """``g^(j)(x) = -sum_{k>=0} f^(j)(x + k)`` for ``j >= 2``.

    After ``n`` direct terms the tail is::

        -f^(j-1)(x+n) + f^(j)(x+n)/2 - sum_i B_2i/(2i)! f^(j+2i-1)(x+n)

    which assumes ``f^(j-1)`` vanishes at infinity.  Iteration stops when two
    consecutive completed sums differ by less than ``tol``.

    Raises
    ------
    DivergenceError
        If the terms ``f^(j)(x+k)`` stop shrinking or ``f^(j-1)`` does not
        decay.
    ConvergenceError
        If the sum does not settle within ``N`` terms.
    """
    f = _as_f(f)
    j = int(j)
    if j < 2:
        raise ValueError("krull_gderiv needs j >= 2; use krull_gprime for j = 1")
    x = float(x)
    coeffs = _em_coeffs(em_terms)
    order = j + 2 * em_terms - 1
    partial = 0.0
    prev = None
    history = []
    for n in range(N + 1):
        d = ex.jet_eval(f, x + n, order)
        if n == 0 and all(v == 0.0 for v in d[j:]):
            # f is a polynomial of degree < j near x: every term vanishes
            if ex.jet_eval(f, x + 1, order)[j] == 0.0:
                return 0.0
        tail = -d[j - 1] + d[j] / 2 - math.fsum(c * d[j + 2 * i + 1] for i, c in enumerate(coeffs))
        est = -(partial + tail)
        history.append(abs(d[j - 1]))
        if prev is not None and abs(est - prev) < tol:
            _require_decay(f, j - 1, x + n, f"the series for g^({j})")
            return est
        if n >= 50 and history[-1] >= history[-26] > 0:
            raise DivergenceError(f"f^({j - 1})(x + k) does not decay; the series for g^({j}) diverges")
        prev = est
        partial += d[j]
    raise ConvergenceError(f"g^({j})({x}) did not converge within {N} terms")


def krull_residual(f, x_grid, g_solver=None, j=2):
    """Largest ``|g^(j)(x+1) - g^(j)(x) - f^(j)(x)|`` over the grid.

    ``g_solver`` maps ``x`` to ``g^(j)(x)``; by default it is
    :func:`krull_gderiv`.
    """
    f = _as_f(f)
    if g_solver is None:
        def g_solver(x):
            return krull_gderiv(f, j, x)
    worst = 0.0
    for x in x_grid:
        x = float(x)
        r = g_solver(x + 1) - g_solver(x) - ex.jet_eval(f, x, j)[j]
        worst = max(worst, abs(r))
    return worst
