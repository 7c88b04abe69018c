"""
Quadrature kernels.

``integrate`` is a globally adaptive 7/15-point Gauss-Kronrod scheme (the
QUADPACK error heuristic, without extrapolation).  ``integrate_halfline``
drives it over ``[0, inf)`` with log-spaced panels near the origin and a tail
that is extended panel by panel until its contribution is negligible.
``oscillatory_integral`` sums lobes between sign changes of an oscillating
integrand and accelerates the partial sums with Wynn's epsilon algorithm.

Integrands are called with numpy arrays and must return arrays.
"""

from dataclasses import dataclass
import heapq
import math

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DivergenceError, NonFiniteError

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes, ascending
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[:-1][::-1]])
_WG15[7] = _WG[-1]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    abs_integral: float
    intervals: int


def gauss_kronrod(f, a, b):
    """One 7/15-point Gauss-Kronrod panel; returns ``(value, error, abs_value)``."""
    c = 0.5 * (a + b)
    hl = 0.5 * (b - a)
    x = c + hl * _NODES
    with np.errstate(all="ignore"):
        y = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(y)):
        raise NonFiniteError(f"integrand not finite on [{a}, {b}]")
    resk = np.dot(_WK15, y)
    resg = np.dot(_WG15, y)
    resabs = np.dot(_WK15, np.abs(y))
    mean = 0.5 * resk
    resasc = np.dot(_WK15, np.abs(y - mean))
    err = abs((resk - resg) * hl)
    resasc *= abs(hl)
    resabs *= abs(hl)
    if resasc != 0 and err != 0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(50 * _EPS * resabs, err)
    return resk * hl, err, resabs


def integrate(f, breakpoints, atol=0.0, rtol=1e-10, limit=4000):
    """Adaptive integral of ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    The interval with the largest error estimate is bisected until the total
    error drops below ``max(atol, rtol * |value|)``.  Roundoff-level estimates
    (``50 eps * int |f|``) always count as converged.

    Raises
    ------
    ConvergenceError
        When ``limit`` intervals are exhausted.
    """
    pts = np.asarray(breakpoints, dtype=float)
    heap = []
    total = 0.0
    err_total = 0.0
    abs_total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        v, e, r = gauss_kronrod(f, a, b)
        heapq.heappush(heap, (-e, a, b, v, r))
        total += v
        err_total += e
        abs_total += r
    count = len(heap)
    while heap:
        floor = 50 * _EPS * abs_total
        if err_total <= max(atol, rtol * abs(total), floor):
            break
        if count >= limit:
            raise ConvergenceError(
                f"quadrature budget of {limit} intervals exhausted "
                f"(value {total:.6g}, error {err_total:.3g})"
            )
        e, a, b, v, r = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            # interval can no longer be split; accept what we have
            heapq.heappush(heap, (e, a, b, v, r))
            break
        v1, e1, r1 = gauss_kronrod(f, a, m)
        v2, e2, r2 = gauss_kronrod(f, m, b)
        heapq.heappush(heap, (-e1, a, m, v1, r1))
        heapq.heappush(heap, (-e2, m, b, v2, r2))
        total += v1 + v2 - v
        err_total += e1 + e2 + e
        abs_total += r1 + r2 - r
        count += 1
    # recompute sums to shed accumulated cancellation
    total = math.fsum(item[3] for item in heap)
    err_total = sum(-item[0] for item in heap)
    abs_total = sum(item[4] for item in heap)
    return QuadResult(total, err_total, abs_total, count)


def integrate_halfline(f, scale=1.0, rtol=1e-10, atol=0.0, lower=0.0, upper=math.inf,
                       breaks=(), limit=8000, max_doublings=80):
    """Integral of ``f`` over ``[lower, upper)``, ``upper`` possibly infinite.

    Panels are log-spaced near ``lower`` (integrable endpoint singularities such
    as ``-log t`` or ``t^-1/2``) and the tail is extended by doubling panels
    until a panel contributes less than ``rtol/10`` of the running total.

    Raises
    ------
    DivergenceError
        If the tail panels stop shrinking or the integrand overflows.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    head = [lower + scale * r for r in (0.0, 1e-12, 1e-9, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0)]
    pts = sorted({p for p in head if p < upper} | {b for b in breaks if lower < b < upper})
    if math.isfinite(upper):
        pts = [p for p in pts if p < upper] + [upper]
        try:
            return integrate(f, pts, atol=atol, rtol=rtol, limit=limit)
        except NonFiniteError as exc:
            raise DivergenceError(str(exc)) from exc

    try:
        res = integrate(f, pts, atol=atol, rtol=rtol, limit=limit)
        value, error, absval = res.value, res.error, res.abs_integral
        right = pts[-1]
        prev = math.inf
        growing = 0
        for _ in range(max_doublings):
            width = right - lower
            # breakpoints inside the next panel are honoured
            panel_pts = [right] + [b for b in breaks if right < b < right + width] + [right + width]
            r = integrate(f, panel_pts, atol=atol / 4, rtol=rtol / 4, limit=limit)
            value += r.value
            error += r.error
            absval += r.abs_integral
            right += width
            small = r.abs_integral <= 0.1 * max(rtol * abs(value), atol, 50 * _EPS * absval)
            if small and r.abs_integral <= prev:
                return QuadResult(value, error, absval, res.intervals)
            growing = growing + 1 if r.abs_integral > prev else 0
            if growing >= 8:
                raise DivergenceError("integrand tail is not decaying")
            prev = r.abs_integral
    except NonFiniteError as exc:
        raise DivergenceError(str(exc)) from exc
    raise DivergenceError(f"tail did not become negligible before t = {right:.3g}")


# ---------------------------------------------------------------------------
# oscillatory integrals


def wynn_epsilon(seq):
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the entry of the deepest even column that ends at the last term.
    """
    s = [float(v) for v in seq]
    if len(s) < 3:
        return s[-1]
    prev = [0.0] * (len(s) + 1)
    cur = s
    best = s[-1]
    k = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0.0 or not math.isfinite(d):
                return best if k % 2 == 0 else cur[-1]
            nxt.append(prev[i + 1] + 1.0 / d)
        k += 1
        prev, cur = cur, nxt
        if k % 2 == 0:
            if not math.isfinite(cur[-1]):
                break
            best = cur[-1]
    return best


@dataclass(frozen=True)
class OscillatoryResult:
    value: float
    error: float
    segments: int


def oscillatory_integral(g, omega=1.0, x0=1e-8, tol=1e-6, samples_per_period=8,
                         max_segments=5000, noise=None, window=12):
    """Integral of an oscillating, slowly decaying ``g`` over ``[0, inf)``.

    ``g`` is sampled every ``2 pi / (omega * samples_per_period)``; each lobe
    between consecutive sign changes is integrated adaptively and the partial
    sums at the zeros are extrapolated with :func:`wynn_epsilon`.  Stretches
    without a sign change are integrated as chunks whose length doubles.

    The piece ``[0, x0]`` is approximated by ``x0 * g(x0)``, which assumes
    ``g`` is bounded near the origin; that term also enters the error.

    ``noise`` is an optional callable ``x -> floor`` below which samples are
    treated as zero when locating sign changes.
    """
    omega = max(float(omega), 1e-3)
    h = 2.0 * math.pi / (omega * samples_per_period)
    g0 = float(np.asarray(g(np.array([x0])))[0])
    head = x0 * g0
    partial = [head]
    accel = []
    cur = x0
    seg_tol = max(tol * 1e-3, 1e-15)
    block = 64
    segments = 0

    def lobe(a, b):
        return integrate(g, [a, b], atol=seg_tol, rtol=1e-12, limit=400).value

    def scalar_g(x):
        return float(np.asarray(g(np.array([x])))[0])

    def converged():
        if len(accel) < 4:
            return False
        d1 = abs(accel[-1] - accel[-2])
        d2 = abs(accel[-2] - accel[-3])
        d3 = abs(accel[-3] - accel[-4])
        return max(d1, d2, d3) < tol

    while segments < max_segments:
        xs = cur + h * np.arange(1, block + 1)
        gs = np.asarray(g(xs), dtype=float)
        if not np.all(np.isfinite(gs)):
            raise NonFiniteError("oscillatory integrand is not finite")
        floor = noise(xs) if noise is not None else 0.0
        sg = np.where(np.abs(gs) <= floor, 0, np.sign(gs))
        nz = np.flatnonzero(sg)
        found = False
        last_sign_idx = None
        for idx in nz:
            if last_sign_idx is not None and sg[idx] != sg[last_sign_idx]:
                a, b = xs[last_sign_idx], xs[idx]
                root = brentq(scalar_g, a, b, xtol=1e-14 * max(1.0, b), rtol=1e-13)
                if root > cur:
                    partial.append(partial[-1] + lobe(cur, root))
                    cur = root
                    segments += 1
                    found = True
                    accel.append(wynn_epsilon(partial[-window:]))
                    if converged():
                        return _osc_result(accel, head, segments)
            last_sign_idx = idx
        if not found:
            end = xs[-1]
            partial.append(partial[-1] + lobe(cur, end))
            cur = end
            segments += 1
            h *= 2.0
            accel.append(wynn_epsilon(partial[-window:]))
            if converged():
                return _osc_result(accel, head, segments)
    raise ConvergenceError(
        f"oscillatory integral did not settle within {max_segments} segments"
    )


def _osc_result(accel, head, segments):
    err = max(abs(accel[-1] - accel[-2]), abs(accel[-2] - accel[-3])) + abs(head)
    return OscillatoryResult(accel[-1], err, segments)
