"""
Numerical tests of complete monotonicity.

The engine only ever proves a negative.  ``cm_grid_check`` looks for a sign
violation of ``(-1)^k f^(k)(x)`` on a grid; the other checks test inequalities
that every completely monotone function satisfies (log-convexity, Schur
convexity of derivative products, monotone derivative ratios, convexity
inequalities).  A violation is recorded as a :class:`Witness` that can be
re-evaluated on its own with :func:`recheck_witness`.  When nothing fails the
verdict is ``"consistent"``, which means "no counterexample found" and
nothing more.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import expr as ex
from .errors import CMError, ConstraintError, DivergenceError, DomainError, NonFiniteError
from .errors import NotComparableError
from .quadrature import integrate_halfline

_EPS = np.finfo(float).eps

CM_SLACK = 1e-12
INEQ_TOL = 1e-12
RATIO_TOL = 1e-10
LEVY_TOL = 1e-8

NON_CONCLUSIVE = (
    "'consistent' means no violation was found at the points examined; "
    "it is not a proof of complete monotonicity"
)


def _as_f(f):
    return ex.parse(f) if isinstance(f, str) else ex.as_expr(f)


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid on ``[x_min, x_max]``.

    ``jitter`` moves each interior point by up to that fraction of the local
    spacing; it only has an effect when a random generator is supplied, so a
    fixed seed reproduces the same grid.
    """

    x_min: float = 0.05
    x_max: float = 50.0
    points: int = 64
    spacing: str = "log"
    jitter: float = 0.0

    def __post_init__(self):
        if not (0 < self.x_min < self.x_max):
            raise ConstraintError("grid needs 0 < x_min < x_max")
        if self.points < 2:
            raise ConstraintError("grid needs at least 2 points")
        if self.spacing not in ("log", "linear"):
            raise ConstraintError("spacing must be 'log' or 'linear'")
        if not 0 <= self.jitter < 0.5:
            raise ConstraintError("jitter must lie in [0, 0.5)")

    def values(self, rng=None):
        if self.spacing == "log":
            u = np.linspace(math.log(self.x_min), math.log(self.x_max), self.points)
        else:
            u = np.linspace(self.x_min, self.x_max, self.points)
        if rng is not None and self.jitter > 0 and self.points > 2:
            step = u[1] - u[0]
            u[1:-1] += rng.uniform(-self.jitter, self.jitter, self.points - 2) * step
        xs = np.exp(u) if self.spacing == "log" else u
        xs[0], xs[-1] = self.x_min, self.x_max
        return xs

    @classmethod
    def parse(cls, text):
        """Read ``min:max:n:log|lin``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ConstraintError(f"grid must look like min:max:n:log|lin, got {text!r}")
        spacing = {"log": "log", "lin": "linear", "linear": "linear"}.get(parts[3])
        if spacing is None:
            raise ConstraintError(f"unknown grid spacing {parts[3]!r}")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]), spacing)
        except ValueError as exc:
            raise ConstraintError(f"bad grid {text!r}: {exc}") from None


DEFAULT_GRID = GridSpec()
DEFAULT_ORDER = 10


def _grid_points(grid, rng=None):
    if grid is None:
        grid = DEFAULT_GRID
    if isinstance(grid, GridSpec):
        return grid.values(rng)
    return np.asarray(grid, dtype=float)


# ---------------------------------------------------------------------------
# report types


def _tuplify(v):
    if isinstance(v, (list, tuple)):
        return tuple(_tuplify(u) for u in v)
    return v


def _listify(v):
    if isinstance(v, (list, tuple)):
        return [_listify(u) for u in v]
    return v


@dataclass(frozen=True)
class Witness:
    """A violated inequality ``lhs <relation> rhs`` (tolerance ``tol``) at ``point``.

    ``condition`` selects the evaluator used by :func:`recheck_witness`;
    ``label`` carries its discrete parameters (a derivative order, a pair of
    index vectors, ...).
    """

    condition: str
    label: object
    point: object
    lhs: float
    rhs: float
    relation: str
    tol: float

    def to_dict(self):
        return {
            "condition": self.condition,
            "label": _listify(self.label),
            "point": _listify(self.point),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["condition"], _tuplify(d["label"]), _tuplify(d["point"]),
                   d["lhs"], d["rhs"], d["relation"], d["tol"])


def violates(lhs, rhs, relation, tol):
    """True when ``lhs <relation> rhs`` fails by more than ``tol``."""
    if relation == "<=":
        return not lhs <= rhs + tol
    if relation == ">=":
        return not lhs >= rhs - tol
    if relation == ">":
        return not lhs > rhs
    raise ValueError(f"unknown relation {relation!r}")


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of one family of checks: ``status`` is pass, fail or skipped."""

    name: str
    status: str
    witnesses: tuple = ()
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"


@dataclass(frozen=True)
class CMReport:
    verdict: str
    order_checked: int
    grid: tuple
    witnesses: tuple
    condition_results: dict
    note: str = NON_CONCLUSIVE

    @property
    def refuted(self):
        return self.verdict == "refuted"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "order": self.order_checked,
            "grid": list(self.grid),
            "witnesses": [w.to_dict() for w in self.witnesses],
            "conditions": dict(self.condition_results),
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            verdict=d["verdict"],
            order_checked=d["order"],
            grid=tuple(d["grid"]),
            witnesses=tuple(Witness.from_dict(w) for w in d["witnesses"]),
            condition_results=dict(d["conditions"]),
            note=d.get("note", NON_CONCLUSIVE),
        )


def _report(results, order, xs):
    witnesses = tuple(w for r in results for w in r.witnesses)
    return CMReport(
        verdict="refuted" if witnesses else "consistent",
        order_checked=order,
        grid=tuple(float(x) for x in xs),
        witnesses=witnesses,
        condition_results={r.name: r.status for r in results},
    )


def _result(name, witnesses, **detail):
    return ConditionResult(name, "fail" if witnesses else "pass", tuple(witnesses), detail)


# ---------------------------------------------------------------------------
# pointwise evaluators; each returns (lhs, rhs, relation, tol)


def _derivs(f, x, k):
    try:
        return ex.jet_eval(f, x, k).coeffs
    except CMError as exc:
        if isinstance(exc, (DomainError, NonFiniteError)):
            raise type(exc)(f"{exc} (at x = {x!r})") from exc
        raise


def _value(f, x):
    """``f(x)``, with ``x = 0`` read as the one-sided limit ``f(0+)``."""
    if x == 0:
        lim = limit_at_zero(f)
        return lim.value if lim.finite else math.inf
    return ex.evaluate(f, float(x))


def _ev_cm(f, k, x):
    c = (-1) ** k * _derivs(f, x, k)[k]
    return c, 0.0, ">=", CM_SLACK * (1 + abs(c))


def _ev_positivity(f, _label, x):
    return ex.evaluate(f, x), 0.0, ">", 0.0


def _ev_log_convexity(f, _label, x):
    d = _derivs(f, x, 2)
    lf = _derivs(ex.log(f), x, 2)[2]
    scale = 1 + abs(d[2] / d[0]) + (d[1] / d[0]) ** 2
    return lf, 0.0, ">=", CM_SLACK * scale


def _ev_fink(f, label, x):
    m, n = label
    d = _derivs(f, x, max(max(m), max(n)))
    um = math.prod((-1) ** k * d[k] for k in m)
    un = math.prod((-1) ** k * d[k] for k in n)
    return um, un, "<=", INEQ_TOL * max(abs(um), abs(un))


def _ratio(f, k, j, x):
    d = _derivs(f, x, k + j)
    if abs(d[k]) < 1e-300:
        raise DomainError(f"derivative of order {k} vanishes at x = {x!r}")
    return abs(d[k + j] / d[k])


def _ev_ratio(f, label, point):
    k, j = label
    x1, x2 = point
    r1, r2 = _ratio(f, k, j, x1), _ratio(f, k, j, x2)
    return r2, r1, "<=", RATIO_TOL * r1


def _ev_supad(f, label, point):
    x, y, eps = point
    kind, side = label
    combine = (lambda a, b: a + b) if kind == "sum" else (lambda a, b: a * b)
    left = combine(_value(f, x), _value(f, y))
    mid = combine(_value(f, x - eps), _value(f, y + eps))
    if side == "left":
        return left, mid, "<=", INEQ_TOL * max(abs(left), abs(mid))
    lim = limit_at_zero(f)
    if not lim.finite:
        return mid, math.inf, "<=", 0.0
    right = combine(lim.value, _value(f, x + y))
    slack = lim.uncertainty * (1.0 if kind == "sum" else abs(_value(f, x + y)))
    return mid, right, "<=", INEQ_TOL * max(abs(mid), abs(right)) + slack


def _ev_conc(f, label, point):
    x, y, eps = point
    fx, fy = ex.evaluate(f, x), ex.evaluate(f, y)
    slope = (fy - fx) / (y - x)
    cond = 8 * _EPS * (abs(fx) + abs(fy)) / (y - x)
    if label == "conc1_left":
        avg = 0.5 * (_derivs(f, x, 1)[1] + _derivs(f, y, 1)[1])
        return avg, slope, "<=", INEQ_TOL * max(abs(avg), abs(slope)) + cond
    if label == "conc1_right":
        mid = _derivs(f, 0.5 * (x + y), 1)[1]
        return slope, mid, "<=", INEQ_TOL * max(abs(mid), abs(slope)) + cond
    ga, gb = ex.evaluate(f, x + eps), ex.evaluate(f, y - eps)
    inner = (gb - ga) / (y - x - 2 * eps)
    cond += 8 * _EPS * (abs(ga) + abs(gb)) / (y - x - 2 * eps)
    return slope, inner, "<=", INEQ_TOL * max(abs(inner), abs(slope)) + cond


def _ev_sconv(f, label, point):
    xv, yv = point
    fx = [_value(f, v) for v in xv]
    fy = [_value(f, v) for v in yv]
    if label == "sum":
        lhs, rhs = math.fsum(fx), math.fsum(fy)
    else:
        lhs, rhs = math.prod(fx), math.prod(fy)
    if math.isinf(rhs):
        return lhs, rhs, "<=", 0.0
    return lhs, rhs, "<=", INEQ_TOL * max(abs(lhs), abs(rhs))


def _ev_nonneg(f, _label, x):
    v = ex.evaluate(f, x)
    return v, 0.0, ">=", CM_SLACK * (1 + abs(v))


def _ev_shifted_cm(f, k, x):
    # k-th derivative of f' carries the sign (-1)^k
    c = (-1) ** k * _derivs(f, x, k + 1)[k + 1]
    return c, 0.0, ">=", CM_SLACK * (1 + abs(c))


def _ev_id(f, k, x):
    return _ev_shifted_cm(-ex.log(f), k, x)


_EVALUATORS = {
    "cm": _ev_cm,
    "positivity": _ev_positivity,
    "log_convexity": _ev_log_convexity,
    "fink": _ev_fink,
    "ratio": _ev_ratio,
    "supad": _ev_supad,
    "conc": _ev_conc,
    "sconv": _ev_sconv,
    "bernstein_nonneg": _ev_nonneg,
    "bernstein_cm": _ev_shifted_cm,
    "id_cm": _ev_id,
}


def _witness(condition, f, label, point):
    """Evaluate a condition; return a Witness when it is violated, else None."""
    lhs, rhs, relation, tol = _EVALUATORS[condition](f, label, point)
    if violates(lhs, rhs, relation, tol):
        return Witness(condition, label, point, float(lhs), float(rhs), relation, float(tol))
    return None


def recheck_witness(f, witness):
    """Re-evaluate a witness from scratch.

    Returns ``(lhs, rhs, violated)``.  For witnesses coming from
    :func:`compose_cm_check`, pass the composed expression as ``f``.
    """
    f = _as_f(f)
    lhs, rhs, relation, tol = _EVALUATORS[witness.condition](f, witness.label, witness.point)
    return lhs, rhs, violates(lhs, rhs, relation, tol)


# ---------------------------------------------------------------------------
# limit at zero


@dataclass(frozen=True)
class LimitEstimate:
    """Estimate of ``f(0+)``; ``finite`` is False when the limit looks infinite."""

    value: float
    finite: bool
    uncertainty: float


def limit_at_zero(f, near=1e-7, far=1e-6):
    """Estimate ``f(0+)`` from values at ``near`` and ``far``.

    If either value overflows or fails to evaluate, or ``|f|`` grows by more
    than 10 percent from ``far`` to ``near``, the limit is reported as not
    finite.  Otherwise the estimate extrapolates the secant through both
    points to 0.
    """
    f = _as_f(f)
    try:
        a, b = ex.evaluate(f, near), ex.evaluate(f, far)
    except (DomainError, NonFiniteError):
        return LimitEstimate(math.inf, False, math.inf)
    if abs(a) - abs(b) > 0.1 * max(abs(a), abs(b)):
        return LimitEstimate(math.inf, False, math.inf)
    slope = (b - a) / (far - near)
    value = a - near * slope
    return LimitEstimate(value, True, abs(a - value) + 4 * _EPS * abs(a))


# ---------------------------------------------------------------------------
# checks


def _cm_scan(f, xs, K, shift, condition):
    witnesses, boundary = [], 0
    for x in xs:
        x = float(x)
        d = _derivs(f, x, K + shift)
        for k in range(K + 1):
            c = (-1) ** k * d[k + shift]
            slack = CM_SLACK * (1 + abs(c))
            if c < -slack:
                w = _witness(condition, f, k, x)
                if w is not None:
                    witnesses.append(w)
            elif c <= 0:
                boundary += 1
    return witnesses, boundary


def cm_grid_check(f, grid=None, K=DEFAULT_ORDER, rng=None):
    """Test ``(-1)^k f^(k)(x) > 0`` for ``k <= K`` at every grid point.

    Values in ``(-slack, 0]`` with ``slack = 1e-12 (1 + |f^(k)(x)|)`` count as
    boundary cases rather than violations.

    Returns
    -------
    CMReport
        ``"refuted"`` with witnesses, or ``"consistent"`` (not a proof).
    """
    f = _as_f(f)
    xs = _grid_points(grid, rng)
    witnesses, boundary = _cm_scan(f, xs, K, 0, "cm")
    res = _result("cm", witnesses, boundary=boundary)
    return _report([res], K, xs)


def log_convexity_check(f, grid=None):
    """Test ``(log f)'' >= 0`` on the grid; ``f <= 0`` is reported as a k = 0 witness."""
    f = _as_f(f)
    witnesses = []
    for x in _grid_points(grid):
        x = float(x)
        w = _witness("positivity", f, None, x)
        if w is None:
            w = _witness("log_convexity", f, None, x)
        if w is not None:
            witnesses.append(w)
    return _result("log_convexity", witnesses)


def majorization_leq(x, y, tol=1e-12):
    """True when ``x`` is majorized by ``y``."""
    xs = np.sort(np.asarray(x, dtype=float))[::-1]
    ys = np.sort(np.asarray(y, dtype=float))[::-1]
    if xs.shape != ys.shape:
        raise ConstraintError("majorization compares vectors of equal dimension")
    cx, cy = np.cumsum(xs), np.cumsum(ys)
    slack = tol * max(1.0, float(np.max(np.abs(cy))) if cy.size else 1.0)
    if abs(cx[-1] - cy[-1]) > slack:
        return False
    return bool(np.all(cx[:-1] <= cy[:-1] + slack))


def _check_index_vectors(m, n):
    if len(m) != len(n):
        raise ConstraintError("index vectors must have the same dimension")
    if len(m) < 2:
        raise ConstraintError("index vectors need dimension at least 2")
    for v in (*m, *n):
        if int(v) != v or v < 0:
            raise ConstraintError("index vectors hold nonnegative integers")
    if not majorization_leq(m, n):
        raise NotComparableError(f"{tuple(m)} is not majorized by {tuple(n)}")


def fink_schur_check(f, x, m, n):
    """Test ``u_x(m) <= u_x(n)`` where ``u_x(m) = prod (-1)^m_i f^(m_i)(x)`` and ``m`` is majorized by ``n``."""
    f = _as_f(f)
    m, n = tuple(int(v) for v in m), tuple(int(v) for v in n)
    _check_index_vectors(m, n)
    w = _witness("fink", f, (m, n), float(x))
    return _result("fink", [w] if w else [])


def ratio_monotonicity_check(f, k, j, grid=None):
    """Test that ``|f^(k+j)/f^(k)|`` does not increase along the grid.

    Neighbouring pairs where ``f^(k)`` vanishes (often by underflow) are
    skipped and counted in ``detail["skipped_pairs"]``.
    """
    f = _as_f(f)
    xs = [float(x) for x in np.sort(_grid_points(grid))]
    witnesses, skipped = [], 0
    for a, b in zip(xs[:-1], xs[1:]):
        try:
            w = _witness("ratio", f, (int(k), int(j)), (a, b))
        except DomainError:
            skipped += 1
            continue
        if w is not None:
            witnesses.append(w)
    return _result("ratio", witnesses, k=k, j=j, skipped_pairs=skipped)


def _validate_940(x, y, eps):
    if not (0 <= eps < x < y):
        raise ConstraintError(f"sample needs 0 <= eps < x < y, got {(x, y, eps)}")


def inequality_suite_940(f, samples):
    """Convexity and log-convexity chains for sums and products of values.

    For each ``(x, y, eps)`` with ``0 <= eps < x < y``::

        f(x) + f(y) <= f(x - eps) + f(y + eps) <= f(0+) + f(x + y)
        f(x) f(y)   <= f(x - eps) f(y + eps)   <= f(0+) f(x + y)

    The right-hand inequalities hold trivially when ``f(0+)`` is infinite.
    """
    f = _as_f(f)
    witnesses = []
    for s in samples:
        point = tuple(float(v) for v in s)
        _validate_940(*point)
        for kind in ("sum", "product"):
            for side in ("left", "right"):
                w = _witness("supad", f, (kind, side), point)
                if w is not None:
                    witnesses.append(w)
    return _result("supad", witnesses, samples=len(samples))


def inequality_suite_146(f, samples):
    """Concavity of ``f'``, tested through divided differences.

    For ``x < y`` (swapped if needed)::

        (f'(x) + f'(y))/2 < (f(y) - f(x))/(y - x) < f'((x + y)/2)

    and, when ``0 < eps < (y - x)/2``, the slope over ``[x, y]`` is below the
    slope over ``[x + eps, y - eps]``.  The tolerance includes the rounding
    error of each divided difference.
    """
    f = _as_f(f)
    witnesses = []
    for s in samples:
        x, y = float(s[0]), float(s[1])
        eps = float(s[2]) if len(s) > 2 else 0.0
        if x > y:
            x, y = y, x
        if not (0 < x < y):
            raise ConstraintError(f"sample needs distinct positive x, y, got {tuple(s)}")
        if eps < 0 or (eps > 0 and not eps < (y - x) / 2):
            raise ConstraintError(f"sample needs 0 < eps < (y - x)/2, got {tuple(s)}")
        labels = ["conc1_left", "conc1_right"] + (["conc2"] if eps > 0 else [])
        for label in labels:
            w = _witness("conc", f, label, (x, y, eps))
            if w is not None:
                witnesses.append(w)
    return _result("conc", witnesses, samples=len(samples))


def schur_sum_product_check(f, x, y):
    """Test ``sum f(x_i) <= sum f(y_i)`` and ``prod f(x_i) <= prod f(y_i)`` for ``x`` majorized by ``y``.

    Zero entries use ``f(0+)``.
    """
    f = _as_f(f)
    xv, yv = tuple(float(v) for v in x), tuple(float(v) for v in y)
    if len(xv) != len(yv):
        raise ConstraintError("vectors must have the same dimension")
    if min(xv + yv) < 0:
        raise ConstraintError("entries must be nonnegative")
    if not majorization_leq(xv, yv):
        raise NotComparableError(f"{xv} is not majorized by {yv}")
    witnesses = []
    for label in ("sum", "product"):
        w = _witness("sconv", f, label, (xv, yv))
        if w is not None:
            witnesses.append(w)
    return _result("sconv", witnesses)


def bernstein_check(g, grid=None, K=DEFAULT_ORDER):
    """Test that ``g >= 0`` and that ``g'`` passes the CM grid test up to order ``K``."""
    g = _as_f(g)
    xs = _grid_points(grid)
    witnesses = []
    for x in xs:
        w = _witness("bernstein_nonneg", g, None, float(x))
        if w is not None:
            witnesses.append(w)
    cm_w, boundary = _cm_scan(g, xs, K, 1, "bernstein_cm")
    return _result("bernstein", witnesses + cm_w, boundary=boundary)


def id_laplace_check(f, grid=None, K=DEFAULT_ORDER):
    """Infinite-divisibility test: ``f > 0`` and ``(-log f)'`` CM up to order ``K - 1``.

    ``detail`` reports the estimate of ``g(0+) = -log f(0+)`` and whether the
    associated measure is a probability measure (``f(0+) = 1``).
    """
    f = _as_f(f)
    xs = _grid_points(grid)
    witnesses = []
    for x in xs:
        w = _witness("positivity", f, None, float(x))
        if w is not None:
            witnesses.append(w)
    if not witnesses:
        for x in xs:
            d = _derivs(-ex.log(f), float(x), K)
            for k in range(K):
                c = (-1) ** k * d[k + 1]
                if c < -CM_SLACK * (1 + abs(c)):
                    w = _witness("id_cm", f, k, float(x))
                    if w is not None:
                        witnesses.append(w)
    lim = limit_at_zero(f)
    g0 = -math.log(lim.value) if lim.finite and lim.value > 0 else None
    probability = bool(lim.finite and abs(lim.value - 1.0) <= 1e-6)
    return _result("id", witnesses, g0=g0, probability=probability)


def compose_cm_check(f, g, grid=None, K=DEFAULT_ORDER):
    """Check that ``f(g(x))`` is CM when ``f`` is CM and ``g`` is a positive Bernstein function.

    Premises and conclusion are reported separately in ``detail``.  When a
    premise fails the conclusion is not evaluated and the status is
    ``"skipped"``.  A failed conclusion with passing premises points at a
    numerical problem rather than at the functions.
    """
    f, g = _as_f(f), _as_f(g)
    xs = _grid_points(grid)
    composite = ex.substitute(f, g)
    bern = bernstein_check(g, xs, K)
    gvals = np.asarray(ex.evaluate(g, xs))
    premises = {"g_bernstein": bern.status, "g_positive": "pass" if np.all(gvals > 0) else "fail"}
    if premises["g_positive"] == "pass":
        f_report = cm_grid_check(f, np.unique(gvals), K)
        premises["f_cm"] = "fail" if f_report.refuted else "pass"
    detail = {"premises": premises, "expression": ex.to_text(composite)}
    if any(v != "pass" for v in premises.values()):
        detail["conclusion"] = "skipped"
        return ConditionResult("compose", "skipped", (), detail)
    conclusion = cm_grid_check(composite, xs, K)
    detail["conclusion"] = "fail" if conclusion.refuted else "pass"
    if conclusion.refuted:
        detail["note"] = "premises hold but the composition failed: numerical trouble"
    return ConditionResult("compose", "fail" if conclusion.refuted else "pass",
                           conclusion.witnesses, detail)


def levy_exponent(mu, x):
    """``int (1 - exp(-x t))/t dmu(t)``; an atom at 0 contributes ``mass * x``."""
    x = float(x)
    total = math.fsum(m * (x if loc == 0 else -math.expm1(-x * loc) / loc) for loc, m in mu.atoms)
    d = mu.effective_density
    if d is not None:
        upper = mu.support_hint if mu.support_hint is not None else math.inf

        def integrand(t):
            t = np.asarray(t, dtype=float)
            kern = np.where(t > 0, -np.expm1(-x * t) / np.where(t > 0, t, 1.0), x)
            return d(t) * kern

        total += integrate_halfline(integrand, rtol=1e-12, upper=upper, breaks=d.breaks).value
    return total


def levy_tail_integral(mu):
    """``int_[1, inf) dmu(t) / t``; raises :class:`DivergenceError` if infinite."""
    total = math.fsum(m / loc for loc, m in mu.atoms if loc >= 1)
    d = mu.effective_density
    if d is not None:
        upper = mu.support_hint if mu.support_hint is not None else math.inf
        if upper > 1:
            total += integrate_halfline(lambda t: d(t) / t, lower=1.0, rtol=1e-10,
                                        upper=upper, breaks=d.breaks).value
    return total


def levy_form_check(f, mu, xs):
    """Compare ``-log f(x)`` with ``int (1 - exp(-x t))/t dmu(t)`` and test ``int_1^inf dmu/t < inf``.

    ``mu`` is a :class:`Measure`.  Agreement is required within
    ``1e-8 (1 + |log f(x)|)``.
    """
    f = _as_f(f)
    rows = []
    failures = []
    for x in xs:
        x = float(x)
        lhs = -math.log(ex.evaluate(f, x))
        rhs = levy_exponent(mu, x)
        ok = abs(lhs - rhs) <= LEVY_TOL * (1 + abs(lhs))
        rows.append({"x": x, "minus_log_f": lhs, "integral": rhs, "ok": ok})
        if not ok:
            failures.append(x)
    try:
        tail = levy_tail_integral(mu)
        integrable = math.isfinite(tail)
    except DivergenceError:
        tail, integrable = math.inf, False
    status = "pass" if not failures and integrable else "fail"
    return ConditionResult("levy", status, (), {"rows": rows, "tail_integral": tail,
                                                 "integrable": integrable})


# ---------------------------------------------------------------------------
# random samples and the full suite


def random_majorization_pair(rng, dim, max_entry=4):
    """Integer vectors ``(m, n)`` of length ``dim`` with ``m`` majorized by ``n``.

    ``m`` comes from ``n`` through random transfers from a larger entry to a
    smaller one, which never leave the majorization order.
    """
    n = [int(v) for v in rng.integers(0, max_entry + 1, size=dim)]
    m = list(n)
    for _ in range(int(rng.integers(0, 2 * dim + 1))):
        i, j = rng.choice(dim, size=2, replace=False)
        if m[i] > m[j] + 1:
            m[i] -= 1
            m[j] += 1
    return tuple(m), tuple(n)


def random_real_majorization_pair(rng, dim, lo=0.1, hi=5.0):
    """Positive real vectors ``(x, y)`` with ``x`` majorized by ``y`` (x is a T-transform of y)."""
    y = rng.uniform(lo, hi, size=dim)
    x = y.copy()
    for _ in range(int(rng.integers(1, dim + 2))):
        i, j = rng.choice(dim, size=2, replace=False)
        lam = rng.uniform(0.0, 1.0)
        xi, xj = x[i], x[j]
        x[i] = lam * xi + (1 - lam) * xj
        x[j] = (1 - lam) * xi + lam * xj
    # keep the totals identical in floating point
    x[-1] = math.fsum(y) - math.fsum(x[:-1])
    return tuple(float(v) for v in x), tuple(float(v) for v in y)


def random_triples(rng, count, lo=0.1, hi=10.0):
    """Samples ``(x, y, eps)`` with ``0 <= eps < x < y`` and ``eps < (y - x)/2``."""
    out = []
    while len(out) < count:
        x, y = np.sort(np.exp(rng.uniform(math.log(lo), math.log(hi), size=2)))
        if not y > x:
            continue
        eps = rng.uniform(0.0, 0.9) * min(x, (y - x) / 2)
        out.append((float(x), float(y), float(eps)))
    return out


@dataclass(frozen=True)
class SuiteConfig:
    fink_pairs: int = 20
    fink_max_dim: int = 4
    fink_points: tuple = (0.5, 1.0, 2.0)
    samples: int = 50
    schur_pairs: int = 20
    ratio_orders: tuple = ((0, 1), (1, 1), (0, 2), (2, 1))
    sample_range: tuple = (0.1, 10.0)


def run_suite(f, grid=None, K=DEFAULT_ORDER, seed=0, config=SuiteConfig()):
    """The CM grid test followed by every necessary condition.

    Random samples (majorization pairs, inequality triples, grid jitter) are
    drawn from ``numpy.random.default_rng(seed)``, so a seed reproduces a run
    exactly.
    """
    f = _as_f(f)
    rng = np.random.default_rng(seed)
    xs = _grid_points(grid, rng)
    results = []
    cm_w, boundary = _cm_scan(f, xs, K, 0, "cm")
    results.append(_result("cm", cm_w, boundary=boundary))

    def guarded(name, thunk):
        # a necessary condition that cannot be evaluated is skipped, not failed
        try:
            results.append(thunk())
        except (DomainError, NonFiniteError) as exc:
            results.append(ConditionResult(name, "skipped", (), {"reason": str(exc)}))

    guarded("log_convexity", lambda: log_convexity_check(f, xs))

    fink_pairs = []
    for _ in range(config.fink_pairs):
        dim = int(rng.integers(2, config.fink_max_dim + 1))
        fink_pairs.append(random_majorization_pair(rng, dim))

    def fink():
        found = []
        for m, n in fink_pairs:
            for x in config.fink_points:
                found.extend(fink_schur_check(f, x, m, n).witnesses)
        return _result("fink", found, pairs=len(fink_pairs))

    guarded("fink", fink)

    def ratio():
        found, skipped = [], 0
        for k, j in config.ratio_orders:
            r = ratio_monotonicity_check(f, k, j, xs)
            found.extend(r.witnesses)
            skipped += r.detail["skipped_pairs"]
        return _result("ratio", found, skipped_pairs=skipped)

    guarded("ratio", ratio)

    lo, hi = config.sample_range
    triples = random_triples(rng, config.samples, lo, hi)
    guarded("supad", lambda: inequality_suite_940(f, triples))
    guarded("conc", lambda: inequality_suite_146(f, triples))

    schur_pairs = []
    for _ in range(config.schur_pairs):
        dim = int(rng.integers(2, config.fink_max_dim + 1))
        schur_pairs.append(random_real_majorization_pair(rng, dim, lo, hi / 2))

    def sconv():
        found = []
        for xv, yv in schur_pairs:
            found.extend(schur_sum_product_check(f, xv, yv).witnesses)
        return _result("sconv", found, pairs=len(schur_pairs))

    guarded("sconv", sconv)
    return _report(results, K, xs)


# necessary conditions named individually in reports
NECESSARY_CONDITIONS = ("log_convexity", "fink", "ratio", "supad", "conc", "sconv")

