"""
Distribution functions of representing measures by Fourier inversion.

If ``f`` is the Laplace transform of a finite measure ``mu`` on ``[0, inf)``
then ``phi(x) = f(-i x)`` is its characteristic function, and::

    (F(t) + F(t-)) / 2 = phi(0)/2 - (1/pi) int_0^inf Im(exp(-i t x) phi(x)) / x dx

with ``F(t) = mu([0, t])``.  The integral oscillates and decays slowly (like
``1/x`` when ``mu`` has atoms), so it is summed lobe by lobe and accelerated.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import expr as ex
from .cmtest import limit_at_zero
from .errors import ConstraintError, DomainError, NonFiniteError
from .quadrature import integrate, oscillatory_integral


@dataclass(frozen=True)
class InversionConfig:
    """Settings for :func:`gil_pelaez`.

    Attributes
    ----------
    upper_limit : float or None
        Truncate the oscillatory integral at this point instead of
        extrapolating to infinity.
    panels_per_period : int
        Samples per oscillation period used to locate sign changes.
    tol : float
        Target accuracy of each distribution value.
    x0 : float
        The integral over ``[0, x0]`` is replaced by a one-point estimate.
    """

    upper_limit: float = None
    panels_per_period: int = 8
    tol: float = 1e-6
    x0: float = 1e-8
    max_segments: int = 5000

    def __post_init__(self):
        if not self.tol > 0:
            raise ConstraintError("tol must be positive")
        if self.panels_per_period < 4:
            raise ConstraintError("panels_per_period must be at least 4")
        if self.upper_limit is not None and not self.upper_limit > self.x0:
            raise ConstraintError("upper_limit must exceed x0")


@dataclass(frozen=True)
class DistributionEstimate:
    """Values of ``F(t) = mu([0, t])`` with error estimates.

    ``points`` holds ``(t, F, error)`` rows in the order requested.  ``clamped``
    lists the t values whose raw estimate fell outside ``[-tol, phi0 + tol]``
    and ``nonmonotone`` the t values where F dropped by more than ``2 tol``
    from its predecessor.
    """

    points: tuple
    phi0: float
    tol: float
    clamped: tuple = ()
    nonmonotone: tuple = ()
    raw: tuple = field(default=(), repr=False)

    def values(self):
        return np.array([p[1] for p in self.points])

    def to_dict(self):
        return {
            "points": [{"t": t, "F": v, "error": e} for t, v, e in self.points],
            "phi0": self.phi0,
            "tol": self.tol,
            "clamped": list(self.clamped),
            "nonmonotone": list(self.nonmonotone),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            points=tuple((p["t"], p["F"], p["error"]) for p in d["points"]),
            phi0=d["phi0"],
            tol=d["tol"],
            clamped=tuple(d["clamped"]),
            nonmonotone=tuple(d["nonmonotone"]),
        )


def _phase_rate(phi, span=40.0, samples=4001):
    """Largest rate of change of ``arg phi`` on ``[0, span]``."""
    xs = np.linspace(1e-6, span, samples)
    vals = np.asarray(phi(xs), dtype=complex)
    mags = np.abs(vals)
    keep = mags > 1e-300
    if keep.sum() < 2:
        return 0.0
    phase = np.unwrap(np.angle(vals[keep]))
    rate = np.abs(np.diff(phase) / np.diff(xs[keep]))
    return float(np.max(rate)) if rate.size else 0.0


def gil_pelaez(phi, phi0, t, cfg=InversionConfig()):
    """Estimate ``(F(t) + F(t-))/2`` from the characteristic function ``phi``.

    Parameters
    ----------
    phi : callable
        Maps an array of ``x > 0`` to complex values ``phi(x)``.
    phi0 : float
        ``phi(0)``, the total mass; must be finite.
    t : float
    cfg : InversionConfig

    Returns
    -------
    (value, error_estimate)

    Raises
    ------
    NonFiniteError
        If ``phi`` returns a non-finite sample.
    ConvergenceError
        If the accelerated lobe sums do not settle within the segment budget.
    """
    if not math.isfinite(phi0):
        raise ConstraintError("phi(0) must be finite")
    t = float(t)

    def g(x):
        x = np.asarray(x, dtype=float)
        v = np.asarray(phi(x), dtype=complex)
        if not np.all(np.isfinite(v)):
            raise NonFiniteError("characteristic function sample is not finite")
        return np.imag(np.exp(-1j * t * x) * v) / x

    def noise(x):
        return 1e-13 * np.abs(np.asarray(phi(x), dtype=complex)) / x

    omega = max(1.0, abs(t) + _phase_rate(phi))
    if cfg.upper_limit is not None:
        step = math.pi / omega
        pts = np.concatenate([[cfg.x0], np.arange(cfg.x0 + step, cfg.upper_limit, step),
                              [cfg.upper_limit]])
        r = integrate(g, pts, atol=cfg.tol * 1e-2, rtol=1e-12, limit=20 * len(pts) + 400)
        head = cfg.x0 * float(g(np.array([cfg.x0]))[0])
        integral, err = r.value + head, r.error + abs(head)
    else:
        r = oscillatory_integral(g, omega=omega, x0=cfg.x0, tol=cfg.tol,
                                 samples_per_period=cfg.panels_per_period,
                                 max_segments=cfg.max_segments, noise=noise)
        integral, err = r.value, r.error
    return phi0 / 2 - integral / math.pi, err / math.pi


def characteristic_function(f):
    """``x -> f(-i x)`` through the principal-branch complex evaluator."""
    f = ex.parse(f) if isinstance(f, str) else f

    def phi(x):
        return ex.eval_complex(f, -1j * np.asarray(x, dtype=float))

    return phi


def total_mass_of(f):
    """``f(0)``, or ``f(0+)`` when ``f`` is not defined at 0.

    Raises
    ------
    ConstraintError
        If the limit looks infinite.
    """
    f = ex.parse(f) if isinstance(f, str) else f
    try:
        return ex.evaluate(f, 0.0)
    except (DomainError, NonFiniteError):
        pass
    lim = limit_at_zero(f)
    if not lim.finite:
        raise ConstraintError("f(0+) is infinite or undetermined; the measure is not finite")
    return lim.value


def invert_cm(f, t_grid, cfg=InversionConfig()):
    """Distribution function of the measure whose Laplace transform is ``f``.

    ``f`` must use only constructs with a complex extension (arithmetic,
    powers, exp, log); complete monotonicity of ``f`` is assumed, not checked.

    Raises
    ------
    UnsupportedNodeError
        If ``f`` contains a node without a complex extension.
    ConstraintError
        If ``f(0+)`` is not finite.
    """
    f = ex.parse(f) if isinstance(f, str) else f
    phi = characteristic_function(f)
    phi(np.array([1.0]))  # surface unsupported nodes before any work
    phi0 = total_mass_of(f)
    tol = cfg.tol
    rows, raw, clamped, nonmono = [], [], [], []
    prev = None
    for t in t_grid:
        t = float(t)
        v, e = gil_pelaez(phi, phi0, t, cfg)
        raw.append(v)
        c = min(max(v, -tol), phi0 + tol)
        if c != v:
            clamped.append(t)
        if prev is not None and c < prev - 2 * tol:
            nonmono.append(t)
        prev = c
        rows.append((t, c, e))
    return DistributionEstimate(tuple(rows), phi0, tol, tuple(clamped), tuple(nonmono), tuple(raw))


def sign_integral(a, tol=1e-8):
    """``int_0^inf sin(a x)/x dx`` by the same lobe summation used for inversion."""
    a = float(a)

    def g(x):
        return np.sin(a * x) / x

    return oscillatory_integral(g, omega=max(abs(a), 1e-3), tol=tol).value
