"""
Measures on [0, inf) made of point masses plus a (possibly signed) density.

A ``Measure`` is immutable.  When ``support_hint`` is set the density is
treated as zero beyond it; that is how finitely supported densities such as
Lebesgue measure on [0, 1] are written.

Densities are small callable objects.  ``ExprDensity`` wraps an expression in
the variable ``t`` and is the only kind that serializes to JSON; the others
(tabulated, shifted, scaled, summed) appear as results of the measure algebra.
"""

from dataclasses import dataclass
import json
import math

import numpy as np
from scipy.interpolate import CubicSpline

from . import expr as ex
from .errors import ConstraintError, DivergenceError
from .quadrature import integrate, integrate_halfline


class Density:
    """Callable ``t -> value`` on arrays; ``breaks`` lists kinks or jumps."""

    breaks = ()

    def __call__(self, t):
        raise NotImplementedError

    def describe(self):
        return type(self).__name__


class ExprDensity(Density):
    def __init__(self, expression):
        self.expression = ex.as_expr(expression)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(ex.evaluate(self.expression, t), t.shape).astype(float)

    def text(self):
        return ex.to_text(self.expression, var="t")

    def describe(self):
        return self.text()

    def __eq__(self, other):
        return isinstance(other, ExprDensity) and other.expression == self.expression

    def __hash__(self):
        return hash(self.expression)


class FunctionDensity(Density):
    """Wraps an arbitrary vectorized callable."""

    def __init__(self, func, label="function", breaks=()):
        self.func = func
        self.label = label
        self.breaks = tuple(breaks)

    def __call__(self, t):
        return np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float)

    def describe(self):
        return self.label


class TruncatedDensity(Density):
    """``base(t)`` on ``[0, upper]`` and zero beyond."""

    def __init__(self, base, upper):
        self.base = base
        self.upper = float(upper)
        self.breaks = tuple(b for b in base.breaks if b < self.upper) + (self.upper,)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        inside = t <= self.upper
        if np.any(inside):
            out[inside] = self.base(t[inside])
        return out

    def describe(self):
        return f"{self.base.describe()} on [0, {self.upper:g}]"


class ShiftedDensity(Density):
    """``base(t - shift)`` for ``t >= shift`` and zero before."""

    def __init__(self, base, shift):
        self.base = base
        self.shift = float(shift)
        self.breaks = (self.shift,) + tuple(b + self.shift for b in base.breaks)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        right = t > self.shift
        if np.any(right):
            out[right] = self.base(t[right] - self.shift)
        return out

    def describe(self):
        return f"{self.base.describe()} shifted by {self.shift:g}"


class ScaledDensity(Density):
    def __init__(self, base, factor):
        self.base = base
        self.factor = float(factor)
        self.breaks = base.breaks

    def __call__(self, t):
        return self.factor * self.base(t)

    def describe(self):
        return f"{self.factor:g} * ({self.base.describe()})"


class SumDensity(Density):
    def __init__(self, parts):
        self.parts = tuple(parts)
        self.breaks = tuple(sorted({b for p in self.parts for b in p.breaks}))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        for p in self.parts:
            out = out + p(t)
        return out

    def describe(self):
        return " + ".join(f"({p.describe()})" for p in self.parts)


class TabulatedDensity(Density):
    """Cubic spline (not-a-knot) through sampled values; zero outside the grid."""

    def __init__(self, grid, values):
        self.grid = np.asarray(grid, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self._interp = CubicSpline(self.grid, self.values, extrapolate=False)
        self.breaks = (float(self.grid[-1]),)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self._interp(t)
        return np.nan_to_num(out, nan=0.0)

    def describe(self):
        return f"tabulated on {len(self.grid)} points up to {self.grid[-1]:g}"


class TransformDensity(Density):
    """``u -> int exp(-s u) dmu(s)``; the value at ``u = 0`` is the total mass."""

    def __init__(self, mu, tol=1e-11):
        self.mu = mu
        self.tol = tol

    def __call__(self, u):
        from .laplace import transform

        u = np.asarray(u, dtype=float)
        out = np.empty(u.shape)
        for idx, val in np.ndenumerate(u):
            out[idx] = total_mass(self.mu) if val == 0 else transform(self.mu, val, tol=self.tol)
        return out

    def describe(self):
        return "Laplace transform of a measure"


def as_density(d):
    if d is None or isinstance(d, Density):
        return d
    if isinstance(d, ex.Expr):
        return ExprDensity(d)
    if isinstance(d, str):
        return ExprDensity(ex.parse(d, var="t"))
    if callable(d):
        return FunctionDensity(d)
    raise TypeError(f"cannot interpret {d!r} as a density")


@dataclass(frozen=True)
class Measure:
    """Point masses plus an optional density on [0, inf).

    Attributes
    ----------
    atoms : tuple of (location, mass)
        Sorted by location; locations distinct and >= 0, masses > 0.
    density : Density or None
        Signed densities are allowed, so the same type can describe candidate
        representations that turn out not to be positive.
    support_hint : float or None
        The density is taken to vanish beyond this point.
    """

    atoms: tuple = ()
    density: Density = None
    support_hint: float = None

    def __post_init__(self):
        merged = {}
        for loc, mass in self.atoms:
            loc, mass = float(loc), float(mass)
            if not loc >= 0 or not math.isfinite(loc):
                raise ConstraintError(f"atom location must be >= 0, got {loc}")
            if not mass > 0 or not math.isfinite(mass):
                raise ConstraintError(f"atom mass must be > 0, got {mass}")
            merged[loc] = merged.get(loc, 0.0) + mass
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))
        object.__setattr__(self, "density", as_density(self.density))
        if self.support_hint is not None:
            s = float(self.support_hint)
            if not s > 0:
                raise ConstraintError("support_hint must be positive")
            object.__setattr__(self, "support_hint", s)

    @property
    def effective_density(self):
        """The density with the support truncation applied, or None."""
        if self.density is None:
            return None
        if self.support_hint is None:
            return self.density
        return TruncatedDensity(self.density, self.support_hint)

    def mass_at_zero(self):
        return sum(m for loc, m in self.atoms if loc == 0.0)


def dirac(location, mass=1.0):
    return Measure(atoms=((location, mass),))


def lebesgue(upper):
    """Lebesgue measure restricted to [0, upper]."""
    return Measure(density=ex.Const(1.0), support_hint=upper)


# ---------------------------------------------------------------------------
# algebra


def scale(mu, a):
    """The measure ``a * mu`` for ``a > 0``."""
    a = float(a)
    if not a > 0:
        raise ConstraintError("scale factor must be positive")
    density = mu.density
    if isinstance(density, ExprDensity):
        density = ExprDensity(ex.Mul(ex.Const(a), density.expression))
    elif density is not None:
        density = ScaledDensity(density, a)
    return Measure(
        atoms=tuple((loc, a * m) for loc, m in mu.atoms),
        density=density,
        support_hint=mu.support_hint,
    )


def add(mu, nu):
    """The measure ``mu + nu``; coinciding atoms merge."""
    atoms = mu.atoms + nu.atoms
    d1, d2 = mu.density, nu.density
    if d1 is None or d2 is None:
        if d1 is None and d2 is None:
            return Measure(atoms=atoms)
        src = mu if d2 is None else nu
        return Measure(atoms=atoms, density=src.density, support_hint=src.support_hint)
    if mu.support_hint == nu.support_hint:
        if isinstance(d1, ExprDensity) and isinstance(d2, ExprDensity):
            density = ExprDensity(ex.Add(d1.expression, d2.expression))
        else:
            density = SumDensity((d1, d2))
        return Measure(atoms=atoms, density=density, support_hint=mu.support_hint)
    support = None
    if mu.support_hint is not None and nu.support_hint is not None:
        support = max(mu.support_hint, nu.support_hint)
    density = SumDensity((mu.effective_density, nu.effective_density))
    return Measure(atoms=atoms, density=density, support_hint=support)


def convolve(mu, nu, points=512, rtol=1e-11):
    """Convolution ``mu * nu``.

    Atom pairs give atoms, atom/density pairs give shifted densities, and a
    density/density pair is sampled on ``points`` log-spaced nodes (plus the
    origin) up to the sum of the support hints and stored as a cubic spline.

    Raises
    ------
    ConstraintError
        If two densities meet and either lacks a ``support_hint``.
    """
    atoms = {}
    for l1, m1 in mu.atoms:
        for l2, m2 in nu.atoms:
            atoms[l1 + l2] = atoms.get(l1 + l2, 0.0) + m1 * m2

    pieces = []  # (density, support or None)
    for atoms_side, other in ((mu.atoms, nu), (nu.atoms, mu)):
        if other.density is None:
            continue
        for loc, mass in atoms_side:
            base = other.effective_density
            if loc == 0.0 and isinstance(base, ExprDensity):
                piece = ExprDensity(ex.Mul(ex.Const(mass), base.expression))
            elif loc == 0.0:
                piece = ScaledDensity(base, mass)
            else:
                piece = ShiftedDensity(ScaledDensity(base, mass), loc)
            support = None if other.support_hint is None else loc + other.support_hint
            pieces.append((piece, support))

    if mu.density is not None and nu.density is not None:
        if mu.support_hint is None or nu.support_hint is None:
            raise ConstraintError(
                "density-density convolution needs a support_hint on both measures"
            )
        pieces.append(
            (_tabulate_convolution(mu, nu, points, rtol), mu.support_hint + nu.support_hint)
        )

    if not pieces:
        return Measure(atoms=tuple(atoms.items()))
    if any(s is None for _, s in pieces):
        support = None
    else:
        support = max(s for _, s in pieces)
    if len(pieces) == 1:
        density = pieces[0][0]
    elif all(isinstance(p, ExprDensity) for p, _ in pieces) and len({s for _, s in pieces}) == 1:
        e = pieces[0][0].expression
        for p, _ in pieces[1:]:
            e = ex.Add(e, p.expression)
        density = ExprDensity(e)
    else:
        density = SumDensity(tuple(p for p, _ in pieces))
    return Measure(atoms=tuple(atoms.items()), density=density, support_hint=support)


def _tabulate_convolution(mu, nu, points, rtol):
    d1, d2 = mu.effective_density, nu.effective_density
    s1, s2 = mu.support_hint, nu.support_hint
    total = s1 + s2
    grid = np.concatenate([[0.0], np.geomspace(total * 1e-6, total, points - 1)])
    values = np.zeros_like(grid)
    for i, t in enumerate(grid):
        lo, hi = max(0.0, t - s1), min(t, s2)
        if hi <= lo:
            continue
        brk = [lo] + sorted({b for b in d2.breaks if lo < b < hi}
                            | {t - b for b in d1.breaks if lo < t - b < hi}) + [hi]
        # split at the midpoint so singularities at both ends get log panels
        brk.append(0.5 * (lo + hi))
        width = hi - lo
        for ratio in (1e-12, 1e-9, 1e-6, 1e-3):
            brk.extend([lo + ratio * width, hi - ratio * width])
        brk = sorted(set(brk))

        def integrand(u, t=t):
            return d1(t - u) * d2(u)

        values[i] = integrate(integrand, brk, rtol=rtol, limit=2000).value
    return TabulatedDensity(grid, values)


def stieltjes_to_laplace(mu, tol=1e-11):
    """Measure ``nu`` with density ``u -> int exp(-s u) dmu(s)``.

    The Stieltjes transform ``int dmu(s) / (x + s)`` of ``mu`` equals the Laplace
    transform of ``nu``.

    Raises
    ------
    DivergenceError
        If ``int dmu(s) / (1 + s)`` diverges.
    """
    d = mu.effective_density
    if d is not None:
        try:
            integrate_halfline(lambda s: d(s) / (1.0 + s), rtol=1e-8,
                               upper=mu.support_hint or math.inf, breaks=d.breaks)
        except DivergenceError as exc:
            raise DivergenceError(
                "the Stieltjes integrability condition int dmu(s)/(1+s) < inf fails"
            ) from exc
        return Measure(density=TransformDensity(mu, tol=tol))
    if not mu.atoms:
        return Measure()
    terms = None
    for loc, mass in mu.atoms:
        term = ex.Mul(ex.Const(mass), ex.exp(ex.Mul(ex.Const(-loc), ex.X))) if loc else ex.Const(mass)
        terms = term if terms is None else ex.Add(terms, term)
    return Measure(density=ExprDensity(terms))


# ---------------------------------------------------------------------------
# queries


def total_mass(mu, rtol=1e-10):
    """``mu([0, inf))``; raises :class:`DivergenceError` for infinite mass."""
    mass = sum(m for _, m in mu.atoms)
    d = mu.effective_density
    if d is not None:
        upper = mu.support_hint if mu.support_hint is not None else math.inf
        mass += integrate_halfline(d, rtol=rtol, upper=upper, breaks=d.breaks).value
    return mass


def cumulative(mu, t, rtol=1e-10):
    """Distribution function ``mu([0, t])``."""
    t = float(t)
    if t < 0:
        return 0.0
    mass = sum(m for loc, m in mu.atoms if loc <= t)
    d = mu.effective_density
    if d is not None and t > 0:
        upper = t if mu.support_hint is None else min(t, mu.support_hint)
        mass += integrate_halfline(d, scale=min(1.0, upper), rtol=rtol, upper=upper,
                                   breaks=d.breaks).value
    return mass


def is_positive(mu, grid):
    """True when the density is nonnegative on ``grid`` (atoms are positive by construction)."""
    d = mu.effective_density
    if d is None:
        return True
    return bool(np.all(d(np.asarray(grid, dtype=float)) >= 0))


# ---------------------------------------------------------------------------
# JSON


def to_dict(mu):
    d = mu.density
    if d is not None and not isinstance(d, ExprDensity):
        raise ConstraintError(f"density {d.describe()!r} has no expression form")
    return {
        "atoms": [{"t": loc, "mass": m} for loc, m in mu.atoms],
        "density": None if d is None else d.text(),
        "support_hint": mu.support_hint,
    }


def from_dict(data):
    atoms = tuple((a["t"], a["mass"]) for a in data.get("atoms", []))
    dens = data.get("density")
    density = None if dens is None else ExprDensity(ex.parse(dens, var="t"))
    return Measure(atoms=atoms, density=density, support_hint=data.get("support_hint"))


def to_json(mu, **kwargs):
    return json.dumps(to_dict(mu), **kwargs)


def from_json(text):
    return from_dict(json.loads(text))
