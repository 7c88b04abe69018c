"""
cmkit: numerical tools for completely monotone functions.

A function is completely monotone (CM) on ``(0, inf)`` when
``(-1)^k f^(k)(x) >= 0`` for every ``k``; equivalently it is the Laplace
transform of a positive measure on ``[0, inf)``.  The package provides

* expression trees with exact-up-to-roundoff derivative jets (``expr``),
* the special functions they need (``specials``),
* measures, their Laplace transforms and a catalog of explicit pairs
  (``measure``, ``laplace``),
* a refutation engine for the CM property and its necessary conditions
  (``cmtest``),
* Fourier inversion back to the measure (``inversion``),
* solutions of ``g(x+1) - g(x) = f(x)`` (``krull``),
* worked Gamma-function examples with parameter thresholds (``gammaex``).
"""

from . import cmtest, expr, gammaex, inversion, krull, laplace, measure, specials
from .cmtest import CMReport, GridSpec, cm_grid_check, run_suite
from .errors import (
    BranchCutError,
    CMError,
    ConstraintError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    JetOverflowError,
    NonFiniteError,
    NotComparableError,
    ParseError,
    UnsupportedNodeError,
)
from .expr import eval_complex, evaluate, jet_eval, parse, to_text
from .inversion import InversionConfig, invert_cm
from .laplace import catalog, exponential_mixture, transform
from .measure import Measure, convolve, dirac, lebesgue

__version__ = "0.1.0"

__all__ = [
    "BranchCutError", "CMError", "CMReport", "ConstraintError", "ConvergenceError",
    "DivergenceError", "DomainError", "GridSpec", "InversionConfig", "JetOverflowError",
    "Measure", "NonFiniteError", "NotComparableError", "ParseError", "UnsupportedNodeError",
    "catalog", "cm_grid_check", "cmtest", "convolve", "dirac", "eval_complex", "evaluate",
    "exponential_mixture", "expr", "gammaex", "inversion", "invert_cm", "jet_eval", "krull",
    "laplace", "lebesgue", "measure", "parse", "run_suite", "specials", "to_text", "transform",
]
