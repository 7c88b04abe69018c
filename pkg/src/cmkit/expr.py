"""
Expression trees for real functions of one positive variable.

Text is parsed by a small recursive-descent parser::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ['^' ['-'] number]
    atom   := number | VAR | func '(' args ')' | '(' expr ')'
    func   := exp | log | lgamma | polygamma | E1 | I1

``VAR`` is ``x`` by default; measure densities use ``t``.  ``polygamma`` takes
two arguments, the first a nonnegative integer literal.  Unary minus binds
looser than ``^``, so ``-x^2`` is ``-(x^2)``.

Three evaluators walk a tree:

* :func:`evaluate`: real values, scalar or numpy array;
* :func:`jet_eval`: derivatives ``f(x0), f'(x0), ..., f^(K)(x0)`` by
  truncated power series arithmetic;
* :func:`eval_complex`: principal-branch complex values for the elementary
  subset (constants, arithmetic, pow, exp, log).

Trees are frozen dataclasses and compare structurally.
"""

from dataclasses import dataclass
import math
import re

import numpy as np

from . import specials
from .errors import (
    BranchCutError,
    DomainError,
    JetOverflowError,
    NonFiniteError,
    ParseError,
    UnsupportedNodeError,
)

FUNCTIONS = ("exp", "log", "lgamma", "E1", "I1")


class Expr:
    """Base class of all expression nodes.

    Arithmetic operators build new trees, and calling a node evaluates it.
    """

    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        return Pow(self, float(exponent))

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True, eq=True, repr=True)
class Var(Expr):
    pass


@dataclass(frozen=True, eq=True, repr=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Pow(Expr):
    base: Expr
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "exponent", float(self.exponent))


@dataclass(frozen=True, eq=True, repr=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Func(Expr):
    """Unary function node; ``name`` is one of ``FUNCTIONS``."""

    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")


@dataclass(frozen=True, eq=True, repr=True)
class Polygamma(Expr):
    order: int
    arg: Expr

    def __post_init__(self):
        if not isinstance(self.order, int) or isinstance(self.order, bool) or self.order < 0:
            raise ValueError("polygamma order must be a nonnegative int")


X = Var()


def as_expr(value):
    if isinstance(value, Expr):
        return value
    return Const(float(value))


def exp(e):
    return Func("exp", as_expr(e))


def log(e):
    return Func("log", as_expr(e))


def lgamma(e):
    return Func("lgamma", as_expr(e))


def e1(e):
    return Func("E1", as_expr(e))


def i1(e):
    return Func("I1", as_expr(e))


def polygamma(order, e):
    return Polygamma(int(order), as_expr(e))


def substitute(f, g):
    """Return ``f`` with every occurrence of the variable replaced by ``g``."""
    if isinstance(f, Var):
        return g
    if isinstance(f, Const):
        return f
    if isinstance(f, (Add, Sub, Mul, Div)):
        return type(f)(substitute(f.left, g), substitute(f.right, g))
    if isinstance(f, Pow):
        return Pow(substitute(f.base, g), f.exponent)
    if isinstance(f, Neg):
        return Neg(substitute(f.arg, g))
    if isinstance(f, Func):
        return Func(f.name, substitute(f.arg, g))
    if isinstance(f, Polygamma):
        return Polygamma(f.order, substitute(f.arg, g))
    raise TypeError(f"not an expression node: {f!r}")


def contains_var(f):
    if isinstance(f, Var):
        return True
    if isinstance(f, Const):
        return False
    return any(contains_var(c) for c in _children(f))


def _children(f):
    if isinstance(f, (Add, Sub, Mul, Div)):
        return (f.left, f.right)
    if isinstance(f, Pow):
        return (f.base,)
    if isinstance(f, (Neg, Func, Polygamma)):
        return (f.arg,)
    return ()


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text, var):
        self.text = text
        self.var = var
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.peek()
        if text != value or kind == "eof":
            found = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            sign = 1.0
            if self.peek()[:2] == ("op", "-"):
                self.advance()
                sign = -1.0
            kind, text, pos = self.advance()
            if kind != "num":
                raise ParseError("exponent must be a number literal", pos)
            return Pow(base, sign * float(text))
        return base

    def atom(self):
        kind, text, pos = self.advance()
        if kind == "num":
            return Const(float(text))
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            if text == self.var:
                return Var()
            if text == "polygamma":
                self.expect("(")
                okind, otext, opos = self.advance()
                if okind != "num" or not otext.isdigit():
                    raise ParseError(
                        "polygamma order must be a nonnegative integer literal", opos
                    )
                self.expect(",")
                arg = self.expr()
                self.expect(")")
                return Polygamma(int(otext), arg)
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(text, arg)
            raise ParseError(f"unknown identifier {text!r}", pos)
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {text!r}", pos)


def parse(text, var="x"):
    """Parse ``text`` into an expression tree.

    Raises
    ------
    ParseError
        With the byte offset of the offending token.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text, var).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _fmt_number(v):
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _prec(e):
    if isinstance(e, Const) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 0
    return _PREC.get(type(e), 5)


def to_text(e, var="x"):
    """Render a tree as text that :func:`parse` maps back to the same tree."""

    def wrap(node, min_prec):
        s = to_text(node, var)
        return f"({s})" if _prec(node) < min_prec else s

    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return var
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return f"{wrap(e.left, 1)} {op} {wrap(e.right, 2)}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return f"{wrap(e.left, 2)}{op}{wrap(e.right, 3)}"
    if isinstance(e, Neg):
        return f"-{wrap(e.arg, 3)}"
    if isinstance(e, Pow):
        return f"{wrap(e.base, 5)}^{_fmt_number(e.exponent)}"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg, var)})"
    if isinstance(e, Polygamma):
        return f"polygamma({e.order}, {to_text(e.arg, var)})"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# real evaluation

_lgamma_vec = np.vectorize(math.lgamma, otypes=[float])
_polygamma_vec = np.vectorize(specials.polygamma, otypes=[float])
_e1_vec = np.vectorize(specials.exp_integral_e1, otypes=[float])
_i1_vec = np.vectorize(specials.bessel_i1, otypes=[float])


def _is_integer(p):
    return float(p).is_integer()


def evaluate(f, x):
    """Evaluate ``f`` at a float or numpy array of points.

    Raises
    ------
    DomainError
        If any point leaves the domain of some node (log of a nonpositive
        value, a pole, a non-integer power of a negative base, ...).
    NonFiniteError
        If the value overflows.
    """
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(f, xa)
    out = np.broadcast_to(out, xa.shape)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{to_text(f)} is not finite at some point of {x!r}")
    return float(out) if scalar else np.array(out, dtype=float)


def _eval(f, x):
    if isinstance(f, Const):
        return np.float64(f.value)
    if isinstance(f, Var):
        return x
    if isinstance(f, Add):
        return _eval(f.left, x) + _eval(f.right, x)
    if isinstance(f, Sub):
        return _eval(f.left, x) - _eval(f.right, x)
    if isinstance(f, Mul):
        return _eval(f.left, x) * _eval(f.right, x)
    if isinstance(f, Div):
        den = _eval(f.right, x)
        if np.any(den == 0):
            raise DomainError(f"pole: division by zero in {to_text(f)}")
        return _eval(f.left, x) / den
    if isinstance(f, Neg):
        return -_eval(f.arg, x)
    if isinstance(f, Pow):
        base = _eval(f.base, x)
        p = f.exponent
        if _is_integer(p):
            if p < 0 and np.any(base == 0):
                raise DomainError(f"pole: zero base with negative exponent in {to_text(f)}")
            return base ** p
        if np.any(base < 0):
            raise DomainError(f"negative base with non-integer exponent in {to_text(f)}")
        if p < 0 and np.any(base == 0):
            raise DomainError(f"pole: zero base with negative exponent in {to_text(f)}")
        return base ** p
    if isinstance(f, Func):
        a = _eval(f.arg, x)
        name = f.name
        if name == "exp":
            return np.exp(a)
        if name == "log":
            if np.any(a <= 0):
                raise DomainError(f"log of a nonpositive value in {to_text(f)}")
            return np.log(a)
        if name == "lgamma":
            if np.any(a <= 0):
                raise DomainError(f"lgamma needs a positive argument in {to_text(f)}")
            return _lgamma_vec(a)
        if name == "E1":
            if np.any(a <= 0):
                raise DomainError(f"E1 needs a positive argument in {to_text(f)}")
            return _e1_vec(a)
        if name == "I1":
            if np.any(a < 0):
                raise DomainError(f"I1 needs a nonnegative argument in {to_text(f)}")
            return _i1_vec(a)
    if isinstance(f, Polygamma):
        a = _eval(f.arg, x)
        if np.any(a <= 0):
            raise DomainError(f"polygamma needs a positive argument in {to_text(f)}")
        return _polygamma_vec(f.order, a)
    raise TypeError(f"not an expression node: {f!r}")


# ---------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class Jet:
    """Derivatives of a function at one point.

    ``coeffs[k]`` is the k-th derivative ``f^(k)(base_point)`` itself, not the
    Taylor coefficient ``f^(k)/k!``.  Double precision keeps these meaningful up
    to roughly order 30.
    """

    base_point: float
    coeffs: tuple

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order):
        return Jet(self.base_point, self.coeffs[: order + 1])

    def taylor(self):
        """Taylor coefficients ``f^(k)(x0) / k!``."""
        return np.array([c / math.factorial(k) for k, c in enumerate(self.coeffs)])


def jet_eval(f, x0, order):
    """Derivatives of ``f`` at ``x0`` up to ``order``, exact up to roundoff.

    Propagation runs truncated power series through every node; ``lgamma``,
    ``polygamma``, ``E1`` and ``I1`` are composed from their own derivative
    values at the inner point.

    Raises
    ------
    DomainError
        If ``x0`` is not in the domain of some subexpression.
    JetOverflowError
        If any propagated coefficient becomes non-finite.
    """
    x0 = float(x0)
    if not x0 > 0:
        raise DomainError(f"jet base point must be positive, got {x0}")
    order = int(order)
    if order < 0:
        raise ValueError("order must be >= 0")
    with np.errstate(all="ignore"):
        series = _series(f, x0, order)
    raw = tuple(float(c) * math.factorial(k) for k, c in enumerate(series))
    if not all(math.isfinite(c) for c in raw):
        raise JetOverflowError(f"derivatives of {to_text(f)} overflow at x = {x0}")
    return Jet(x0, raw)


def _check(series, node):
    if not np.all(np.isfinite(series)):
        raise JetOverflowError(f"non-finite series coefficient in {to_text(node)}")
    return series


def _mul(a, b):
    return np.convolve(a, b)[: len(a)]


def _div(a, b, node):
    if b[0] == 0:
        raise DomainError(f"pole: division by a zero value in {to_text(node)}")
    q = np.zeros_like(a)
    for k in range(len(a)):
        q[k] = (a[k] - np.dot(q[:k], b[k:0:-1])) / b[0]
    return q


def _exp(a):
    e = np.zeros_like(a)
    e[0] = math.exp(a[0]) if a[0] < 709.7 else math.inf
    for k in range(1, len(a)):
        j = np.arange(1, k + 1)
        e[k] = np.dot(j * a[1 : k + 1], e[k - 1 :: -1][:k]) / k
    return e


def _log(a, node):
    if not a[0] > 0:
        raise DomainError(f"log of a nonpositive value in {to_text(node)}")
    out = np.zeros_like(a)
    out[0] = math.log(a[0])
    for k in range(1, len(a)):
        j = np.arange(1, k)
        out[k] = (a[k] - np.dot(j * out[1:k], a[k - 1 : 0 : -1]) / k) / a[0]
    return out


def _powi(a, n):
    result = np.zeros_like(a)
    result[0] = 1.0
    base = a.copy()
    while n:
        if n & 1:
            result = _mul(result, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    return result


def _powr(a, p, node):
    if not a[0] > 0:
        raise DomainError(f"non-integer power needs a positive base in {to_text(node)}")
    out = np.zeros_like(a)
    out[0] = a[0] ** p
    for k in range(1, len(a)):
        j = np.arange(1, k + 1)
        out[k] = np.dot(((p + 1) * j - k) * a[1 : k + 1], out[k - 1 :: -1][:k]) / (k * a[0])
    return out


def _compose(outer_derivs, inner):
    """sum_m d_m / m! (inner - inner[0])^m, truncated."""
    delta = inner.copy()
    delta[0] = 0.0
    K = len(inner) - 1
    acc = np.zeros_like(inner)
    acc[0] = outer_derivs[K] / math.factorial(K)
    for m in range(K - 1, -1, -1):
        acc = _mul(acc, delta)
        acc[0] += outer_derivs[m] / math.factorial(m)
    return acc


def _e1_derivs(u0, K):
    """E1^(m)(u0) for m = 0..K via the series of E1' = -exp(-u)/u."""
    d = np.zeros(K + 1)
    d[0] = specials.exp_integral_e1(u0)
    if K == 0:
        return d
    k = np.arange(K)
    ser_exp = math.exp(-u0) * (-1.0) ** k / np.array([math.factorial(i) for i in k], dtype=float)
    ser_inv = (-1.0) ** k / u0 ** (k + 1)
    prime = -_mul(ser_exp, ser_inv)
    for m in range(1, K + 1):
        d[m] = prime[m - 1] * math.factorial(m - 1)
    return d


def _i1_derivs(u0, K):
    """I1^(m)(u0) = 2^-m sum_j C(m, j) I_{1-m+2j}(u0)."""
    cache = {}

    def bi(n):
        n = abs(n)
        if n not in cache:
            cache[n] = specials.bessel_i(n, u0)
        return cache[n]

    return np.array(
        [
            sum(math.comb(m, j) * bi(1 - m + 2 * j) for j in range(m + 1)) / 2.0**m
            for m in range(K + 1)
        ]
    )


def _series(f, x0, K):
    if isinstance(f, Const):
        s = np.zeros(K + 1)
        s[0] = f.value
        return s
    if isinstance(f, Var):
        s = np.zeros(K + 1)
        s[0] = x0
        if K >= 1:
            s[1] = 1.0
        return s
    if isinstance(f, Add):
        return _check(_series(f.left, x0, K) + _series(f.right, x0, K), f)
    if isinstance(f, Sub):
        return _check(_series(f.left, x0, K) - _series(f.right, x0, K), f)
    if isinstance(f, Mul):
        return _check(_mul(_series(f.left, x0, K), _series(f.right, x0, K)), f)
    if isinstance(f, Div):
        return _check(_div(_series(f.left, x0, K), _series(f.right, x0, K), f), f)
    if isinstance(f, Neg):
        return -_series(f.arg, x0, K)
    if isinstance(f, Pow):
        a = _series(f.base, x0, K)
        p = f.exponent
        if _is_integer(p) and abs(p) <= 64:
            n = int(p)
            if n >= 0:
                return _check(_powi(a, n), f)
            one = np.zeros(K + 1)
            one[0] = 1.0
            return _check(_div(one, _powi(a, -n), f), f)
        return _check(_powr(a, p, f), f)
    if isinstance(f, Func):
        a = _series(f.arg, x0, K)
        u0 = float(a[0])
        name = f.name
        if name == "exp":
            return _check(_exp(a), f)
        if name == "log":
            return _check(_log(a, f), f)
        if name == "lgamma":
            if not u0 > 0:
                raise DomainError(f"lgamma needs a positive argument in {to_text(f)}")
            d = [math.lgamma(u0)] + [specials.polygamma(m - 1, u0) for m in range(1, K + 1)]
            return _check(_compose(d, a), f)
        if name == "E1":
            if not u0 > 0:
                raise DomainError(f"E1 needs a positive argument in {to_text(f)}")
            return _check(_compose(_e1_derivs(u0, K), a), f)
        if name == "I1":
            if u0 < 0:
                raise DomainError(f"I1 needs a nonnegative argument in {to_text(f)}")
            return _check(_compose(_i1_derivs(u0, K), a), f)
    if isinstance(f, Polygamma):
        a = _series(f.arg, x0, K)
        u0 = float(a[0])
        if not u0 > 0:
            raise DomainError(f"polygamma needs a positive argument in {to_text(f)}")
        d = [specials.polygamma(f.order + m, u0) for m in range(K + 1)]
        return _check(_compose(d, a), f)
    raise TypeError(f"not an expression node: {f!r}")


# ---------------------------------------------------------------------------
# complex evaluation


def _on_cut(z):
    z = np.asarray(z)
    return np.any((z.imag == 0) & (z.real <= 0))


def eval_complex(f, z):
    """Principal-branch value of ``f`` at complex ``z`` (scalar or array).

    Only constants, arithmetic, ``pow``, ``exp`` and ``log`` have complex
    extensions here; other nodes raise :class:`UnsupportedNodeError`.
    Evaluating ``log`` or a non-integer power on the closed negative real axis
    raises :class:`BranchCutError`.
    """
    scalar = np.ndim(z) == 0
    za = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        out = np.broadcast_to(_ceval(f, za), za.shape)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{to_text(f)} is not finite at {z!r}")
    return complex(out) if scalar else np.array(out, dtype=complex)


def _ceval(f, z):
    if isinstance(f, Const):
        return np.complex128(f.value)
    if isinstance(f, Var):
        return z
    if isinstance(f, Add):
        return _ceval(f.left, z) + _ceval(f.right, z)
    if isinstance(f, Sub):
        return _ceval(f.left, z) - _ceval(f.right, z)
    if isinstance(f, Mul):
        return _ceval(f.left, z) * _ceval(f.right, z)
    if isinstance(f, Div):
        den = _ceval(f.right, z)
        if np.any(den == 0):
            raise DomainError(f"pole: division by zero in {to_text(f)}")
        return _ceval(f.left, z) / den
    if isinstance(f, Neg):
        return -_ceval(f.arg, z)
    if isinstance(f, Pow):
        base = _ceval(f.base, z)
        p = f.exponent
        if _is_integer(p):
            if p < 0 and np.any(base == 0):
                raise DomainError(f"pole in {to_text(f)}")
            return base ** int(p)
        if _on_cut(base):
            raise BranchCutError(f"non-integer power on the branch cut in {to_text(f)}")
        return np.exp(p * np.log(base))
    if isinstance(f, Func):
        if f.name == "exp":
            return np.exp(_ceval(f.arg, z))
        if f.name == "log":
            a = _ceval(f.arg, z)
            if _on_cut(a):
                raise BranchCutError(f"log evaluated on the branch cut in {to_text(f)}")
            return np.log(a)
        raise UnsupportedNodeError(f"{f.name} has no complex evaluation")
    if isinstance(f, Polygamma):
        raise UnsupportedNodeError("polygamma has no complex evaluation")
    raise TypeError(f"not an expression node: {f!r}")
