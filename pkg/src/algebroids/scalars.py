"""Symbolic scalars over a coordinate chart.

Every tensor component in this package is a ``Scalar``: an immutable
expression tree over the coordinates of a single chart, with exact
complex-rational constants.  The decidable fragment is the field of
rational functions in the coordinates and in opaque transcendental atoms
(sin, cos, exp, log, sqrt applied to subexpressions); within that fragment
``normalize`` produces a canonical reduced quotient of polynomials, so
structural zero testing is exact.  Outside the fragment (e.g. the identity
sin^2 + cos^2 = 1) zero testing falls back to randomized rational-point
evaluation and reports a probabilistic status.

Expressions are backed by sympy; the grammar, printer and normal form are
pinned here so the text format is independent of sympy's own parser.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import sympy as sp
from sympy.printing.str import StrPrinter

__all__ = [
    "ChartError",
    "ParseError",
    "PoleError",
    "ComplexRational",
    "Chart",
    "Scalar",
    "ZeroStatus",
    "parse_scalar",
    "is_zero",
    "random_point",
]

KNOWN_FUNCTIONS = {
    "sin": sp.sin,
    "cos": sp.cos,
    "exp": sp.exp,
    "log": sp.log,
    "sqrt": sp.sqrt,
}

DEFAULT_SAMPLES = 8
DEFAULT_SEED = 42
FLOAT_TOLERANCE = 1e-9
# numerators/denominators of sampled rational points
SAMPLE_BOUND = 97


class ChartError(ValueError):
    """A coordinate or scalar was used with the wrong chart."""


class ParseError(ValueError):
    """Syntax or identifier error in the expression grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PoleError(ArithmeticError):
    """Evaluation hit a pole."""


@dataclass(frozen=True)
class ComplexRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def of(re, im=0) -> "ComplexRational":
        return ComplexRational(Fraction(re), Fraction(im))

    @staticmethod
    def from_sympy(value: sp.Expr) -> "ComplexRational":
        value = sp.nsimplify(value, rational=True)
        re, im = value.as_real_imag()
        if not (re.is_Rational and im.is_Rational):
            raise ValueError(f"not a complex rational: {value}")
        return ComplexRational(Fraction(re.p, re.q), Fraction(im.p, im.q))

    def to_sympy(self) -> sp.Expr:
        return sp.Rational(self.re) + sp.Rational(self.im) * sp.I

    def __add__(self, other):
        other = _coerce_cr(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_coerce_cr(other))

    def __rsub__(self, other):
        return _coerce_cr(other) + (-self)

    def __mul__(self, other):
        other = _coerce_cr(other)
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_cr(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero ComplexRational")
        return self * ComplexRational(other.re / d, -other.im / d)

    def __rtruediv__(self, other):
        return _coerce_cr(other) / self

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {abs(self.im)}*i"


def _coerce_cr(value) -> ComplexRational:
    if isinstance(value, ComplexRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ComplexRational(Fraction(value))
    raise TypeError(f"cannot coerce {value!r} to ComplexRational")


class Chart:
    """Named chart with an ordered tuple of real coordinate symbols.

    A chart with zero coordinates is allowed; it models the pure Lie
    algebra case where all structure data is constant.
    """

    def __init__(self, name: str, coords: Iterable[str]):
        names = list(coords)
        if len(set(names)) != len(names):
            raise ChartError(f"duplicate coordinates in chart {name!r}")
        for cname in names:
            if cname == "i" or cname in KNOWN_FUNCTIONS:
                raise ChartError(f"coordinate name {cname!r} is reserved")
        self.name = name
        self.coords = tuple(sp.Symbol(c, real=True) for c in names)
        self._by_name = {c.name: c for c in self.coords}

    @property
    def dim(self) -> int:
        return len(self.coords)

    def coord(self, name: str) -> sp.Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise ChartError(f"chart {self.name!r} has no coordinate {name!r}")

    def scalar(self, value) -> "Scalar":
        """Coerce a string, number or sympy expression to a Scalar on this chart."""
        if isinstance(value, Scalar):
            if value.chart is not self:
                raise ChartError("scalar belongs to a different chart")
            return value
        if isinstance(value, str):
            return parse_scalar(value, self)
        if isinstance(value, ComplexRational):
            return Scalar(self, value.to_sympy())
        if isinstance(value, (int, Fraction)):
            return Scalar(self, sp.Rational(value))
        if isinstance(value, sp.Expr):
            return Scalar(self, value)
        raise TypeError(f"cannot coerce {value!r} to Scalar")

    @property
    def zero(self) -> "Scalar":
        return self.scalar(0)

    @property
    def one(self) -> "Scalar":
        return self.scalar(1)

    def __repr__(self):
        return f"Chart({self.name!r}, {[c.name for c in self.coords]})"


def _canonical(expr: sp.Expr) -> sp.Expr:
    """Canonical form: reduced quotient of expanded polynomials.

    Coordinates and each distinct transcendental atom are independent
    generators, so two expressions equal as rational functions in those
    generators canonicalize to identical trees.
    """
    return sp.cancel(sp.together(expr))


class Scalar:
    """Immutable symbolic expression over a chart's coordinates."""

    __slots__ = ("chart", "expr", "_norm")

    def __init__(self, chart: Chart, expr: sp.Expr):
        expr = sp.sympify(expr)
        bad = expr.free_symbols - set(chart.coords)
        if bad:
            raise ChartError(
                f"symbols {sorted(s.name for s in bad)} not in chart {chart.name!r}"
            )
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "expr", expr)
        object.__setattr__(self, "_norm", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- canonical form -------------------------------------------------

    def normalize(self) -> "Scalar":
        return Scalar(self.chart, self.norm_expr)

    @property
    def norm_expr(self) -> sp.Expr:
        cached = object.__getattribute__(self, "_norm")
        if cached is None:
            cached = _canonical(self.expr)
            object.__setattr__(self, "_norm", cached)
        return cached

    def is_structurally_zero(self) -> bool:
        return self.norm_expr == 0

    def is_constant(self) -> bool:
        return not self.norm_expr.free_symbols

    def constant_value(self) -> ComplexRational:
        if not self.is_constant():
            raise ValueError("scalar is not constant")
        return ComplexRational.from_sympy(self.norm_expr)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        return self.chart.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return Scalar(self.chart, self.expr + other.expr)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.chart, -self.expr)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        return Scalar(self.chart, self.expr * other.expr)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_structurally_zero():
            raise ZeroDivisionError("division by structurally zero scalar")
        return Scalar(self.chart, self.expr / other.expr)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("only integer exponents are supported")
        return Scalar(self.chart, self.expr ** exponent)

    # -- calculus --------------------------------------------------------

    def diff(self, coord: Union[str, sp.Symbol]) -> "Scalar":
        sym = self.chart.coord(coord) if isinstance(coord, str) else coord
        if sym not in self.chart.coords:
            raise ChartError(f"{sym} is not a coordinate of chart {self.chart.name!r}")
        return Scalar(self.chart, sp.diff(self.expr, sym))

    def conjugate(self) -> "Scalar":
        # coordinates are real symbols, so only the constants flip
        return Scalar(self.chart, sp.conjugate(self.expr))

    def real_part(self) -> "Scalar":
        return (self + self.conjugate()) / 2

    def imag_part(self) -> "Scalar":
        return (self - self.conjugate()) / (2 * sp.I)

    # -- evaluation -------------------------------------------------------

    def eval(self, point: Mapping) -> Union[ComplexRational, complex]:
        """Evaluate at a point (coordinate name or symbol -> value).

        Rational expressions evaluate exactly to a ComplexRational;
        transcendental atoms force a floating complex result.
        """
        subs = {}
        for key, val in point.items():
            sym = self.chart.coord(key) if isinstance(key, str) else key
            if isinstance(val, ComplexRational):
                subs[sym] = val.to_sympy()
            elif isinstance(val, (int, Fraction)):
                subs[sym] = sp.Rational(val)
            elif isinstance(val, float):
                subs[sym] = sp.Float(val)
            else:
                subs[sym] = sp.sympify(val)
        missing = self.expr.free_symbols - set(subs)
        if missing:
            raise ChartError(
                f"point does not cover coordinates {sorted(s.name for s in missing)}"
            )
        value = self.expr.subs(subs, simultaneous=True)
        if value.has(sp.zoo, sp.oo, -sp.oo, sp.nan):
            raise PoleError(f"pole at {point}")
        try:
            return ComplexRational.from_sympy(value)
        except ValueError:
            approx = complex(value.evalf(chop=False))
            if approx != approx or abs(approx) == float("inf"):  # nan / inf
                raise PoleError(f"pole at {point}")
            return approx

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = self._coerce(other)
            except (TypeError, ChartError, ParseError):
                return NotImplemented
        return self.chart is other.chart and self.norm_expr == other.norm_expr

    def __hash__(self):
        return hash((id(self.chart), self.norm_expr))

    def __str__(self):
        return print_scalar(self)

    def __repr__(self):
        return f"Scalar({print_scalar(self)!r})"


# ---------------------------------------------------------------------------
# zero testing


@dataclass(frozen=True)
class ZeroStatus:
    """Outcome of a zero test.

    ``structurally_zero`` is definitive.  Otherwise the scalar was sampled
    at random rational points: a ``witness`` point with a value above
    tolerance proves it nonzero, while ``all_samples_zero`` flags a likely
    identity outside the decidable fragment.
    """

    structurally_zero: bool
    witness: Union[dict, None] = None
    witness_value: Union[complex, None] = None
    all_samples_zero: bool = False

    @property
    def status(self) -> str:
        return "StructurallyZero" if self.structurally_zero else "ProbablyNonzero"

    def __bool__(self):
        return self.structurally_zero


def random_point(chart: Chart, rng: random.Random) -> dict:
    """Random rational point with coordinates p/q, |p|,|q| <= SAMPLE_BOUND."""
    point = {}
    for c in chart.coords:
        num = rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND)
        den = rng.randint(1, SAMPLE_BOUND)
        point[c] = ComplexRational.of(Fraction(num, den))
    return point


def is_zero(
    s: Scalar,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    tolerance: float = FLOAT_TOLERANCE,
) -> ZeroStatus:
    """Structural zero test with a randomized numeric fallback."""
    if s.is_structurally_zero():
        return ZeroStatus(structurally_zero=True)
    rng = random.Random(seed)
    failures = 0
    all_zero = True
    max_attempts = samples * 4
    tested = 0
    attempt = 0
    while tested < samples and attempt < max_attempts:
        attempt += 1
        point = random_point(s.chart, rng)
        try:
            value = s.eval(point)
        except PoleError:
            failures += 1
            continue
        tested += 1
        magnitude = abs(complex(value))
        if magnitude > tolerance:
            return ZeroStatus(
                structurally_zero=False,
                witness={k.name: v for k, v in point.items()},
                witness_value=complex(value),
            )
        # keep sampling; value is (numerically) zero here
    if tested == 0:
        raise PoleError("every sampled point hit a pole; cannot test for zero")
    return ZeroStatus(structurally_zero=False, all_samples_zero=all_zero)


# ---------------------------------------------------------------------------
# parser

_OPERATORS = set("+-*/^()")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            tokens.append(("int", text[start:pos], start))
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            tokens.append(("name", text[start:pos], start))
            continue
        if ch in _OPERATORS:
            tokens.append((ch, ch, pos))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent parser for the expression grammar.

    Precedence (low to high): + - ; * / ; unary - ; ^ (right associative).
    """

    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> sp.Expr:
        expr = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return expr

    def sum(self) -> sp.Expr:
        expr = self.product()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.product()
            expr = expr + rhs if op == "+" else expr - rhs
        return expr

    def product(self) -> sp.Expr:
        expr = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.advance()
            rhs = self.unary()
            if op == "*":
                expr = expr * rhs
            else:
                if _canonical(rhs) == 0:
                    raise ParseError("division by structurally zero expression", pos)
                expr = expr / rhs
        return expr

    def unary(self) -> sp.Expr:
        if self.peek()[0] == "-":
            self.advance()
            return -self.unary()
        if self.peek()[0] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> sp.Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            _, _, pos = self.advance()
            exponent = self.unary_power()
            exponent = _canonical(exponent)
            if not exponent.is_Integer:
                raise ParseError("exponent must be an integer constant", pos)
            return base ** exponent
        return base

    def unary_power(self) -> sp.Expr:
        # exponent position: allow a leading sign, then a power (right assoc)
        if self.peek()[0] == "-":
            self.advance()
            return -self.unary_power()
        return self.power()

    def atom(self) -> sp.Expr:
        kind, value, pos = self.advance()
        if kind == "int":
            return sp.Integer(int(value))
        if kind == "(":
            expr = self.sum()
            self.expect(")")
            return expr
        if kind == "name":
            if self.peek()[0] == "(":
                if value not in KNOWN_FUNCTIONS:
                    raise ParseError(f"unknown function {value!r}", pos)
                self.advance()
                arg = self.sum()
                self.expect(")")
                return KNOWN_FUNCTIONS[value](arg)
            if value == "i":
                return sp.I
            try:
                return self.chart.coord(value)
            except ChartError:
                raise ParseError(f"unknown identifier {value!r}", pos)
        raise ParseError(f"unexpected token {value!r}", pos)


def parse_scalar(text: str, chart: Chart) -> Scalar:
    """Parse the expression grammar into a normalized Scalar."""
    expr = _Parser(text, chart).parse()
    if expr.has(sp.zoo, sp.nan):
        raise ParseError("expression contains division by zero", 0)
    return Scalar(chart, _canonical(expr))


# ---------------------------------------------------------------------------
# printer


class _ScalarPrinter(StrPrinter):
    """Deterministic printer emitting the package grammar (^ for powers)."""

    def __init__(self):
        super().__init__(settings={"order": "grlex"})

    def _print_ImaginaryUnit(self, expr):
        return "i"

    def _print_Pow(self, expr, rational=False):
        if expr.exp is sp.S.Half:
            return f"sqrt({self._print(expr.base)})"
        if expr.exp == -sp.S.Half:
            return f"1/sqrt({self._print(expr.base)})"
        text = super()._print_Pow(expr, rational=rational)
        return text.replace("**", "^")


_PRINTER = _ScalarPrinter()


def print_scalar(s: Scalar) -> str:
    return _PRINTER.doprint(s.norm_expr)
