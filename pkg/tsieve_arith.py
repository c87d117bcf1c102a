"""
Trinomial Sieve exact arithmetic substrate.

Rationals are ``fractions.Fraction``. Integer polynomials are stored dense,
constant term first, and delegate the heavy lifting (gcd, square-free part,
resultant, root isolation) to sympy over ZZ. Real quantities that are not
rational (logarithms, exponentials, square roots, pi) are enclosed in exact
rational intervals obtained from mpmath's directed-rounding kernels.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import sympy
from mpmath import libmp
from sympy import Poly, ZZ

from tsieve_error_handler import InputError, PreconditionError

logger = logging.getLogger("tsieve.arith")

X = sympy.Symbol("x")

BigRational = Fraction
RationalLike = Union[int, str, Fraction]

# Working precision (bits) of the transcendental kernels when the caller does not ask.
DEFAULT_PREC = 128

# Roots closer than this to a rectangle edge are treated as lying on it.
BOUNDARY_EPS = Fraction(1, 1 << 53)


def as_fraction(value) -> Fraction:
    """Convert ints, "p/q" strings, sympy/gmpy rationals and mpf values to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"not a rational number: {value!r}") from e
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "_mpf_"):
        return _raw_to_fraction(value._mpf_)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise InputError(f"not a rational number: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Wire form of a rational: "p/q", or "p" for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def round_down(value: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((value.numerator * scale) // value.denominator, scale)


def round_up(value: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-value.numerator * scale) // value.denominator), scale)


# ---------------------------------------------------------------------------
# Intervals and rectangles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            raise PreconditionError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value) -> "RationalInterval":
        value = as_fraction(value)
        return cls(value, value)

    @classmethod
    def coerce(cls, value) -> "RationalInterval":
        if isinstance(value, RationalInterval):
            return value
        return cls.point(value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        value = as_fraction(value)
        return self.lo <= value <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def intersects(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def max_with(self, other: "RationalInterval") -> "RationalInterval":
        """Enclosure of max(x, y) for x in self, y in other."""
        return RationalInterval(max(self.lo, other.lo), max(self.hi, other.hi))

    def min_with(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(min(self.lo, other.lo), min(self.hi, other.hi))

    def __add__(self, other) -> "RationalInterval":
        other = RationalInterval.coerce(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "RationalInterval":
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "RationalInterval":
        other = RationalInterval.coerce(other)
        return RationalInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "RationalInterval":
        return RationalInterval.coerce(other) - self

    def __mul__(self, other) -> "RationalInterval":
        other = RationalInterval.coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalInterval":
        other = RationalInterval.coerce(other)
        if other.contains_zero():
            raise PreconditionError("interval division by an interval containing 0")
        return self * RationalInterval(1 / other.hi, 1 / other.lo)

    def square(self) -> "RationalInterval":
        if self.lo >= 0:
            return RationalInterval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return RationalInterval(self.hi * self.hi, self.lo * self.lo)
        return RationalInterval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def round_outward(self, bits: int) -> "RationalInterval":
        """Widen to dyadic endpoints with ``bits`` fractional bits."""
        return RationalInterval(round_down(self.lo, bits), round_up(self.hi, bits))

    def to_json(self, digits: int = 20) -> dict:
        return render_interval(self, digits)

    def __str__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def render_interval(interval: RationalInterval, digits: int = 20) -> dict:
    """Decimal rendering with an explicit error bound.

    The error bound is never smaller than the interval width and covers the
    distance from the printed value to both endpoints.
    """
    mid = interval.midpoint
    quantum = Fraction(1, 10 ** digits)
    printed = Fraction(round(mid / quantum)) * quantum
    error = max(abs(printed - interval.lo), abs(interval.hi - printed), interval.width)
    return {"value": _decimal_string(printed, digits), "error": _error_string(error)}


def _decimal_string(value: Fraction, digits: int) -> str:
    sign = "-" if value < 0 else ""
    value = abs(value)
    scaled = value.numerator * 10 ** digits // value.denominator
    whole, frac = divmod(scaled, 10 ** digits)
    frac_text = str(frac).rjust(digits, "0").rstrip("0")
    if not frac_text:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac_text}"


def _error_string(error: Fraction) -> str:
    """Two significant digits, rounded up; "0" only for an exact value."""
    if error == 0:
        return "0"
    exponent = 0
    while error >= 100:
        error /= 10
        exponent += 1
    while error < 10:
        error *= 10
        exponent -= 1
    mantissa = -((-error.numerator) // error.denominator)
    if mantissa == 100:
        mantissa, exponent = 10, exponent + 1
    return f"{mantissa // 10}.{mantissa % 10}e{exponent + 1}"


class RectOp(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


@dataclass(frozen=True)
class ComplexRectangle:
    """Axis-parallel complex rectangle re x im with rational corners."""
    re: RationalInterval
    im: RationalInterval

    @classmethod
    def point(cls, re, im=0) -> "ComplexRectangle":
        return cls(RationalInterval.point(re), RationalInterval.point(im))

    @classmethod
    def from_corners(cls, re_lo, re_hi, im_lo, im_hi) -> "ComplexRectangle":
        return cls(RationalInterval(re_lo, re_hi), RationalInterval(im_lo, im_hi))

    @classmethod
    def coerce(cls, value) -> "ComplexRectangle":
        if isinstance(value, ComplexRectangle):
            return value
        return cls.point(value)

    @property
    def width(self) -> Fraction:
        """Largest side length."""
        return max(self.re.width, self.im.width)

    def is_on_real_axis(self) -> bool:
        return self.im.lo == 0 and self.im.hi == 0

    def contains(self, re, im=0) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def contains_rectangle(self, other: "ComplexRectangle") -> bool:
        return (self.re.lo <= other.re.lo and other.re.hi <= self.re.hi
                and self.im.lo <= other.im.lo and other.im.hi <= self.im.hi)

    def intersects(self, other: "ComplexRectangle") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def conjugate(self) -> "ComplexRectangle":
        return ComplexRectangle(self.re, -self.im)

    def abs_squared(self) -> RationalInterval:
        return self.re.square() + self.im.square()

    def round_outward(self, bits: int) -> "ComplexRectangle":
        return ComplexRectangle(self.re.round_outward(bits), self.im.round_outward(bits))

    def __add__(self, other) -> "ComplexRectangle":
        other = ComplexRectangle.coerce(other)
        return ComplexRectangle(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "ComplexRectangle":
        return ComplexRectangle(-self.re, -self.im)

    def __sub__(self, other) -> "ComplexRectangle":
        other = ComplexRectangle.coerce(other)
        return ComplexRectangle(self.re - other.re, self.im - other.im)

    def __mul__(self, other) -> "ComplexRectangle":
        other = ComplexRectangle.coerce(other)
        return ComplexRectangle(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ComplexRectangle":
        other = ComplexRectangle.coerce(other)
        if other.contains_zero():
            raise PreconditionError("rectangle division by a rectangle containing 0")
        norm = other.abs_squared()
        product = self * other.conjugate()
        return ComplexRectangle(product.re / norm, product.im / norm)

    def __str__(self):
        return f"{self.re} + {self.im}i"


def rect_arith(a: ComplexRectangle, b: ComplexRectangle, op: RectOp) -> ComplexRectangle:
    """Conservative rectangle arithmetic: the result contains x op y for all x in a, y in b."""
    op = RectOp(op)
    if op is RectOp.ADD:
        return a + b
    if op is RectOp.SUB:
        return a - b
    if op is RectOp.MUL:
        return a * b
    return a / b


# ---------------------------------------------------------------------------
# Certified transcendental enclosures
# ---------------------------------------------------------------------------

def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, bc = raw
    if not man:
        if exp:
            raise PreconditionError("non-finite value in a certified computation")
        return Fraction(0)
    p, q = libmp.to_rational(raw)
    return Fraction(p, q)


def _slack(value: Fraction, prec: int) -> Fraction:
    # a few ulps of the working precision; mpf results carry relative precision
    return abs(value) * Fraction(1, 1 << (prec - 4))


def _raw_from_fraction(value: Fraction, prec: int, rnd):
    return libmp.from_rational(value.numerator, value.denominator, prec, rnd)


def _monotone_enclosure(kernel, interval: RationalInterval, prec: int) -> RationalInterval:
    lo_arg = _raw_from_fraction(interval.lo, prec + 16, libmp.round_floor)
    hi_arg = _raw_from_fraction(interval.hi, prec + 16, libmp.round_ceiling)
    lo = _raw_to_fraction(kernel(lo_arg, prec, libmp.round_floor))
    hi = _raw_to_fraction(kernel(hi_arg, prec, libmp.round_ceiling))
    return RationalInterval(lo - _slack(lo, prec), hi + _slack(hi, prec))


def log_enclosure(interval, prec: int = DEFAULT_PREC) -> RationalInterval:
    """Enclosure of log(x) over a positive rational interval."""
    interval = RationalInterval.coerce(interval)
    if interval.lo <= 0:
        raise PreconditionError(f"logarithm of a non-positive enclosure {interval}")
    if interval.lo == interval.hi == 1:
        return RationalInterval.point(0)
    return _monotone_enclosure(libmp.mpf_log, interval, prec)


def exp_enclosure(interval, prec: int = DEFAULT_PREC) -> RationalInterval:
    interval = RationalInterval.coerce(interval)
    if interval.lo == interval.hi == 0:
        return RationalInterval.point(1)
    result = _monotone_enclosure(libmp.mpf_exp, interval, prec)
    return RationalInterval(max(result.lo, Fraction(0)), result.hi)


def sqrt_enclosure(interval, prec: int = DEFAULT_PREC) -> RationalInterval:
    interval = RationalInterval.coerce(interval)
    if interval.lo < 0:
        raise PreconditionError(f"square root of a negative enclosure {interval}")
    result = _monotone_enclosure(libmp.mpf_sqrt, interval, prec)
    return RationalInterval(max(result.lo, Fraction(0)), result.hi)


def _constant(kernel, prec: int = 256) -> RationalInterval:
    lo = _raw_to_fraction(kernel(prec, libmp.round_floor))
    hi = _raw_to_fraction(kernel(prec, libmp.round_ceiling))
    return RationalInterval(lo - _slack(lo, prec), hi + _slack(hi, prec))


LOG2 = _constant(libmp.mpf_ln2)
LOG10 = _constant(libmp.mpf_ln10)
PI = _constant(libmp.mpf_pi)
E = _constant(libmp.mpf_e)


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------

class PolyOp(Enum):
    ADD = "add"
    MUL = "mul"
    GCD = "gcd"
    SQUAREFREE_PART = "squarefree_part"
    DERIVATIVE = "derivative"


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, constant term first."""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_sympy(cls, poly: Poly) -> "IntPolynomial":
        poly = Poly(poly, X) if not isinstance(poly, Poly) else poly
        if not poly.domain.is_ZZ:
            _, poly = poly.clear_denoms(convert=True)
        return cls(tuple(int(c) for c in reversed(poly.all_coeffs())))

    @classmethod
    def from_rational_coeffs(cls, coeffs: Sequence) -> "IntPolynomial":
        """Primitive integer multiple of a rational polynomial (constant term first)."""
        fracs = [as_fraction(c) for c in coeffs]
        scale = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
        return cls(tuple(int(f * scale) for f in fracs)).primitive()

    def to_sympy(self) -> Poly:
        if not self.coeffs:
            return Poly(0, X, domain=ZZ)
        return Poly.from_list(list(reversed(self.coeffs)), X, domain=ZZ)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        """Primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        g = self.content()
        if self.leading_coefficient < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def evaluate(self, value) -> Fraction:
        value = as_fraction(value)
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def evaluate_rectangle(self, rect: ComplexRectangle, bits: Optional[int] = None) -> ComplexRectangle:
        """Horner evaluation in rectangle arithmetic, optionally rounding outward each step."""
        result = ComplexRectangle.point(0)
        for c in reversed(self.coeffs):
            result = result * rect + c
            if bits is not None:
                result = result.round_outward(bits)
        return result

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __str__(self):
        if self.is_zero():
            return "0"
        return str(self.to_sympy().as_expr())

    def to_json(self) -> List[int]:
        return list(self.coeffs)


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    if p.is_zero() and q.is_zero():
        raise PreconditionError("gcd of two zero polynomials is undefined")
    return IntPolynomial.from_sympy(p.to_sympy().gcd(q.to_sympy())).primitive()


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.is_zero():
        raise PreconditionError("square-free part of the zero polynomial")
    return IntPolynomial.from_sympy(p.to_sympy().sqf_part()).primitive()


def is_squarefree(p: IntPolynomial) -> bool:
    return poly_gcd(p, p.derivative()).degree == 0


def poly_arith(p: IntPolynomial, q: Optional[IntPolynomial], op: PolyOp) -> IntPolynomial:
    """Exact polynomial operations; the unary ones ignore ``q``."""
    op = PolyOp(op)
    if op is PolyOp.ADD:
        return p + q
    if op is PolyOp.MUL:
        return p * q
    if op is PolyOp.GCD:
        return poly_gcd(p, q)
    if op is PolyOp.SQUAREFREE_PART:
        return squarefree_part(p)
    return p.derivative()


def resultant(p: IntPolynomial, q: IntPolynomial) -> int:
    """Res(p, q) = lc(q)^deg(p) * prod of p over the roots of q.

    This equals (-1)^(deg p * deg q) times the Sylvester-matrix resultant
    that sympy returns.
    """
    if p.is_zero() or q.is_zero():
        raise PreconditionError("resultant with the zero polynomial")
    value = int(p.to_sympy().resultant(q.to_sympy()))
    if (p.degree * q.degree) % 2:
        value = -value
    return value


def poly_divmod(p: IntPolynomial, q: IntPolynomial) -> Tuple[Poly, Poly]:
    """Quotient and remainder over QQ."""
    if q.is_zero():
        raise PreconditionError("division by the zero polynomial")
    return p.to_sympy().to_field().div(q.to_sympy().to_field())


def divides(q: IntPolynomial, p: IntPolynomial) -> bool:
    """True iff q divides p in Q[x]."""
    _, rem = poly_divmod(p, q)
    return rem.is_zero


# ---------------------------------------------------------------------------
# Certified root isolation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _isolate(coeffs: Tuple[int, ...], eps: Fraction) -> Tuple[ComplexRectangle, ...]:
    poly = IntPolynomial(coeffs).to_sympy()
    real_part, complex_part = poly.intervals(all=True, eps=sympy.Rational(eps.numerator, eps.denominator))
    boxes = []
    for (a, b), _ in real_part:
        boxes.append(ComplexRectangle.from_corners(as_fraction(a), as_fraction(b), 0, 0))
    # complex boxes come back as (south-west corner, north-east corner)
    for (south_west, north_east), _ in complex_part:
        boxes.append(ComplexRectangle.from_corners(
            as_fraction(sympy.re(south_west)), as_fraction(sympy.re(north_east)),
            as_fraction(sympy.im(south_west)), as_fraction(sympy.im(north_east)),
        ))
    return tuple(boxes)


def isolate_roots(p: IntPolynomial, eps) -> List[ComplexRectangle]:
    """Isolating rectangles of width < eps, one per distinct complex root of p.

    Real roots come back as degenerate rectangles on the real axis. The
    computation is memoized; results are immutable so sharing them is safe.
    """
    if p.is_zero():
        raise PreconditionError("root isolation of the zero polynomial")
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionError("isolation width must be positive")
    if p.degree < 1:
        return []
    return list(_isolate(squarefree_part(p).coeffs, eps))


def count_roots_in(p: IntPolynomial, rect: ComplexRectangle, eps=BOUNDARY_EPS) -> int:
    """Number of distinct roots of p in the closed rectangle.

    Isolating boxes are refined until each lies inside the rectangle or misses
    it. A root within ``eps`` of the boundary is reported as an input error.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionError("boundary tolerance must be positive")
    step = max(rect.width, Fraction(1, 1 << 10)) / 2
    while step >= eps:
        boxes = isolate_roots(p, step)
        inside = sum(1 for box in boxes if rect.contains_rectangle(box))
        straddling = sum(1 for box in boxes if rect.intersects(box) and not rect.contains_rectangle(box))
        if not straddling:
            return inside
        step /= 4
    raise InputError(f"a root of {p} lies within {format_fraction(eps)} of the boundary of the rectangle {rect}")
