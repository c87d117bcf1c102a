"""
Trinomial Sieve number fields.

A field is Q[x]/(f) for a user-supplied square-free integer polynomial f
together with an isolating rectangle that pins one complex root of f. That
root is the designated embedding: every element is evaluated at it.
Irreducibility of f is taken on trust; with a reducible f all results refer
to the ring Q[x]/(f).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import sympy
from sympy import Poly, QQ
from sympy.polys.polyerrors import NotInvertible

from tsieve_arith import (
    X, ComplexRectangle, IntPolynomial, as_fraction, count_roots_in,
    format_fraction, is_squarefree, isolate_roots, squarefree_part,
)
from tsieve_error_handler import FieldArithmeticError, InputError, PreconditionError

logger = logging.getLogger("tsieve.numberfield")

Y = sympy.Symbol("y")


class ModulusOrder(Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    def flipped(self) -> "ModulusOrder":
        if self is ModulusOrder.LESS:
            return ModulusOrder.GREATER
        if self is ModulusOrder.GREATER:
            return ModulusOrder.LESS
        return self


class ElementOp(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    POW = "pow"


@dataclass(frozen=True)
class NumberField:
    """Q[x]/(defining_poly) embedded in C through the root inside ``embedding``."""
    defining_poly: IntPolynomial
    embedding: ComplexRectangle

    def __post_init__(self):
        f = self.defining_poly
        if f.degree < 1:
            raise InputError(f"defining polynomial must have degree >= 1, got {f}")
        if not is_squarefree(f):
            raise InputError(f"defining polynomial {f} is not square-free")
        count = count_roots_in(f, self.embedding)
        if count != 1:
            raise InputError(f"root not isolated: the rectangle {self.embedding} contains {count} roots of {f}")

    @classmethod
    def rationals(cls) -> "NumberField":
        """Q presented as Q[x]/(x) with the root 0."""
        return cls(IntPolynomial((0, 1)), ComplexRectangle.point(0))

    @property
    def degree(self) -> int:
        return self.defining_poly.degree

    def element(self, coords: Sequence) -> "FieldElement":
        return FieldElement(self, tuple(as_fraction(c) for c in coords))

    def from_rational(self, value) -> "FieldElement":
        return FieldElement(self, (as_fraction(value),) + (Fraction(0),) * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    def one(self) -> "FieldElement":
        return self.from_rational(1)

    def generator(self) -> "FieldElement":
        if self.degree == 1:
            # x is the rational root of a linear f
            f = self.defining_poly.coeffs
            return self.from_rational(Fraction(-f[0], f[1]))
        return FieldElement(self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2))

    def element_from_poly(self, poly: Poly) -> "FieldElement":
        """Reduce a rational polynomial in x modulo f."""
        rem = Poly(poly, X, domain=QQ).rem(self._modulus())
        coeffs = [as_fraction(c) for c in reversed(rem.all_coeffs())] if not rem.is_zero else []
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def _modulus(self) -> Poly:
        return _modulus_poly(self.defining_poly)

    def reduction_table(self) -> Tuple[Fraction, ...]:
        return _monic_tail(self.defining_poly)

    def to_json(self) -> dict:
        return {
            "poly": list(self.defining_poly.coeffs),
            "root": {
                "re": [format_fraction(self.embedding.re.lo), format_fraction(self.embedding.re.hi)],
                "im": [format_fraction(self.embedding.im.lo), format_fraction(self.embedding.im.hi)],
            },
        }


@lru_cache(maxsize=256)
def _modulus_poly(f: IntPolynomial) -> Poly:
    return f.to_sympy().to_field()


@lru_cache(maxsize=256)
def _monic_tail(f: IntPolynomial) -> Tuple[Fraction, ...]:
    lc = f.leading_coefficient
    return tuple(Fraction(c, lc) for c in f.coeffs[:-1])


@dataclass(frozen=True)
class FieldElement:
    """Element of a NumberField in the power basis 1, x, ..., x^(d-1)."""
    field: NumberField
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        if len(coords) != self.field.degree:
            raise InputError(
                f"element has {len(coords)} coordinates, the field has degree {self.field.degree}"
            )
        object.__setattr__(self, "coords", coords)

    def _check_field(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise FieldArithmeticError("elements live in different fields")

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            self._check_field(other)
            return other
        return self.field.from_rational(other)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_one(self) -> bool:
        return self.coords[0] == 1 and not any(self.coords[1:])

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise PreconditionError("element is not rational")
        return self.coords[0]

    def to_sympy(self) -> Poly:
        return Poly.from_list([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coords)], X, domain=QQ)

    def __add__(self, other) -> "FieldElement":
        other = self._lift(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "FieldElement":
        other = self._lift(other)
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (self.coords[0] * other.coords[0],))
        product = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        product[i + j] += a * b
        tail = self.field.reduction_table()
        for k in range(2 * d - 2, d - 1, -1):
            t = product[k]
            if t:
                for i, c in enumerate(tail):
                    product[k - d + i] -= t * c
        return FieldElement(self.field, tuple(product[:d]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise FieldArithmeticError("division by zero element")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coords[0],))
        try:
            inv = self.to_sympy().invert(self.field._modulus())
        except (NotInvertible, ZeroDivisionError) as e:
            raise FieldArithmeticError(
                f"element is not invertible modulo {self.field.defining_poly}; is the defining polynomial irreducible?"
            ) from e
        return self.field.element_from_poly(inv)

    def __truediv__(self, other) -> "FieldElement":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        k = int(k)
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = self.field.one()
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def to_json(self):
        return [format_fraction(c) for c in self.coords]

    def __str__(self):
        if self.field.degree == 1:
            return format_fraction(self.coords[0])
        return str(self.to_sympy().as_expr())


def element_arith(a: FieldElement, b: Optional[FieldElement], op: ElementOp, k: Optional[int] = None) -> FieldElement:
    """Exact field arithmetic; POW raises ``a`` to the integer ``k`` and ignores ``b``."""
    op = ElementOp(op)
    if op is ElementOp.POW:
        if k is None:
            raise PreconditionError("pow needs an exponent")
        return a ** k
    a._check_field(b)
    if op is ElementOp.ADD:
        return a + b
    if op is ElementOp.SUB:
        return a - b
    if op is ElementOp.MUL:
        return a * b
    return a / b


def is_zero(a: FieldElement) -> bool:
    return a.is_zero()


@lru_cache(maxsize=8192)
def minimal_poly(a: FieldElement) -> IntPolynomial:
    """Primitive integer minimal polynomial of ``a`` with positive leading coefficient.

    Square-free part of the characteristic polynomial Res_x(f(x), y - g(x)).
    """
    if a.is_rational():
        q = a.coords[0]
        return IntPolynomial((-q.numerator, q.denominator))
    denominator = math.lcm(*(c.denominator for c in a.coords))
    g_expr = sum(int(c * denominator) * X ** i for i, c in enumerate(a.coords))
    f_expr = a.field.defining_poly.to_sympy().as_expr()
    charpoly = sympy.resultant(f_expr, denominator * Y - g_expr, X)
    return squarefree_part(IntPolynomial.from_sympy(Poly(charpoly, Y, domain="ZZ")))


@lru_cache(maxsize=1024)
def generator_box(field: NumberField, eps: Fraction) -> ComplexRectangle:
    """Rectangle of side < eps around the designated root of the defining polynomial."""
    step = eps
    while True:
        boxes = [box for box in isolate_roots(field.defining_poly, step) if box.intersects(field.embedding)]
        if len(boxes) == 1 and boxes[0].width < eps:
            box = boxes[0]
            if field.embedding.contains_rectangle(box):
                return box
        step /= 4


def _horner(coords: Tuple[Fraction, ...], box: ComplexRectangle, bits: int) -> ComplexRectangle:
    result = ComplexRectangle.point(0)
    for c in reversed(coords):
        result = (result * box + c).round_outward(bits)
    return result


@lru_cache(maxsize=65536)
def refine_embedding(a: FieldElement, eps: Fraction) -> ComplexRectangle:
    """Certified rectangle of side < eps containing the image of ``a``."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if a.is_rational():
        return ComplexRectangle.point(a.coords[0])
    step = eps
    while True:
        box = generator_box(a.field, step)
        bits = step.denominator.bit_length() + 32
        image = _horner(a.coords, box, bits)
        if image.width < eps:
            return image
        step /= 16


def compare_modulus(a: FieldElement, b: FieldElement) -> ModulusOrder:
    """Exact trichotomy for |a| versus |b|.

    Enclosures of |a/b|^2 are refined until they separate from 1. If |a/b| = 1
    the enclosure eventually fits inside (1 - G, 1 + G), where G is a certified
    lower bound for |1 - |a/b|| valid whenever |a/b| != 1.
    """
    if a.is_zero() or b.is_zero():
        raise PreconditionError("compare_modulus needs nonzero elements")
    a._check_field(b)
    theta = a / b
    if theta.is_rational():
        q = abs(theta.coords[0])
        if q < 1:
            return ModulusOrder.LESS
        return ModulusOrder.GREATER if q > 1 else ModulusOrder.EQUAL

    gap: Optional[Fraction] = None
    eps = Fraction(1, 64)
    while True:
        square = refine_embedding(theta, eps).abs_squared()
        if square.hi < 1:
            return ModulusOrder.LESS
        if square.lo > 1:
            return ModulusOrder.GREATER
        if gap is None:
            from tsieve_heights import gap_lower_bound
            gap = gap_lower_bound(theta)
            logger.debug(f"modulus gap for {theta}: {float(gap):.3e}")
        if 1 - gap < square.lo and square.hi < 1 + gap:
            return ModulusOrder.EQUAL
        eps = min(eps / (1 << 16), gap / 8)
