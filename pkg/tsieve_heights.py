"""
Trinomial Sieve heights.

Absolute logarithmic (Weil) heights of field elements and projective points,
the set heights h(Omega) and h~(Omega), and the Liouville and modulus-gap
estimates built on them. Every value is a certified rational enclosure in
natural-log scale.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Sequence, Tuple

import sympy
from sympy import Poly

from tsieve_arith import (
    LOG2, X, ComplexRectangle, RationalInterval, as_fraction, exp_enclosure, isolate_roots,
    log_enclosure, render_interval,
)
from tsieve_error_handler import InputError, PreconditionError, SoundnessError
from tsieve_numberfield import FieldElement, NumberField, minimal_poly, refine_embedding
from tsieve_unity import is_cyclotomic

logger = logging.getLogger("tsieve.heights")

T = sympy.Symbol("t")

# Refinement rounds before an enclosure that will not shrink is reported.
MAX_REFINEMENTS = 24


@dataclass(frozen=True)
class HeightValue:
    """A real quantity known through a certified rational enclosure (log scale)."""
    enclosure: RationalInterval

    @classmethod
    def exact(cls, value) -> "HeightValue":
        return cls(RationalInterval.point(value))

    @property
    def lo(self) -> Fraction:
        return self.enclosure.lo

    @property
    def hi(self) -> Fraction:
        return self.enclosure.hi

    @property
    def width(self) -> Fraction:
        return self.enclosure.width

    def overlaps(self, other: "HeightValue") -> bool:
        return self.enclosure.intersects(other.enclosure)

    def to_json(self) -> dict:
        return render_interval(self.enclosure)

    def __str__(self):
        return str(self.enclosure)


@dataclass(frozen=True)
class OmegaSet:
    """Finite set of distinct nonzero elements of one ambient field."""
    field: NumberField
    elements: Tuple[FieldElement, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        if not elements:
            raise InputError("Omega must contain at least one element")
        for i, a in enumerate(elements):
            if a.field != self.field:
                raise InputError(f"element {i} does not live in the ambient field")
            if a.is_zero():
                raise InputError(f"element {i} is the zero element; Omega must avoid 0")
        if len(set(elements)) != len(elements):
            raise InputError("Omega contains a duplicate element")
        object.__setattr__(self, "elements", elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, index: int) -> FieldElement:
        return self.elements[index]


def _prec_for(eps: Fraction, magnitude: int = 0) -> int:
    """Working precision that makes a log enclosure narrower than eps."""
    return max(64, eps.denominator.bit_length() - eps.numerator.bit_length() + magnitude + 24)


def _log_rational(value: Fraction, eps: Fraction) -> RationalInterval:
    magnitude = max(value.numerator.bit_length(), value.denominator.bit_length())
    return log_enclosure(RationalInterval.point(value), _prec_for(eps, magnitude.bit_length()))


def _half_log_max_one(square: RationalInterval, prec: int) -> RationalInterval:
    """Enclosure of log max(1, |z|) from an enclosure of |z|^2."""
    clipped = RationalInterval(max(square.lo, Fraction(1)), max(square.hi, Fraction(1)))
    return log_enclosure(clipped, prec) * Fraction(1, 2)


@lru_cache(maxsize=8192)
def height_of_element(a: FieldElement, eps: Fraction) -> HeightValue:
    """Absolute logarithmic height of ``a``, enclosed within eps.

    Mahler-measure form over the minimal polynomial P of degree k:
    h = (log|lc(P)| + sum over roots of log max(1, |root|)) / k.
    h(0) = 0 by convention; roots of unity get the exact value 0.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if a.is_zero():
        return HeightValue.exact(0)
    if a.is_rational():
        q = a.coords[0]
        return HeightValue(_log_rational(Fraction(max(abs(q.numerator), q.denominator)), eps))

    poly = minimal_poly(a)
    if is_cyclotomic(poly):
        return HeightValue.exact(0)

    k = poly.degree
    log_lc = _log_rational(Fraction(abs(poly.leading_coefficient)), eps / 4)
    step = min(eps, Fraction(1, 16))
    prec = _prec_for(eps, k.bit_length())
    for _ in range(MAX_REFINEMENTS):
        total = log_lc
        for box in isolate_roots(poly, step):
            total = total + _half_log_max_one(box.abs_squared(), prec)
        enclosure = total * Fraction(1, k)
        if enclosure.width < eps:
            lo = max(enclosure.lo, Fraction(0))
            return HeightValue(RationalInterval(lo, max(enclosure.hi, lo)))
        step /= 16
        prec += 4
    raise SoundnessError(f"height enclosure of {a} did not reach width {eps}")


def _conjugate_boxes(field: NumberField, step: Fraction) -> List[ComplexRectangle]:
    return isolate_roots(field.defining_poly, step)


def _evaluate_at(coords: Sequence[Fraction], box: ComplexRectangle) -> ComplexRectangle:
    result = ComplexRectangle.point(0)
    for c in reversed(coords):
        result = result * box + c
    return result


def _norm_content(coords: Sequence[FieldElement]) -> Fraction:
    """Content of the norm polynomial N(F) = prod over conjugates of sum a_i T^i.

    By Gauss's lemma its content carries the whole finite-place contribution.
    """
    field = coords[0].field
    scale = math.lcm(*(c.denominator for a in coords for c in a.coords))
    g_expr = sum(
        int(c * scale) * X ** j * T ** i
        for i, a in enumerate(coords)
        for j, c in enumerate(a.coords)
    )
    f_poly = field.defining_poly
    g_poly = Poly(g_expr, X, T)
    deg_x = g_poly.degree(X)
    res = sympy.resultant(f_poly.to_sympy().as_expr(), g_expr, X)
    norm = Poly(res, T, domain="QQ") * sympy.Rational(1, f_poly.leading_coefficient ** deg_x)
    if deg_x == 0:
        norm = Poly(g_expr, T, domain="QQ") ** field.degree
    numerators, denominators = [], []
    for c in norm.all_coeffs():
        q = as_fraction(c)
        if q:
            numerators.append(abs(q.numerator))
            denominators.append(q.denominator)
    content = Fraction(math.gcd(*numerators), math.lcm(*denominators))
    return content / Fraction(scale) ** field.degree


@lru_cache(maxsize=4096)
def _projective_height(coords: Tuple[FieldElement, ...], eps: Fraction) -> HeightValue:
    field = coords[0].field
    d = field.degree
    content = _norm_content(coords)
    finite = -_log_rational(content, eps / 4)

    nonzero = [a for a in coords if not a.is_zero()]
    if all(a.is_rational() for a in nonzero):
        largest = max(abs(a.coords[0]) for a in nonzero)
        total = _log_rational(largest, eps / 4) * d + finite
        return HeightValue(total * Fraction(1, d))

    step = min(eps, Fraction(1, 16))
    prec = _prec_for(eps, d.bit_length())
    for _ in range(MAX_REFINEMENTS):
        total = finite
        for box in _conjugate_boxes(field, step):
            largest = None
            for a in nonzero:
                square = _evaluate_at(a.coords, box).abs_squared()
                largest = square if largest is None else largest.max_with(square)
            if largest.lo > 0:
                total = total + log_enclosure(largest, prec) * Fraction(1, 2)
            else:
                total = None
                break
        if total is not None:
            enclosure = total * Fraction(1, d)
            if enclosure.width < eps:
                lo = max(enclosure.lo, Fraction(0))
                return HeightValue(RationalInterval(lo, max(enclosure.hi, lo)))
        step /= 16
        prec += 4
    raise PreconditionError("projective point vanishes at a conjugate; is the defining polynomial irreducible?")


def height_of_projective_point(coords: Sequence[FieldElement], eps) -> HeightValue:
    """h(a_0 : ... : a_n) over all places of the ambient field, enclosed within eps.

    Archimedean places come from enclosures of every conjugate of the field
    generator; finite places from the content of the norm polynomial.
    """
    coords = tuple(coords)
    if not coords:
        raise PreconditionError("empty projective point")
    if all(a.is_zero() for a in coords):
        raise PreconditionError("all coordinates of the projective point are zero")
    field = coords[0].field
    if any(a.field != field for a in coords):
        raise PreconditionError("projective coordinates live in different fields")
    return _projective_height(coords, as_fraction(eps))


def omega_heights(omega: OmegaSet, eps) -> Tuple[HeightValue, HeightValue]:
    """(h(Omega), h~(Omega)): max height of the elements and of their quotients."""
    eps = as_fraction(eps)
    h_omega = None
    for a in omega:
        h = height_of_element(a, eps).enclosure
        h_omega = h if h_omega is None else h_omega.max_with(h)
    h_tilde = RationalInterval.point(0)
    for a, b in combinations(omega.elements, 2):
        h_tilde = h_tilde.max_with(height_of_element(a / b, eps).enclosure)
    # h(a/b) <= h(a) + h(b)
    if h_tilde.lo > 2 * h_omega.hi:
        raise SoundnessError(f"h~(Omega) {h_tilde} exceeds 2 h(Omega) {h_omega}")
    logger.debug(f"h(Omega) = {h_omega}, h~(Omega) = {h_tilde}")
    return HeightValue(h_omega), HeightValue(h_tilde)


def log_modulus(a: FieldElement, eps: Fraction) -> RationalInterval:
    """Enclosure of log|a| for a nonzero element."""
    if a.is_zero():
        raise PreconditionError("log of the zero element")
    step = eps
    for _ in range(MAX_REFINEMENTS):
        square = refine_embedding(a, step).abs_squared()
        if square.lo > 0:
            return log_enclosure(square, _prec_for(eps)) * Fraction(1, 2)
        step /= 16
    raise SoundnessError(f"modulus of {a} does not separate from 0")


def liouville_check(a: FieldElement) -> bool:
    """No certified violation of exp(-k h(a)) <= |a| <= exp(k h(a)), k = deg a."""
    if a.is_zero():
        raise PreconditionError("liouville_check needs a nonzero element")
    eps = Fraction(1, 2 ** 40)
    k = minimal_poly(a).degree
    h = height_of_element(a, eps)
    log_abs = log_modulus(a, eps)
    ok = -k * h.hi <= log_abs.hi and log_abs.lo <= k * h.hi
    if not ok:
        logger.error(f"Liouville inequality refuted for {a}: log|a| in {log_abs}, h in {h}")
    return ok


def modulus_gap(theta: FieldElement) -> HeightValue:
    """Enclosure of -d^2 (h(theta) + log 2), d the ambient degree.

    Whenever |theta| != 1, |1 - |theta|| >= exp of the lower end.
    """
    if theta.is_zero():
        raise PreconditionError("modulus_gap needs a nonzero element")
    d = theta.field.degree
    h = height_of_element(theta, Fraction(1, 2 ** 32))
    return HeightValue((h.enclosure + LOG2) * (-d * d))


def gap_lower_bound(theta: FieldElement) -> Fraction:
    """Positive rational G with |1 - |theta|| >= G whenever |theta| != 1."""
    g = modulus_gap(theta).lo
    bound = exp_enclosure(RationalInterval.point(g), 64).lo
    if bound <= 0:
        raise SoundnessError(f"modulus gap for {theta} underflowed")
    return bound
