"""
Trinomial Sieve effective bounds.

Every estimate is carried in natural-log scale as a certified rational
enclosure, so constants such as 10^60 never materialize. Consumers that need
a conservative value read the upper end of a bound and the lower end of a
lower bound.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from tsieve_arith import LOG10, PI, RationalInterval, as_fraction, exp_enclosure, log_enclosure
from tsieve_error_handler import PreconditionError, SoundnessError
from tsieve_heights import HeightValue, height_of_element, log_modulus
from tsieve_numberfield import FieldElement, ModulusOrder, compare_modulus

logger = logging.getLogger("tsieve.bounds")

Real = Union[int, str, Fraction, RationalInterval]

MATVEEV_MIN_A = Fraction(4, 25)
BOUND_EPS = Fraction(1, 2 ** 60)


def _interval(value: Real) -> RationalInterval:
    if isinstance(value, HeightValue):
        return value.enclosure
    return RationalInterval.coerce(value if isinstance(value, RationalInterval) else as_fraction(value))


def _log(value: Real) -> RationalInterval:
    return log_enclosure(_interval(value), 96)


@dataclass(frozen=True)
class MatveevInput:
    """Parameters of the linear-forms lower bound; A_k may be exact or enclosures."""
    s: int
    d: int
    A: Tuple[RationalInterval, ...]
    B: RationalInterval

    def __post_init__(self):
        A = tuple(_interval(a) for a in self.A)
        B = _interval(self.B)
        if self.s < 1 or self.d < 1:
            raise PreconditionError("s and d must be positive")
        if len(A) != self.s:
            raise PreconditionError(f"expected {self.s} values A_k, got {len(A)}")
        if any(a.lo < MATVEEV_MIN_A for a in A):
            raise PreconditionError("every A_k must be at least 0.16")
        if B.lo < 1:
            raise PreconditionError("B must be at least 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)


@dataclass(frozen=True)
class CorollaryInput:
    d: int
    nu: int
    h_alpha: HeightValue

    def __post_init__(self):
        if self.d < 1 or self.nu < 1:
            raise PreconditionError("d and nu must be positive")


@dataclass(frozen=True)
class BoundReport:
    """Log-scale degree and height bounds.

    The chain forms come from the m-n / n estimates; the theorem forms are the
    rounded constants stated for the final result. The *_max fields are the
    smaller of the two.
    """
    d: int
    h_omega: HeightValue
    h_tilde: Optional[HeightValue]
    log_n_max: Optional[HeightValue]
    log_mn_max: Optional[HeightValue]
    log_degree_max: HeightValue
    log_height_max: HeightValue
    log_degree_chain: Optional[HeightValue] = None
    log_degree_theorem: Optional[HeightValue] = None
    log_height_chain: Optional[HeightValue] = None
    log_height_theorem: Optional[HeightValue] = None
    source: str = "chain"
    nu: Optional[int] = None

    def to_json(self) -> dict:
        out = {"source": self.source, "d": self.d, "h_omega": self.h_omega.to_json()}
        if self.nu is not None:
            out["nu"] = self.nu
        for key in ("h_tilde", "log_n_max", "log_mn_max", "log_degree_max", "log_height_max"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value.to_json()
        labelled = {
            "log_degree_max_chain": self.log_degree_chain,
            "log_degree_max_theorem": self.log_degree_theorem,
            "log_height_max_chain": self.log_height_chain,
            "log_height_max_theorem": self.log_height_theorem,
        }
        for key, value in labelled.items():
            if value is not None:
                out[key] = value.to_json()
        return out


def matveev_lower_bound(inp: MatveevInput) -> HeightValue:
    """log |Lambda| >= -2^(6s+20) d^2 (1 + log d) A_1 ... A_s (1 + log B)."""
    product = RationalInterval.point(1)
    for a in inp.A:
        product = product * a
    d = inp.d
    value = -(
        RationalInterval.point(2 ** (6 * inp.s + 20) * d * d)
        * (_log(d) + 1)
        * product
        * (_log(inp.B) + 1)
    )
    return HeightValue(value)


def power_difference_lower_bound(alpha: FieldElement, beta: FieldElement, k: int) -> HeightValue:
    """Lower bound for log|alpha^k - beta^k| when |alpha| >= |beta|.

    Strictly larger modulus: k log|alpha| - d^2 (h(alpha/beta) + 1).
    Equal moduli: k log|alpha| - 10^12 d^4 (h(alpha/beta) + 1) log(k + 1).
    """
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    order = compare_modulus(alpha, beta)
    if order is ModulusOrder.LESS:
        raise PreconditionError("|alpha| < |beta|: swap the arguments")
    if alpha ** k == beta ** k:
        raise PreconditionError("alpha^k = beta^k: the difference vanishes")
    d = alpha.field.degree
    h = height_of_element(alpha / beta, BOUND_EPS).enclosure
    log_alpha = log_modulus(alpha, BOUND_EPS)
    if order is ModulusOrder.GREATER:
        penalty = (h + 1) * (d * d)
    else:
        penalty = (h + 1) * (10 ** 12 * d ** 4) * _log(k + 1)
    return HeightValue(log_alpha * k - penalty)


def _chain_term(coefficient_of_log10: int, multiplier: int, d: int, h: RationalInterval) -> RationalInterval:
    return LOG10 * coefficient_of_log10 + (h + 1) * (multiplier * d * d)


def log_sum_upper(a: Real, b: Real) -> HeightValue:
    """Enclosure of log(e^a + e^b)."""
    a, b = _interval(a), _interval(b)
    high = a.max_with(b)
    low = a.min_with(b)
    # log(e^x + e^y) = max + log(1 + e^(min - max)); min - max <= 0
    diff = low - high
    diff = RationalInterval(diff.lo, min(diff.hi, Fraction(0)))
    return HeightValue(high + log_enclosure(exp_enclosure(diff, 96) + 1, 96))


def bound_chain(d: int, h_tilde: HeightValue, h_omega: HeightValue) -> BoundReport:
    """Degree and height bounds for a trinomial vanishing on a 3-class Omega."""
    if d < 1:
        raise PreconditionError("d must be positive")
    ht, ho = _interval(h_tilde), _interval(h_omega)
    log_n_max = _chain_term(50, 5, d, ht)
    log_mn_max = _chain_term(30, 3, d, ht)
    degree_chain = _chain_term(60, 5, d, ht)
    degree_theorem = _chain_term(60, 10, d, ho)
    height_chain = _chain_term(65, 10, d, ho)
    height_theorem = _chain_term(70, 10, d, ho)
    degree_max = degree_chain.min_with(degree_theorem)
    height_max = height_chain.min_with(height_theorem)

    if degree_max.hi < log_n_max.lo or degree_max.hi < log_mn_max.lo:
        raise SoundnessError("degree bound falls below the n or m-n bound")
    if degree_max.hi < log_sum_upper(log_n_max, log_mn_max).lo:
        raise SoundnessError("degree bound falls below the combined n + (m-n) bound")

    report = BoundReport(
        d=d,
        h_omega=HeightValue(ho),
        h_tilde=HeightValue(ht),
        log_n_max=HeightValue(log_n_max),
        log_mn_max=HeightValue(log_mn_max),
        log_degree_max=HeightValue(degree_max),
        log_height_max=HeightValue(height_max),
        log_degree_chain=HeightValue(degree_chain),
        log_degree_theorem=HeightValue(degree_theorem),
        log_height_chain=HeightValue(height_chain),
        log_height_theorem=HeightValue(height_theorem),
    )
    logger.info(f"bound chain: log m <= {float(degree_max.hi):.6g}, log h <= {float(height_max.hi):.6g}")
    return report


def corollary_bounds(inp: CorollaryInput) -> BoundReport:
    """Bounds for trinomials over K vanishing at one alpha with [K(alpha):K] = nu."""
    h = _interval(inp.h_alpha)
    multiplier = 10 * inp.nu ** 6
    degree = _chain_term(60, multiplier, inp.d, h)
    height = _chain_term(70, multiplier, inp.d, h)
    return BoundReport(
        d=inp.d,
        h_omega=HeightValue(h),
        h_tilde=None,
        log_n_max=None,
        log_mn_max=None,
        log_degree_max=HeightValue(degree),
        log_height_max=HeightValue(height),
        log_degree_theorem=HeightValue(degree),
        log_height_theorem=HeightValue(height),
        source="corollary",
        nu=inp.nu,
    )


def log_ratio_lower_bound(alpha: FieldElement, beta: FieldElement) -> HeightValue:
    """log|alpha/beta| >= exp(-d^2 (h(alpha/beta) + 1)) / 2 when |alpha| > |beta|."""
    if compare_modulus(alpha, beta) is not ModulusOrder.GREATER:
        raise PreconditionError("log_ratio_lower_bound needs |alpha| > |beta|")
    d = alpha.field.degree
    h = height_of_element(alpha / beta, BOUND_EPS).enclosure
    return HeightValue(exp_enclosure((h + 1) * (-d * d), 96) * Fraction(1, 2))


def mn_bound_given_n(d: int, h_tilde: Real, n: int) -> HeightValue:
    """log of the bound m - n <= 10^16 e^(2 d^2 (h~ + 1)) log(n + 1)."""
    if n < 1:
        raise PreconditionError("n must be positive")
    return HeightValue(_chain_term(16, 2, d, _interval(h_tilde)) + _log(_log(n + 1)))


def n_bound_given_mn(d: int, h_tilde: Real, mn: int, n: int) -> HeightValue:
    """log of the weaker bound n <= 10^20 e^(2 d^2 (h~ + 1)) (m - n) log(n + 1)."""
    if mn < 1 or n < 1:
        raise PreconditionError("m - n and n must be positive")
    return HeightValue(_chain_term(20, 2, d, _interval(h_tilde)) + _log(mn) + _log(_log(n + 1)))


def n_bound_stronger(d: int, h_tilde: Real, mn: int) -> HeightValue:
    """log of the alternative n <= 10 e^(2 d^2 (h~ + 1)) (m - n)."""
    if mn < 1:
        raise PreconditionError("m - n must be positive")
    return HeightValue(_chain_term(1, 2, d, _interval(h_tilde)) + _log(mn))


def _below(value: Fraction, log_bound: HeightValue) -> bool:
    """value <= e^bound, decided from the bound's lower end (conservative)."""
    if value <= 0:
        return True
    return log_enclosure(RationalInterval.point(value), 96).hi <= log_bound.lo


def check_hit_against_chain(report: BoundReport, m: int, n: int, height: HeightValue) -> bool:
    """A trinomial X^m + A X^n + B found on a 3-class Omega respects every bound."""
    checks = [
        _below(Fraction(m), report.log_degree_max),
        _below(height.hi, report.log_height_max),
    ]
    if report.log_n_max is not None:
        checks.append(_below(Fraction(n), report.log_n_max))
    if report.log_mn_max is not None:
        checks.append(_below(Fraction(m - n), report.log_mn_max))
    return all(checks)


def corollary_ten_to_eleven_envelope(k: int, h: Real = 0, d: int = 1) -> Tuple[HeightValue, HeightValue]:
    """Both sides of the intermediate |Lambda| estimate for the equal-modulus branch.

    Returns the linear-forms bound with s = 2, A = (pi d (h + 1), pi), B = k + 1
    and the envelope -10^11 d^4 (h + 1) log(k + 1). The envelope fails to
    dominate at k = 1 (about -7.18e10 against -6.93e10 for d = 1, h = 0); the
    10^12 constant of the published lower bound absorbs the difference.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    hh = _interval(h)
    matveev = matveev_lower_bound(MatveevInput(2, d, (PI * (hh + 1) * d, PI), RationalInterval.point(k + 1)))
    envelope = HeightValue(-((hh + 1) * (10 ** 11 * d ** 4)) * _log(k + 1))
    return matveev, envelope


def equal_modulus_constant_holds(k: int, h: Real = 0, d: int = 1, constant: int = 10 ** 12) -> bool:
    """The linear-forms bound is at least -constant d^4 (h + 1) log(k + 1)."""
    matveev, _ = corollary_ten_to_eleven_envelope(k, h, d)
    target = -((_interval(h) + 1) * (constant * d ** 4)) * _log(k + 1)
    return matveev.lo >= target.hi
