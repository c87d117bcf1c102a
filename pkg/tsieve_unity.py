"""
Trinomial Sieve roots of unity.
Cyclotomic recognition of single elements and the root-of-unity equivalence classes of Omega.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Tuple

from sympy import divisors, totient

from tsieve_arith import IntPolynomial
from tsieve_error_handler import PreconditionError, SoundnessError
from tsieve_numberfield import FieldElement, minimal_poly

logger = logging.getLogger("tsieve.unity")


@dataclass(frozen=True)
class UnityVerdict:
    is_root_of_unity: bool
    order: Optional[int] = None

    def __post_init__(self):
        if self.is_root_of_unity != (self.order is not None):
            raise SoundnessError("a unity verdict carries an order exactly when it is positive")

    def to_json(self) -> dict:
        return {"is_root_of_unity": self.is_root_of_unity, "order": self.order}


@dataclass(frozen=True)
class EquivalenceClassification:
    """Partition of Omega's indices (0-based) into root-of-unity classes."""
    classes: Tuple[Tuple[int, ...], ...]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_of(self, index: int) -> int:
        for c, members in enumerate(self.classes):
            if index in members:
                return c
        raise PreconditionError(f"index {index} is not classified")

    def representatives(self) -> List[int]:
        return [members[0] for members in self.classes]

    def to_json(self) -> dict:
        return {"class_count": self.class_count, "classes": [list(c) for c in self.classes]}


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPolynomial:
    """Phi_n by exact division of X^n - 1 by Phi_d for the proper divisors d of n."""
    if n < 1:
        raise PreconditionError(f"cyclotomic index must be positive, got {n}")
    poly = (IntPolynomial((-1,) + (0,) * (n - 1) + (1,))).to_sympy()
    for d in divisors(n)[:-1]:
        poly = poly.exquo(cyclotomic_poly(d).to_sympy())
    return IntPolynomial.from_sympy(poly)


@lru_cache(maxsize=None)
def _orders_with_totient(k: int) -> Tuple[int, ...]:
    # phi(N) >= sqrt(N/2), so phi(N) = k forces N <= 2k^2
    return tuple(n for n in range(1, 2 * k * k + 1) if int(totient(n)) == k)


def cyclotomic_order(poly: IntPolynomial) -> Optional[int]:
    """N when the primitive polynomial ``poly`` equals Phi_N, else None."""
    k = poly.degree
    if k < 1:
        return None
    if poly.leading_coefficient < 0:
        poly = -poly
    if poly.leading_coefficient != 1 or abs(poly.coeffs[0]) != 1:
        return None
    bound = comb(k, k // 2)
    if any(abs(c) > bound for c in poly.coeffs):
        return None
    for n in _orders_with_totient(k):
        if cyclotomic_poly(n) == poly:
            return n
    return None


def is_cyclotomic(poly: IntPolynomial) -> bool:
    return cyclotomic_order(poly) is not None


def root_of_unity_test(a: FieldElement) -> UnityVerdict:
    """Decide whether ``a`` is a root of unity, with its exact order."""
    if a.is_zero():
        raise PreconditionError("root_of_unity_test needs a nonzero element")
    order = cyclotomic_order(minimal_poly(a))
    if order is None:
        return UnityVerdict(False)
    return UnityVerdict(True, order)


def classify_omega(omega) -> EquivalenceClassification:
    """Group the elements of Omega by root-of-unity quotients.

    Each element is compared with the representative of every class found so
    far; the partition is then re-verified on all pairs.
    """
    elements = list(omega)
    classes: List[List[int]] = []
    for i, a in enumerate(elements):
        for members in classes:
            if root_of_unity_test(a / elements[members[0]]).is_root_of_unity:
                members.append(i)
                break
        else:
            classes.append([i])

    # transitivity check over every pair
    label: Dict[int, int] = {i: c for c, members in enumerate(classes) for i in members}
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            same = root_of_unity_test(elements[i] / elements[j]).is_root_of_unity
            if same != (label[i] == label[j]):
                raise SoundnessError(f"root-of-unity classes are not transitive at ({i}, {j})")

    classification = EquivalenceClassification(tuple(tuple(m) for m in classes))
    logger.info(f"Omega splits into {classification.class_count} equivalence classes")
    return classification
