"""
Trinomial Sieve lemma lab.

Instance checkers for the combinatorics behind the finiteness argument: the
six-term determinant identity of three roots of a trinomial, its
decomposition into primitive vanishing subsums, the two multiset partition
statements about the sets S and S', and the equal-modulus statement.
Indices of the six terms are 1-based throughout, as in the identity.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from tsieve_error_handler import PreconditionError, SoundnessError, TheoryViolation
from tsieve_numberfield import FieldElement, ModulusOrder, compare_modulus
from tsieve_unity import root_of_unity_test

logger = logging.getLogger("tsieve.lemma_lab")

INDICES = (1, 2, 3, 4, 5, 6)
ALLOWED_SIGNATURES = ((3, 3), (4, 2), (6, 0))

# positions of the six products: (first base, exponent slot, second base, exponent slot)
# slot 0 means the first exponent (m), slot 1 the second (n)
_TERM_SHAPES = (
    ("alpha", 0, "beta", 1),
    ("alpha", 1, "beta", 0),
    ("alpha", 0, "gamma", 1),
    ("alpha", 1, "gamma", 0),
    ("beta", 0, "gamma", 1),
    ("beta", 1, "gamma", 0),
)
_TERM_SIGNS = (1, -1, -1, 1, 1, -1)


@dataclass(frozen=True)
class SixTermSystem:
    """x_1..x_6 = (a^m b^n, -a^n b^m, -a^m c^n, a^n c^m, b^m c^n, -b^n c^m)."""
    terms: Tuple[FieldElement, ...]
    alpha: Optional[FieldElement] = None
    beta: Optional[FieldElement] = None
    gamma: Optional[FieldElement] = None
    m: Optional[int] = None
    n: Optional[int] = None

    def __post_init__(self):
        if len(self.terms) != 6:
            raise PreconditionError(f"a six-term system needs 6 terms, got {len(self.terms)}")

    @classmethod
    def from_terms(cls, terms: Sequence[FieldElement]) -> "SixTermSystem":
        """Synthetic system, used to exercise the decomposition on chosen sums."""
        return cls(tuple(terms))

    def total(self) -> FieldElement:
        result = self.terms[0]
        for t in self.terms[1:]:
            result = result + t
        return result

    def subset_sum(self, indices: Sequence[int]) -> FieldElement:
        result = self.terms[0].field.zero()
        for i in indices:
            result = result + self.terms[i - 1]
        return result


@dataclass(frozen=True)
class PartitionType:
    """Split {1..6} = V u W into vanishing blocks; for (3,3) the index 1 is in V."""
    V: Tuple[int, ...]
    W: Tuple[int, ...]

    def __post_init__(self):
        V, W = tuple(sorted(self.V)), tuple(sorted(self.W))
        if set(V) & set(W) or set(V) | set(W) != set(INDICES):
            raise PreconditionError(f"({V}, {W}) is not a partition of 1..6")
        if (len(V), len(W)) == (3, 3) and 1 not in V:
            V, W = W, V
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "W", W)

    @property
    def signature(self) -> Tuple[int, int]:
        return (len(self.V), len(self.W))

    def to_json(self) -> dict:
        return {"V": list(self.V), "W": list(self.W), "signature": list(self.signature)}


@dataclass(frozen=True)
class LemmaSets:
    """S and S' with the positional correspondence x -> x'."""
    S: Tuple[FieldElement, ...]
    S_prime: Tuple[FieldElement, ...]

    def ratios(self) -> Tuple[FieldElement, ...]:
        return tuple(x / xp for x, xp in zip(self.S, self.S_prime))


def _check_nonzero(*elements: FieldElement) -> None:
    for e in elements:
        if e.is_zero():
            raise PreconditionError("alpha, beta, gamma must be nonzero")


def _check_exponents(m: int, n: int) -> None:
    if m == n or m == 0 or n == 0:
        raise PreconditionError(f"exponents must satisfy m != n and m, n != 0, got ({m}, {n})")


def _products(alpha: FieldElement, beta: FieldElement, gamma: FieldElement, m: int, n: int) -> List[FieldElement]:
    bases = {"alpha": alpha, "beta": beta, "gamma": gamma}
    powers: Dict[Tuple[str, int], FieldElement] = {}
    for name, base in bases.items():
        powers[(name, 0)] = base ** m
        powers[(name, 1)] = base ** n
    return [powers[(a, i)] * powers[(b, j)] for a, i, b, j in _TERM_SHAPES]


def build_six_terms(alpha: FieldElement, beta: FieldElement, gamma: FieldElement, m: int, n: int) -> SixTermSystem:
    """Terms of the expansion of det [[a^m, a^n, 1], [b^m, b^n, 1], [c^m, c^n, 1]]."""
    _check_nonzero(alpha, beta, gamma)
    _check_exponents(m, n)
    products = _products(alpha, beta, gamma, m, n)
    terms = tuple(p if s > 0 else -p for p, s in zip(products, _TERM_SIGNS))
    system = SixTermSystem(terms, alpha, beta, gamma, m, n)

    am, an = alpha ** m, alpha ** n
    bm, bn = beta ** m, beta ** n
    cm, cn = gamma ** m, gamma ** n
    determinant = am * (bn - cn) - an * (bm - cm) + (bm * cn - bn * cm)
    if system.total() != determinant:
        raise SoundnessError("six-term sum differs from the determinant")
    return system


def _masks_to_indices(mask: int) -> Tuple[int, ...]:
    return tuple(i + 1 for i in range(6) if mask >> i & 1)


def primitive_vanishing_subsets(system: SixTermSystem) -> List[int]:
    """Bitmasks of vanishing subsums with no vanishing proper subsum."""
    vanishing = []
    for mask in range(1, 64):
        if system.subset_sum(_masks_to_indices(mask)).is_zero():
            vanishing.append(mask)
    primitive = []
    for mask in vanishing:
        if not any(other != mask and other & mask == other for other in vanishing):
            primitive.append(mask)
    return primitive


def _block_partitions(remaining: int, blocks: List[int]) -> List[List[int]]:
    if not remaining:
        return [[]]
    lowest = remaining & -remaining
    out = []
    for block in blocks:
        if block & lowest and block & remaining == block:
            for rest in _block_partitions(remaining & ~block, blocks):
                out.append([block] + rest)
    return out


def vanishing_subsum_decomposition(system: SixTermSystem) -> PartitionType:
    """Type (V, W) of a vanishing six-term sum.

    Every partition of the positions into primitive vanishing blocks is
    enumerated. Among those with signature (3,3), (4,2) or (6,0) the one with
    the lexicographically least V wins. Anything else is a theory violation.
    """
    if not system.total().is_zero():
        raise PreconditionError("the six terms do not sum to zero")
    primitive = primitive_vanishing_subsets(system)
    candidates = []
    rejected = []
    for blocks in _block_partitions(63, primitive):
        sizes = sorted((bin(b).count("1") for b in blocks), reverse=True)
        if len(blocks) == 1:
            candidates.append(PartitionType(INDICES, ()))
        elif len(blocks) == 2 and tuple(sizes) in ALLOWED_SIGNATURES:
            first, second = (_masks_to_indices(b) for b in blocks)
            if len(first) < len(second):
                first, second = second, first
            candidates.append(PartitionType(first, second))
        else:
            rejected.append(tuple(sizes))
    if not candidates:
        raise TheoryViolation(f"theory violation: vanishing subsum decompositions {rejected} fall outside (3,3), (4,2), (6,0)")
    best = min(candidates, key=lambda p: p.V)
    logger.debug(f"six-term decomposition {best.signature}: V={best.V}")
    return best


def _base_quotient_is_unity(alpha: FieldElement, beta: FieldElement, gamma: FieldElement) -> bool:
    return any(
        root_of_unity_test(x / y).is_root_of_unity
        for x, y in ((alpha, beta), (alpha, gamma), (beta, gamma))
    )


def build_lemma_sets(alpha: FieldElement, beta: FieldElement, gamma: FieldElement,
                     m: int, n: int, m_prime: int, n_prime: int) -> LemmaSets:
    """S and S' built from the same bases with the two exponent pairs."""
    _check_nonzero(alpha, beta, gamma)
    _check_exponents(m, n)
    _check_exponents(m_prime, n_prime)
    if (m, n) == (m_prime, n_prime):
        raise PreconditionError("(m, n) and (m', n') must differ")
    return LemmaSets(
        tuple(_products(alpha, beta, gamma, m, n)),
        tuple(_products(alpha, beta, gamma, m_prime, n_prime)),
    )


def _perfect_matchings(items: Tuple[int, ...]) -> List[List[Tuple[int, int]]]:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for k, partner in enumerate(rest):
        for tail in _perfect_matchings(rest[:k] + rest[k + 1:]):
            out.append([(first, partner)] + tail)
    return out


def lemma32_item1_check(alpha: FieldElement, beta: FieldElement, gamma: FieldElement, m: int, n: int) -> bool:
    """A pairing of S with root-of-unity quotients forces a root-of-unity base quotient."""
    _check_nonzero(alpha, beta, gamma)
    _check_exponents(m, n)
    if _base_quotient_is_unity(alpha, beta, gamma):
        return True
    S = _products(alpha, beta, gamma, m, n)
    unity_pair = {
        (i, j): root_of_unity_test(S[i - 1] / S[j - 1]).is_root_of_unity
        for i, j in combinations(INDICES, 2)
    }
    for matching in _perfect_matchings(INDICES):
        if all(unity_pair[pair] for pair in matching):
            logger.error(f"pairing {matching} has root-of-unity quotients but no base quotient does")
            return False
    return True


def lemma32_item2_witnesses(alpha: FieldElement, beta: FieldElement, gamma: FieldElement,
                            m: int, n: int, m_prime: int, n_prime: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Partitions S = T u U with x/x' constant on T and on U (T holds index 1)."""
    ratios = build_lemma_sets(alpha, beta, gamma, m, n, m_prime, n_prime).ratios()

    def constant(indices: Tuple[int, ...]) -> bool:
        return all(ratios[i - 1] == ratios[indices[0] - 1] for i in indices[1:])

    witnesses = []
    for mask in range(64):
        if not mask & 1:
            continue
        T = _masks_to_indices(mask)
        U = tuple(i for i in INDICES if i not in T)
        if constant(T) and (not U or constant(U)):
            witnesses.append((T, U))
    return witnesses


def lemma32_item2_check(alpha: FieldElement, beta: FieldElement, gamma: FieldElement,
                        m: int, n: int, m_prime: int, n_prime: int) -> bool:
    """A ratio-constant partition S = T u U forces a root-of-unity base quotient."""
    witnesses = lemma32_item2_witnesses(alpha, beta, gamma, m, n, m_prime, n_prime)
    if not witnesses:
        return True
    if _base_quotient_is_unity(alpha, beta, gamma):
        return True
    logger.error(f"partitions {witnesses} satisfy the hypothesis but no base quotient is a root of unity")
    return False


def equal_modulus_trinomial_check(alpha: FieldElement, beta: FieldElement, gamma: FieldElement,
                                  m: int, n: int, A: FieldElement, B: FieldElement) -> bool:
    """Three equal-modulus roots of X^m + A X^n + B have two equal m-th powers."""
    _check_nonzero(alpha, beta, gamma)
    if B.is_zero():
        raise PreconditionError("B must be nonzero")
    for name, root in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if not (root ** m + A * root ** n + B).is_zero():
            raise PreconditionError(f"{name} is not a root of X^{m} + A X^{n} + B")
    if compare_modulus(alpha, beta) is not ModulusOrder.EQUAL or compare_modulus(alpha, gamma) is not ModulusOrder.EQUAL:
        raise PreconditionError("alpha, beta, gamma do not share one modulus")
    am, bm, cm = alpha ** m, beta ** m, gamma ** m
    return am == bm or am == cm or bm == cm


def enumerate_partition_types() -> List[PartitionType]:
    """All admissible (V, W): 10 of type (3,3), 15 of type (4,2), 1 of type (6,0)."""
    types = []
    for V in combinations(INDICES, 3):
        if 1 in V:
            types.append(PartitionType(V, tuple(i for i in INDICES if i not in V)))
    for V in combinations(INDICES, 4):
        types.append(PartitionType(V, tuple(i for i in INDICES if i not in V)))
    types.append(PartitionType(INDICES, ()))
    return types
