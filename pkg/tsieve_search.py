"""
Trinomial Sieve search.

Decides which trinomials X^m + A X^n + B vanish on Omega. Omega with at most
two root-of-unity classes admits infinitely many (a witness divisor g(X^k) is
produced instead); otherwise every (m, n) up to the cap is solved exactly,
each hit is certified on all of Omega and typed by its vanishing subsums.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from tsieve_arith import RationalInterval, log_enclosure
from tsieve_bounds import BoundReport, bound_chain, check_hit_against_chain
from tsieve_config import DEFAULT_EPS, DEFAULT_MAX_DEGREE
from tsieve_error_handler import PreconditionError, SoundnessError, TheoryViolation, soundness_guard
from tsieve_heights import HeightValue, OmegaSet, height_of_projective_point, omega_heights
from tsieve_lemma_lab import PartitionType, build_six_terms, vanishing_subsum_decomposition
from tsieve_numberfield import FieldElement
from tsieve_unity import EquivalenceClassification, classify_omega, root_of_unity_test

logger = logging.getLogger("tsieve.search")

# (M, N) shapes tried for the example trinomials of an infinite family
FAMILY_SHAPES = ((2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 1), (5, 2))


class Recovery(Enum):
    INCONSISTENT = "Inconsistent"
    UNDERDETERMINED = "Underdetermined"


class Classification(Enum):
    INFINITE_FAMILY = "InfiniteFamily"
    FINITE_SEARCH = "FiniteSearch"


@dataclass(frozen=True)
class SearchRequest:
    omega: OmegaSet
    max_degree: int = DEFAULT_MAX_DEGREE
    emit_binomials: bool = True
    parallel_width: int = 1
    eps: Fraction = DEFAULT_EPS

    def __post_init__(self):
        if self.max_degree < 2:
            raise PreconditionError(f"max_degree must be at least 2, got {self.max_degree}")
        if self.parallel_width < 1:
            raise PreconditionError(f"parallel_width must be positive, got {self.parallel_width}")


@dataclass(frozen=True)
class CertifiedTrinomial:
    """X^m + A X^n + B vanishing on Omega, with the indices it was checked on."""
    m: int
    n: int
    A: FieldElement
    B: FieldElement
    height: HeightValue
    vanishing_certificate: Tuple[int, ...]
    subsum_type: Optional[PartitionType] = None

    @property
    def binomial(self) -> bool:
        return self.A.is_zero()

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "binomial": self.binomial,
            "height": self.height.to_json(),
            "vanishes_at": list(self.vanishing_certificate),
        }
        if self.subsum_type is not None:
            out["subsum_type"] = self.subsum_type.to_json()
        return out


@dataclass(frozen=True)
class FamilyWitness:
    """g(X^k) vanishes on Omega, deg g <= 2; examples are (m, n, A, B) with X^m + A X^n + B a multiple."""
    k: int
    g: Tuple[FieldElement, ...]
    examples: Tuple[Tuple[int, int, FieldElement, FieldElement], ...]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "g": [c.to_json() for c in self.g],
            "examples": [
                {"m": m, "n": n, "A": A.to_json(), "B": B.to_json()} for m, n, A, B in self.examples
            ],
        }


@dataclass(frozen=True)
class Completeness:
    kind: str
    cap: int

    def to_json(self) -> dict:
        return {"kind": self.kind, "up_to": self.cap}


@dataclass
class SearchAudit:
    """What happened to the (m, n) pairs that produced no hit."""
    inconsistent: int = 0
    underdetermined: int = 0
    zero_constant: int = 0
    binomials_skipped: int = 0

    def merge(self, other: "SearchAudit") -> None:
        self.inconsistent += other.inconsistent
        self.underdetermined += other.underdetermined
        self.zero_constant += other.zero_constant
        self.binomials_skipped += other.binomials_skipped

    def to_json(self) -> dict:
        return {
            "inconsistent": self.inconsistent,
            "underdetermined": self.underdetermined,
            "zero_constant": self.zero_constant,
            "binomials_skipped": self.binomials_skipped,
        }


@dataclass
class SearchOutcome:
    classification: Classification
    classes: EquivalenceClassification
    bound_report: Optional[BoundReport]
    hits: List[CertifiedTrinomial] = field(default_factory=list)
    completeness: Optional[Completeness] = None
    witness: Optional[FamilyWitness] = None
    audit: Optional[SearchAudit] = None

    def to_json(self) -> dict:
        out = {
            "classification": {
                "kind": self.classification.value,
                **self.classes.to_json(),
            },
            "family": "infinite" if self.classification is Classification.INFINITE_FAMILY else "finite",
        }
        if self.bound_report is not None:
            out["bounds"] = self.bound_report.to_json()
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        out["hits"] = [hit.to_json() for hit in self.hits]
        if self.completeness is not None:
            out["completeness"] = self.completeness.to_json()
        if self.audit is not None:
            out["audit"] = self.audit.to_json()
        return out


# ---------------------------------------------------------------------------
# Classification and coefficient recovery
# ---------------------------------------------------------------------------

def classify_and_bound(omega: OmegaSet, eps: Fraction = DEFAULT_EPS) -> Tuple[EquivalenceClassification, Optional[BoundReport]]:
    """Root-of-unity classes of Omega and, for three or more classes, the bound chain."""
    classes = classify_omega(omega)
    if classes.class_count <= 2:
        logger.warning(
            f"Omega has {classes.class_count} equivalence class(es): infinitely many trinomials vanish on it"
        )
        return classes, None
    h_omega, h_tilde = omega_heights(omega, eps)
    return classes, bound_chain(omega.field.degree, h_tilde, h_omega)


def _solve_rows(a: Sequence[FieldElement], c: Sequence[FieldElement]) -> Union[Tuple[FieldElement, FieldElement], Recovery]:
    """Solve A a_i + B = c_i exactly for all rows."""
    a0, c0 = a[0], c[0]
    j = next((i for i in range(1, len(a)) if a[i] != a0), None)
    if j is None:
        if all(ci == c0 for ci in c):
            return Recovery.UNDERDETERMINED
        return Recovery.INCONSISTENT
    da = a[j] - a0
    dc = c[j] - c0
    # every row must lie on the line through rows 0 and j
    for i in range(1, len(a)):
        if i == j:
            continue
        if (c[i] - c0) * da != dc * (a[i] - a0):
            return Recovery.INCONSISTENT
    A = dc / da
    B = c0 - A * a0
    return A, B


def recover_coefficients(omega: OmegaSet, m: int, n: int) -> Union[Tuple[FieldElement, FieldElement], Recovery]:
    """The unique (A, B) with w^m + A w^n + B = 0 on all of Omega, or why there is none."""
    if not m > n > 0:
        raise PreconditionError(f"need m > n > 0, got ({m}, {n})")
    a = [w ** n for w in omega]
    c = [-(w ** m) for w in omega]
    return _solve_rows(a, c)


def two_root_coefficients(alpha: FieldElement, beta: FieldElement, m: int, n: int) -> Tuple[FieldElement, FieldElement]:
    """A = -(alpha^m - beta^m)/(alpha^n - beta^n), B from alpha; needs alpha^n != beta^n."""
    an, bn = alpha ** n, beta ** n
    if an == bn:
        raise PreconditionError("alpha^n = beta^n: the two-root formula degenerates")
    am = alpha ** m
    A = -(am - beta ** m) / (an - bn)
    B = -am - A * an
    return A, B


def cross_check_two_root_formula(omega: OmegaSet, classes: EquivalenceClassification,
                                 m: int, n: int, A: FieldElement, B: FieldElement) -> bool:
    """Closed two-root formula against the linear solve, when it applies."""
    if classes.class_count < 2:
        return True
    first, second = classes.representatives()[:2]
    alpha, beta = omega[first], omega[second]
    if alpha ** n == beta ** n:
        return True
    return two_root_coefficients(alpha, beta, m, n) == (A, B)


# ---------------------------------------------------------------------------
# Parallel enumeration
# ---------------------------------------------------------------------------

def _blocks(max_degree: int, width: int) -> List[Tuple[int, int]]:
    ms = list(range(2, max_degree + 1))
    count = min(len(ms), max(1, width * 4))
    size = math.ceil(len(ms) / count)
    return [(ms[i], ms[min(i + size, len(ms)) - 1]) for i in range(0, len(ms), size)]


def _search_block(elements: Tuple[FieldElement, ...], m_lo: int, m_hi: int,
                  emit_binomials: bool) -> Tuple[List[Tuple[int, int, FieldElement, FieldElement]], SearchAudit]:
    """Solve every (m, n) with m_lo <= m <= m_hi; runs in a worker process."""
    powers = []
    for w in elements:
        table = [w.field.one(), w]
        for _ in range(2, m_hi + 1):
            table.append(table[-1] * w)
        powers.append(table)

    found = []
    audit = SearchAudit()
    for m in range(m_lo, m_hi + 1):
        c = [-table[m] for table in powers]
        for n in range(1, m):
            a = [table[n] for table in powers]
            solved = _solve_rows(a, c)
            if solved is Recovery.INCONSISTENT:
                audit.inconsistent += 1
                continue
            if solved is Recovery.UNDERDETERMINED:
                audit.underdetermined += 1
                continue
            A, B = solved
            if B.is_zero():
                audit.zero_constant += 1
                continue
            if A.is_zero() and not emit_binomials:
                audit.binomials_skipped += 1
                continue
            found.append((m, n, A, B))
    return found, audit


def _enumerate(req: SearchRequest) -> Tuple[List[Tuple[int, int, FieldElement, FieldElement]], SearchAudit]:
    elements = tuple(req.omega)
    blocks = _blocks(req.max_degree, req.parallel_width)
    found: List[Tuple[int, int, FieldElement, FieldElement]] = []
    audit = SearchAudit()
    if req.parallel_width == 1:
        results = [_search_block(elements, lo, hi, req.emit_binomials) for lo, hi in blocks]
    else:
        with ProcessPoolExecutor(max_workers=req.parallel_width) as pool:
            futures = [pool.submit(_search_block, elements, lo, hi, req.emit_binomials) for lo, hi in blocks]
            results = [f.result() for f in futures]
    for (lo, hi), (block_found, block_audit) in zip(blocks, results):
        logger.debug(f"block m={lo}..{hi}: {len(block_found)} candidate(s)")
        found.extend(block_found)
        audit.merge(block_audit)
    found.sort(key=lambda hit: (hit[0], hit[1]))
    return found, audit


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

def _vanishing_indices(omega: OmegaSet, m: int, n: int, A: FieldElement, B: FieldElement) -> Tuple[int, ...]:
    return tuple(i for i, w in enumerate(omega) if (w ** m + A * w ** n + B).is_zero())


def verify_trinomial(omega: OmegaSet, t: CertifiedTrinomial) -> bool:
    """Re-check a hit by exact arithmetic on every element of Omega."""
    try:
        if not t.m > t.n > 0 or t.B.is_zero():
            return False
        if t.A.field != omega.field or t.B.field != omega.field:
            return False
        if tuple(sorted(t.vanishing_certificate)) != tuple(range(len(omega))):
            return False
        return len(_vanishing_indices(omega, t.m, t.n, t.A, t.B)) == len(omega)
    except (PreconditionError, SoundnessError):
        return False


@soundness_guard
def _certify(omega: OmegaSet, classes: EquivalenceClassification, report: Optional[BoundReport],
             m: int, n: int, A: FieldElement, B: FieldElement, eps: Fraction) -> CertifiedTrinomial:
    certificate = _vanishing_indices(omega, m, n, A, B)
    if len(certificate) != len(omega):
        raise SoundnessError(f"certificate failed: X^{m} + A X^{n} + B does not vanish on all of Omega")
    if not cross_check_two_root_formula(omega, classes, m, n, A, B):
        raise SoundnessError(f"certificate failed: two-root formula disagrees at ({m}, {n})")
    one = omega.field.one()
    height = height_of_projective_point((one, A, B), eps)

    subsum_type = None
    if len(omega) >= 3 and classes.class_count >= 3:
        if A.is_zero():
            raise TheoryViolation(f"theory violation: binomial X^{m} + B vanishes on {classes.class_count} classes")
        alpha, beta, gamma = (omega[i] for i in classes.representatives()[:3])
        subsum_type = vanishing_subsum_decomposition(build_six_terms(alpha, beta, gamma, m, n))
    if report is not None and not check_hit_against_chain(report, m, n, height):
        raise TheoryViolation(f"theory violation: ({m}, {n}) exceeds the degree or height bound")
    return CertifiedTrinomial(m, n, A, B, height, certificate, subsum_type)


def run_search(req: SearchRequest) -> SearchOutcome:
    """Classify Omega, then either produce a family witness or certify every hit up to the cap."""
    classes, report = classify_and_bound(req.omega, req.eps)
    if classes.class_count <= 2:
        witness = family_witness(req.omega, classes)
        if not verify_family_witness(req.omega, witness):
            raise SoundnessError("family witness failed to re-validate")
        logger.warning("search skipped: Omega lies in an infinite family")
        return SearchOutcome(Classification.INFINITE_FAMILY, classes, None, witness=witness)

    logger.info(f"searching 0 < n < m <= {req.max_degree} with {req.parallel_width} worker(s)")
    found, audit = _enumerate(req)
    hits = [_certify(req.omega, classes, report, m, n, A, B, req.eps) for m, n, A, B in found]
    for hit in hits:
        if not verify_trinomial(req.omega, hit):
            raise SoundnessError(f"hit ({hit.m}, {hit.n}) failed to re-validate")

    cap_log = log_enclosure(RationalInterval.point(req.max_degree))
    if report is not None and cap_log.lo >= report.log_degree_max.hi:
        completeness = Completeness("TheoremComplete", req.max_degree)
    else:
        completeness = Completeness("CompleteUpToCap", req.max_degree)
    logger.info(f"search finished: {len(hits)} hit(s), {audit.inconsistent} inconsistent pair(s)")
    return SearchOutcome(Classification.FINITE_SEARCH, classes, report, hits, completeness, audit=audit)


# ---------------------------------------------------------------------------
# Infinite families and reciprocals
# ---------------------------------------------------------------------------

def _poly_from_roots(roots: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
    """Coefficients (constant first) of the monic polynomial with the given roots."""
    coeffs = [roots[0].field.one()]
    for r in roots:
        shifted = [roots[0].field.zero()] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] = shifted[i] - r * c
        coeffs = shifted
    return tuple(coeffs)


def _evaluate(coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    result = x.field.zero()
    for c in reversed(coeffs):
        result = result * x + c
    return result


def _family_examples(roots: Sequence[FieldElement], k: int) -> Tuple[Tuple[int, int, FieldElement, FieldElement], ...]:
    examples = []
    for M, N in FAMILY_SHAPES:
        if len(roots) == 1:
            u = roots[0]
            A = u.field.one()
            B = -(u ** M) - u ** N
        else:
            u, v = roots
            try:
                A, B = two_root_coefficients(u, v, M, N)
            except PreconditionError:
                continue
        if B.is_zero():
            continue
        examples.append((k * M, k * N, A, B))
        if len(examples) == 3:
            break
    return tuple(examples)


def family_witness(omega: OmegaSet, classes: EquivalenceClassification) -> FamilyWitness:
    """A divisor g(X^k), deg g <= 2, of infinitely many trinomials vanishing on Omega."""
    if classes.class_count > 2:
        raise PreconditionError("Omega has three or more classes; there is no infinite family")
    if len(omega) <= 2:
        k = 1
        roots = list(omega)
    else:
        k = 1
        for members in classes.classes:
            rep = omega[members[0]]
            for i in members[1:]:
                k = math.lcm(k, root_of_unity_test(omega[i] / rep).order)
        roots = [omega[members[0]] ** k for members in classes.classes]
    g = _poly_from_roots(roots)
    witness = FamilyWitness(k, g, _family_examples(roots, k))
    logger.info(f"family witness: k = {k}, deg g = {len(g) - 1}, {len(witness.examples)} example(s)")
    return witness


def verify_family_witness(omega: OmegaSet, witness: FamilyWitness) -> bool:
    if len(witness.g) - 1 > 2 or witness.k < 1:
        return False
    for w in omega:
        if not _evaluate(witness.g, w ** witness.k).is_zero():
            return False
    for m, n, A, B in witness.examples:
        if not m > n > 0 or B.is_zero():
            return False
        if len(_vanishing_indices(omega, m, n, A, B)) != len(omega):
            return False
    return True


def invert_omega(omega: OmegaSet) -> OmegaSet:
    return OmegaSet(omega.field, tuple(w.inverse() for w in omega))


def reciprocal_trinomial(t: CertifiedTrinomial) -> CertifiedTrinomial:
    """X^m + (A/B) X^(m-n) + 1/B, which vanishes on the inverses of Omega.

    The projective point (1 : A/B : 1/B) is (B : A : 1) rescaled, so the height
    is unchanged.
    """
    return CertifiedTrinomial(
        t.m, t.m - t.n, t.A / t.B, t.B.inverse(), t.height, t.vanishing_certificate,
    )
