# Facade package exposing the Trinomial Sieve library surface
from tsieve_arith import ComplexRectangle, IntPolynomial, RationalInterval, isolate_roots, resultant
from tsieve_numberfield import FieldElement, ModulusOrder, NumberField, compare_modulus, minimal_poly
from tsieve_heights import HeightValue, OmegaSet, height_of_element, height_of_projective_point, omega_heights
from tsieve_unity import EquivalenceClassification, classify_omega, root_of_unity_test
from tsieve_bounds import BoundReport, bound_chain, corollary_bounds, matveev_lower_bound
from tsieve_lemma_lab import PartitionType, build_six_terms, vanishing_subsum_decomposition
from tsieve_search import (
    CertifiedTrinomial, Classification, SearchOutcome, SearchRequest, family_witness, recover_coefficients,
    run_search, verify_trinomial,
)
from tsieve_jobs import JobOptions, JobSpec, parse_job, run_job
from tsieve_error_handler import InputError, SoundnessError, TheoryViolation, TrinomialSieveError

__all__ = [
    "ComplexRectangle",
    "IntPolynomial",
    "RationalInterval",
    "isolate_roots",
    "resultant",
    "FieldElement",
    "ModulusOrder",
    "NumberField",
    "compare_modulus",
    "minimal_poly",
    "HeightValue",
    "OmegaSet",
    "height_of_element",
    "height_of_projective_point",
    "omega_heights",
    "EquivalenceClassification",
    "classify_omega",
    "root_of_unity_test",
    "BoundReport",
    "bound_chain",
    "corollary_bounds",
    "matveev_lower_bound",
    "PartitionType",
    "build_six_terms",
    "vanishing_subsum_decomposition",
    "CertifiedTrinomial",
    "Classification",
    "SearchOutcome",
    "SearchRequest",
    "family_witness",
    "recover_coefficients",
    "run_search",
    "verify_trinomial",
    "JobOptions",
    "JobSpec",
    "parse_job",
    "run_job",
    "InputError",
    "SoundnessError",
    "TheoryViolation",
    "TrinomialSieveError",
]
