"""
Trinomial Sieve jobs.

The JSON job schema read by the CLI, its exact parsing into fields and Omega,
and the mode dispatch that turns a job into an output document. Rationals
travel as "p/q" or integer strings in both directions; no floats ever appear
on the wire.
"""

import json
import logging
import time
import uuid
from dataclasses import dataclass
from fractions import Fraction
from typing import Annotated, List, Literal, Optional, Tuple

from pydantic import (
    AfterValidator, BaseModel, ConfigDict, Field, StrictBool, StrictInt, StringConstraints, ValidationError,
)

from tsieve_arith import ComplexRectangle, IntPolynomial, as_fraction, format_fraction
from tsieve_bounds import CorollaryInput, bound_chain, corollary_bounds
from tsieve_config import DEFAULT_EPS, DEFAULT_MAX_DEGREE, job_id_ctx_var
from tsieve_error_handler import InputError, SchemaError, TheoryViolation
from tsieve_heights import HeightValue, OmegaSet, height_of_element, liouville_check, omega_heights
from tsieve_lemma_lab import (
    build_lemma_sets, build_six_terms, lemma32_item1_check, lemma32_item2_check, lemma32_item2_witnesses,
    vanishing_subsum_decomposition,
)
from tsieve_numberfield import NumberField
from tsieve_search import (
    CertifiedTrinomial, Classification, SearchRequest, classify_and_bound, run_search, verify_trinomial,
)
from tsieve_unity import root_of_unity_test

logger = logging.getLogger("tsieve.jobs")

MODES = ("classify", "bounds", "search", "diagnose", "verify")


def _canonical_rational(value: str) -> str:
    try:
        return format_fraction(Fraction(value))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {value!r}")


RationalStr = Annotated[
    str,
    StringConstraints(strip_whitespace=True, pattern=r"^-?[0-9]+(/[0-9]+)?$"),
    AfterValidator(_canonical_rational),
]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RootSpec(_Strict):
    re: Tuple[RationalStr, RationalStr]
    im: Tuple[RationalStr, RationalStr]


class FieldSpec(_Strict):
    poly: List[StrictInt] = Field(min_length=2)
    root: RootSpec


class SearchSpec(_Strict):
    max_degree: Optional[StrictInt] = Field(default=None, ge=2)
    emit_binomials: StrictBool = True
    parallel_width: Optional[StrictInt] = Field(default=None, ge=1)


class BoundsSpec(_Strict):
    d: StrictInt = Field(ge=1)
    h_omega: RationalStr
    h_tilde: Optional[RationalStr] = None


class CorollarySpec(_Strict):
    d: StrictInt = Field(ge=1)
    nu: StrictInt = Field(ge=1)
    h_alpha: RationalStr


class DiagnoseSpec(_Strict):
    m: StrictInt = Field(ge=2)
    n: StrictInt = Field(ge=1)
    m_prime: Optional[StrictInt] = Field(default=None, ge=2)
    n_prime: Optional[StrictInt] = Field(default=None, ge=1)
    indices: Optional[Tuple[StrictInt, StrictInt, StrictInt]] = None


class HitSpec(BaseModel):
    # hits copied from a search output keep their height and certificate keys
    model_config = ConfigDict(extra="ignore", frozen=True)

    m: StrictInt
    n: StrictInt
    A: List[RationalStr]
    B: List[RationalStr]


class JobSpec(_Strict):
    mode: Literal["classify", "bounds", "search", "diagnose", "verify"] = "search"
    field: Optional[FieldSpec] = None
    elements: List[List[RationalStr]] = Field(default_factory=list)
    search: SearchSpec = SearchSpec()
    eps: Optional[RationalStr] = None
    bounds: Optional[BoundsSpec] = None
    corollary: Optional[CorollarySpec] = None
    diagnose: Optional[DiagnoseSpec] = None
    hits: Optional[List[HitSpec]] = None


@dataclass(frozen=True)
class JobOptions:
    """Command-line overrides; None defers to the job document, then the config."""
    jobs: Optional[int] = None
    default_jobs: int = 1
    max_degree: Optional[int] = None
    eps: Optional[Fraction] = None
    timing: bool = False
    default_max_degree: int = DEFAULT_MAX_DEGREE
    default_eps: Fraction = DEFAULT_EPS


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _schema_error(e: ValidationError) -> SchemaError:
    problems = []
    for err in e.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        problems.append(f"{path}: {err['msg']}")
    return SchemaError("job does not match the schema: " + "; ".join(problems))


def parse_job_document(document: dict) -> JobSpec:
    try:
        return JobSpec.model_validate(document)
    except ValidationError as e:
        raise _schema_error(e) from e


def parse_job(text: str) -> JobSpec:
    """Validated JobSpec from UTF-8 JSON text; the field and Omega are checked too."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(document, dict):
        raise SchemaError("a job must be a JSON object")
    spec = parse_job_document(document)
    field = build_field(spec)
    if spec.elements:
        build_omega(spec, field)
    return spec


def serialize_job(spec: JobSpec) -> str:
    """Canonical JSON form of a job."""
    return json.dumps(spec.model_dump(mode="json", exclude_none=True), sort_keys=True, separators=(",", ":"))


def build_field(spec: JobSpec) -> NumberField:
    if spec.field is None:
        return NumberField.rationals()
    root = spec.field.root
    box = ComplexRectangle.from_corners(*(as_fraction(v) for v in root.re + root.im))
    return NumberField(IntPolynomial(tuple(spec.field.poly)), box)


def build_omega(spec: JobSpec, field: Optional[NumberField] = None) -> OmegaSet:
    field = field or build_field(spec)
    if not spec.elements:
        raise InputError("this mode needs at least one element in Omega")
    return OmegaSet(field, tuple(field.element(coords) for coords in spec.elements))


# ---------------------------------------------------------------------------
# Mode handlers
# ---------------------------------------------------------------------------

def _classify(omega: OmegaSet, eps: Fraction) -> dict:
    classes, report = classify_and_bound(omega, eps)
    h_omega, h_tilde = omega_heights(omega, eps)
    kind = Classification.FINITE_SEARCH if report is not None else Classification.INFINITE_FAMILY
    return {
        "classification": {"kind": kind.value, **classes.to_json()},
        "family": "finite" if report is not None else "infinite",
        "unity": [root_of_unity_test(a).to_json() for a in omega],
        "heights": {
            "elements": [height_of_element(a, eps).to_json() for a in omega],
            "h_omega": h_omega.to_json(),
            "h_tilde": h_tilde.to_json(),
        },
    }


def _bounds(spec: JobSpec, eps: Fraction) -> dict:
    out = {}
    if spec.bounds is not None:
        h_omega = HeightValue.exact(as_fraction(spec.bounds.h_omega))
        # h~ <= 2 h when no sharper value is supplied
        h_tilde = HeightValue.exact(as_fraction(spec.bounds.h_tilde)) if spec.bounds.h_tilde is not None \
            else HeightValue.exact(2 * h_omega.hi)
        out["bounds"] = bound_chain(spec.bounds.d, h_tilde, h_omega).to_json()
    elif spec.elements:
        omega = build_omega(spec)
        classes, report = classify_and_bound(omega, eps)
        out["classification"] = classes.to_json()
        out["family"] = "finite" if report is not None else "infinite"
        out["bounds"] = report.to_json() if report is not None else None
    if spec.corollary is not None:
        c = spec.corollary
        inp = CorollaryInput(c.d, c.nu, HeightValue.exact(as_fraction(c.h_alpha)))
        out["corollary"] = corollary_bounds(inp).to_json()
    if not out:
        raise InputError("a bounds job needs elements, explicit bound parameters or a corollary block")
    return out


def _search(spec: JobSpec, omega: OmegaSet, eps: Fraction, options: JobOptions) -> dict:
    max_degree = options.max_degree or spec.search.max_degree or options.default_max_degree
    width = options.jobs or spec.search.parallel_width or options.default_jobs
    request = SearchRequest(omega, max_degree, spec.search.emit_binomials, width, eps)
    return run_search(request).to_json()


def _diagnose(spec: JobSpec, omega: OmegaSet) -> dict:
    if spec.diagnose is None:
        raise InputError("a diagnose job needs a 'diagnose' block with m and n")
    params = spec.diagnose
    indices = params.indices or (0, 1, 2)
    if len(omega) < 3 or any(not 0 <= i < len(omega) for i in indices) or len(set(indices)) != 3:
        raise InputError(f"diagnose needs three distinct element indices of Omega, got {list(indices)}")
    if not params.m > params.n:
        raise InputError("diagnose needs m > n")
    alpha, beta, gamma = (omega[i] for i in indices)

    system = build_six_terms(alpha, beta, gamma, params.m, params.n)
    six_terms = {
        "terms": [t.to_json() for t in system.terms],
        "total": system.total().to_json(),
        "vanishes": system.total().is_zero(),
    }
    if system.total().is_zero():
        six_terms["subsum_type"] = vanishing_subsum_decomposition(system).to_json()

    item1 = lemma32_item1_check(alpha, beta, gamma, params.m, params.n)
    out = {
        "indices": list(indices),
        "six_terms": six_terms,
        "pairing_check": item1,
        "unity": [root_of_unity_test(a).to_json() for a in omega],
        "liouville": [liouville_check(a) for a in omega],
    }
    checks = [item1] + out["liouville"]
    if params.m_prime is not None and params.n_prime is not None:
        mp, np_ = params.m_prime, params.n_prime
        sets = build_lemma_sets(alpha, beta, gamma, params.m, params.n, mp, np_)
        item2 = lemma32_item2_check(alpha, beta, gamma, params.m, params.n, mp, np_)
        out["ratio_check"] = {
            "holds": item2,
            "S": [x.to_json() for x in sets.S],
            "S_prime": [x.to_json() for x in sets.S_prime],
            "witnesses": [[list(T), list(U)] for T, U in lemma32_item2_witnesses(alpha, beta, gamma, params.m, params.n, mp, np_)],
        }
        checks.append(item2)
    if not all(checks):
        raise TheoryViolation(f"theory violation: a diagnostic check failed on elements {list(indices)}")
    return out


def _verify(spec: JobSpec, omega: OmegaSet) -> Tuple[dict, bool]:
    if not spec.hits:
        raise InputError("a verify job needs a non-empty 'hits' list")
    field = omega.field
    results = []
    for hit in spec.hits:
        A = field.element(hit.A)
        B = field.element(hit.B)
        candidate = CertifiedTrinomial(
            hit.m, hit.n, A, B, HeightValue.exact(0), tuple(range(len(omega))),
        )
        results.append({"m": hit.m, "n": hit.n, "valid": verify_trinomial(omega, candidate)})
    all_valid = all(r["valid"] for r in results)
    return {"verified": results, "all_valid": all_valid}, all_valid


def run_job(spec: JobSpec, options: JobOptions = JobOptions()) -> Tuple[str, bool]:
    """Run one job; returns the output JSON and whether every verified hit held."""
    job_id_ctx_var.set(uuid.uuid4().hex[:8])
    started = time.perf_counter()
    eps = options.eps or (as_fraction(spec.eps) if spec.eps is not None else options.default_eps)
    logger.info(f"running {spec.mode} job on {len(spec.elements)} element(s)")

    ok = True
    out = {"mode": spec.mode}
    if spec.mode == "bounds":
        out.update(_bounds(spec, eps))
    else:
        omega = build_omega(spec)
        out["field"] = omega.field.to_json()
        if spec.mode == "classify":
            out.update(_classify(omega, eps))
        elif spec.mode == "search":
            out.update(_search(spec, omega, eps, options))
        elif spec.mode == "diagnose":
            out.update(_diagnose(spec, omega))
        else:
            verified, ok = _verify(spec, omega)
            out.update(verified)

    if options.timing:
        out["timing"] = {"seconds": f"{time.perf_counter() - started:.3f}"}
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n", ok
