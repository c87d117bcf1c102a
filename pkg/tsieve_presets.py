# tsieve_presets.py
"""
Built-in jobs for the worked examples. Each preset is a job document in the
same JSON shape the CLI reads, so presets go through the normal schema checks.
"""
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

import sympy

from tsieve_arith import ComplexRectangle, IntPolynomial, as_fraction
from tsieve_error_handler import InputError, SoundnessError
from tsieve_numberfield import FieldElement, NumberField

R, S = sympy.symbols("r s")

# Q(r, s) with r^3 = r^2 - 1 and s^2 = disc(X^3 - X^2 + 1) = -23
SPLITTING_RELATIONS = (R ** 3 - R ** 2 + 1, S ** 2 + 23)
_MONOMIALS = tuple((a, b) for b in range(2) for a in range(3))

# isolates r + s for the real r ~ -0.7549 and s = i sqrt(23)
SPLITTING_ROOT = {"re": ["-4/5", "-7/10"], "im": ["47/10", "49/10"]}


def _coordinates(expr) -> List:
    """Coordinates of expr in the basis r^a s^b of Q(r, s)."""
    _, remainder = sympy.reduced(sympy.expand(expr), list(SPLITTING_RELATIONS), R, S)
    poly = sympy.Poly(remainder, R, S)
    return [poly.coeff_monomial(R ** a * S ** b) for a, b in _MONOMIALS]


def _splitting_field() -> Tuple[NumberField, FieldElement, FieldElement]:
    """Q(theta), theta = r + s, with r and s written in the power basis of theta."""
    theta = R + S
    columns = [_coordinates(theta ** j) for j in range(7)]
    M = sympy.Matrix(6, 6, lambda i, j: columns[j][i])
    if M.det() == 0:
        raise SoundnessError("r + s does not generate the splitting field")
    tail = M.LUsolve(sympy.Matrix(columns[6]))
    monic = [-as_fraction(c) for c in tail] + [as_fraction(1)]
    field = NumberField(
        IntPolynomial.from_rational_coeffs(monic),
        _root_box(SPLITTING_ROOT),
    )
    r = field.element([as_fraction(c) for c in M.LUsolve(sympy.Matrix(_coordinates(R)))])
    s = field.element([as_fraction(c) for c in M.LUsolve(sympy.Matrix(_coordinates(S)))])
    return field, r, s


def _root_box(root: Dict[str, List[str]]) -> ComplexRectangle:
    return ComplexRectangle.from_corners(*(as_fraction(v) for v in root["re"] + root["im"]))


def _job(field: NumberField, elements, max_degree: int) -> dict:
    return {
        "field": field.to_json(),
        "elements": [e.to_json() for e in elements],
        "mode": "search",
        "search": {"max_degree": max_degree},
    }


@lru_cache(maxsize=None)
def _cubic_roots_preset() -> dict:
    field, r, s = _splitting_field()
    # the other roots of X^3 - X^2 + 1 are (1 - r +- s / f'(r)) / 2
    shift = s / (3 * r * r - 2 * r)
    roots = [r, (1 - r + shift) / 2, (1 - r - shift) / 2]
    for root in roots:
        if not (root ** 3 - root ** 2 + 1).is_zero():
            raise SoundnessError(f"{root} is not a root of X^3 - X^2 + 1")
    return _job(field, roots, 30)


def _cube_roots_preset() -> dict:
    return {
        "field": {"poly": [1, 1, 1], "root": {"re": ["-1", "0"], "im": ["0", "1"]}},
        "elements": [["1", "0"], ["0", "1"], ["-1", "-1"]],
        "mode": "search",
        "search": {"max_degree": 12},
    }


def _golden_preset() -> dict:
    return {
        "field": {"poly": [-1, -1, 1], "root": {"re": ["3/2", "2"], "im": ["0", "0"]}},
        "elements": [["0", "1"], ["1", "-1"]],
        "mode": "search",
        "search": {"max_degree": 12},
    }


def _rational_triple_preset() -> dict:
    return {
        "elements": [["1"], ["2"], ["3"]],
        "mode": "search",
        "search": {"max_degree": 10},
    }


PRESETS: Dict[str, Callable[[], dict]] = {
    "x3-x2+1": _cubic_roots_preset,
    "cube-roots": _cube_roots_preset,
    "golden": _golden_preset,
    "rational-triple": _rational_triple_preset,
}


def preset_job(name: str) -> dict:
    """A fresh job document for a named preset."""
    try:
        builder = PRESETS[name]
    except KeyError:
        raise InputError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
    job = builder()
    # callers may overwrite the mode
    return {**job, "search": dict(job["search"])}
