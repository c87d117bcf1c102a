"""
Tests for Weil heights, the heights of Omega, and the Liouville and gap estimates.
"""
from fractions import Fraction

import numpy as np

from tsieve_arith import LOG2, ComplexRectangle, IntPolynomial, RationalInterval, log_enclosure
from tsieve_error_handler import InputError
from tsieve_heights import (
    HeightValue, OmegaSet, gap_lower_bound, height_of_element, height_of_projective_point, liouville_check,
    log_modulus, modulus_gap, omega_heights,
)
from tsieve_numberfield import NumberField

EPS = Fraction(1, 10 ** 12)


def fields():
    return [
        NumberField.rationals(),
        NumberField(IntPolynomial((-2, 0, 1)), ComplexRectangle.from_corners(1, 2, 0, 0)),
        NumberField(IntPolynomial((1, 0, 1)), ComplexRectangle.from_corners(-1, 1, Fraction(1, 2), 2)),
        NumberField(IntPolynomial((1, 1, 1)), ComplexRectangle.from_corners(-1, 0, 0, 1)),
        NumberField(IntPolynomial((-2, 0, 0, 1)), ComplexRectangle.from_corners(1, 2, 0, 0)),
        NumberField(IntPolynomial((1, 0, -1, 0, 1)), ComplexRectangle.from_corners(0, 1, 0, 1)),
    ]


def test_rational_heights():
    Q = NumberField.rationals()
    h2 = height_of_element(Q.from_rational(2), EPS)
    assert h2.overlaps(HeightValue(LOG2))
    h = height_of_element(Q.from_rational(Fraction(3, 2)), EPS)
    assert h.overlaps(HeightValue(log_enclosure(RationalInterval.point(3))))
    assert height_of_element(Q.one(), EPS) == HeightValue.exact(0)
    print("✓ rational heights")


def test_algebraic_heights():
    K = NumberField(IntPolynomial((-2, 0, 1)), ComplexRectangle.from_corners(1, 2, 0, 0))
    r = K.generator()
    assert height_of_element(r, EPS).overlaps(HeightValue(LOG2 * Fraction(1, 2)))
    unit = 1 + r
    h = height_of_element(unit, EPS)
    for n in (2, 3, -1, -2):
        hn = height_of_element(unit ** n, EPS)
        assert hn.overlaps(HeightValue(h.enclosure * abs(n))), f"h(a^{n}) != {abs(n)} h(a)"
    print("✓ h(a^n) = |n| h(a)")


def test_roots_of_unity_have_height_zero():
    w = NumberField(IntPolynomial((1, 1, 1)), ComplexRectangle.from_corners(-1, 0, 0, 1)).generator()
    i = NumberField(IntPolynomial((1, 0, 1)), ComplexRectangle.from_corners(-1, 1, Fraction(1, 2), 2)).generator()
    for root in (w, w * w, -w, i, -i):
        assert height_of_element(root, EPS) == HeightValue.exact(0)
    print("✓ roots of unity")


def test_projective_heights():
    Q = NumberField.rationals()
    point = tuple(Q.from_rational(c) for c in (1, 2, 3))
    scaled = tuple(Q.from_rational(c) for c in (2, 4, 6))
    log3 = HeightValue(log_enclosure(RationalInterval.point(3)))
    assert height_of_projective_point(point, EPS).overlaps(log3)
    assert height_of_projective_point(scaled, EPS).overlaps(log3)

    K = NumberField(IntPolynomial((-2, 0, 1)), ComplexRectangle.from_corners(1, 2, 0, 0))
    r = K.generator()
    # (1 : sqrt 2) has height (1/2) log 2 like sqrt 2 itself
    h = height_of_projective_point((K.one(), r), EPS)
    assert h.overlaps(HeightValue(LOG2 * Fraction(1, 2)))
    print("✓ projective heights")


def test_omega_heights():
    Q = NumberField.rationals()
    omega = OmegaSet(Q, tuple(Q.from_rational(c) for c in (1, 2, 3)))
    h_omega, h_tilde = omega_heights(omega, EPS)
    log3 = HeightValue(log_enclosure(RationalInterval.point(3)))
    assert h_omega.overlaps(log3)
    assert h_tilde.overlaps(log3)
    single = OmegaSet(Q, (Q.from_rational(5),))
    assert omega_heights(single, EPS)[1] == HeightValue.exact(0)
    print("✓ h(Omega), h~(Omega)")


def test_omega_validation():
    Q = NumberField.rationals()
    for bad in ((), (Q.zero(),), (Q.one(), Q.one())):
        try:
            OmegaSet(Q, bad)
            assert False, f"{bad} must be rejected"
        except InputError:
            pass
    print("✓ Omega validation")


def test_liouville_on_random_elements():
    rng = np.random.default_rng(20240617)
    field_list = fields()
    checked = 0
    while checked < 100:
        field = field_list[checked % len(field_list)]
        coords = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(field.degree)]
        a = field.element(coords)
        if a.is_zero():
            continue
        assert liouville_check(a)
        checked += 1
    print(f"✓ Liouville on {checked} random elements")


def test_height_of_products_and_sums():
    rng = np.random.default_rng(53)
    for field in fields():
        for _ in range(5):
            a, b = (field.element([Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
                                   for _ in range(field.degree)]) for _ in range(2))
            if a.is_zero() or b.is_zero():
                continue
            both = height_of_element(a, EPS).enclosure + height_of_element(b, EPS).enclosure
            assert height_of_element(a * b, EPS).lo <= both.hi
            if not (a + b).is_zero():
                assert height_of_element(a + b, EPS).lo <= (both + LOG2).hi
    print("✓ h(ab) <= h(a) + h(b) and h(a + b) <= h(a) + h(b) + log 2")


def test_modulus_gap():
    i = NumberField(IntPolynomial((1, 0, 1)), ComplexRectangle.from_corners(-1, 1, Fraction(1, 2), 2)).generator()
    z = (1 + i) / 2
    gap = gap_lower_bound(z)
    assert modulus_gap(z).hi < 0
    assert 0 < gap < 1
    # |z| = 1/sqrt 2, so |1 - |z|| is far above the gap
    assert 1 - Fraction(71, 100) > gap
    assert log_modulus(z, EPS).hi < 0
    print(f"✓ modulus gap {float(gap):.3e}")


if __name__ == "__main__":
    print("\n" + "="*60)
    print("HEIGHT TESTS")
    print("="*60 + "\n")
    test_rational_heights()
    test_algebraic_heights()
    test_roots_of_unity_have_height_zero()
    test_projective_heights()
    test_omega_heights()
    test_omega_validation()
    test_liouville_on_random_elements()
    test_height_of_products_and_sums()
    test_modulus_gap()
    print("\nAll height tests passed!")
