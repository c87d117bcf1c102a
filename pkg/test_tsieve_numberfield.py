"""
Tests for number fields: exact element arithmetic, minimal polynomials,
embeddings and the modulus trichotomy.
"""
from fractions import Fraction

import numpy as np

from tsieve_arith import ComplexRectangle, IntPolynomial
from tsieve_error_handler import FieldArithmeticError, InputError
from tsieve_numberfield import (
    ElementOp, ModulusOrder, NumberField, compare_modulus, element_arith, minimal_poly, refine_embedding,
)


def sqrt2_field() -> NumberField:
    return NumberField(IntPolynomial((-2, 0, 1)), ComplexRectangle.from_corners(1, 2, 0, 0))


def gaussian_field() -> NumberField:
    return NumberField(IntPolynomial((1, 0, 1)), ComplexRectangle.from_corners(-1, 1, Fraction(1, 2), 2))


def cube_roots_field() -> NumberField:
    return NumberField(IntPolynomial((1, 1, 1)), ComplexRectangle.from_corners(-1, 0, 0, 1))


def test_field_validation():
    try:
        NumberField(IntPolynomial((-2, 0, 1)), ComplexRectangle.from_corners(-2, 2, -1, 1))
        assert False, "a rectangle with two roots must be rejected"
    except InputError as e:
        assert "root not isolated" in str(e)
    try:
        NumberField(IntPolynomial((1, 2, 1)), ComplexRectangle.from_corners(-2, 0, -1, 1))
        assert False, "a square defining polynomial must be rejected"
    except InputError:
        pass
    q = NumberField.rationals()
    assert q.degree == 1
    assert q.from_rational(Fraction(3, 2)).rational_value() == Fraction(3, 2)
    print("✓ field validation")


def test_element_arithmetic():
    K = sqrt2_field()
    r = K.generator()
    assert r * r == K.from_rational(2)
    unit = 1 + r
    assert unit.inverse() == r - 1
    assert unit * unit.inverse() == K.one()
    assert unit ** -2 == (unit ** 2).inverse()
    assert element_arith(unit, r, ElementOp.SUB) == K.one()
    assert element_arith(r, None, ElementOp.POW, 4) == K.from_rational(4)
    assert (r / 2).to_json() == ["0", "1/2"]
    print("✓ element arithmetic")


def test_arithmetic_errors():
    K = sqrt2_field()
    L = gaussian_field()
    try:
        K.one() / K.zero()
        assert False, "division by the zero element must fail"
    except FieldArithmeticError:
        pass
    try:
        K.generator() + L.generator()
        assert False, "mixing fields must fail"
    except FieldArithmeticError:
        pass
    try:
        K.element(["1"])
        assert False, "wrong coordinate count must fail"
    except InputError:
        pass
    print("✓ arithmetic errors")


def test_minimal_poly():
    K = sqrt2_field()
    r = K.generator()
    assert minimal_poly(r) == IntPolynomial((-2, 0, 1))
    assert minimal_poly(1 + r) == IntPolynomial((-1, -2, 1))
    assert minimal_poly(K.from_rational(Fraction(3, 2))) == IntPolynomial((-3, 2))
    w = cube_roots_field().generator()
    assert minimal_poly(w * w) == IntPolynomial((1, 1, 1))
    assert minimal_poly(-w) == IntPolynomial((1, -1, 1))
    print("✓ minimal polynomials")


def test_refine_embedding():
    r = sqrt2_field().generator()
    box = refine_embedding(r, Fraction(1, 10 ** 6))
    assert box.width < Fraction(1, 10 ** 6)
    assert box.re.lo ** 2 <= 2 <= box.re.hi ** 2
    i = gaussian_field().generator()
    assert refine_embedding(i, Fraction(1, 1000)).contains(0, 1)
    print("✓ embeddings")


def test_compare_modulus():
    K = sqrt2_field()
    r = K.generator()
    assert compare_modulus(r, K.one()) is ModulusOrder.GREATER
    assert compare_modulus(K.one(), r) is ModulusOrder.LESS
    assert compare_modulus(r - 1, K.one()) is ModulusOrder.LESS
    L = gaussian_field()
    i = L.generator()
    assert compare_modulus(i, L.one()) is ModulusOrder.EQUAL
    z = L.element([Fraction(3, 5), Fraction(4, 5)])
    assert compare_modulus(z, L.one()) is ModulusOrder.EQUAL
    assert compare_modulus(z, z.inverse()) is ModulusOrder.EQUAL
    assert compare_modulus(L.element([1, 1]), L.one()) is ModulusOrder.GREATER
    assert ModulusOrder.LESS.flipped() is ModulusOrder.GREATER
    print("✓ modulus trichotomy")


def cubic_field() -> NumberField:
    return NumberField(IntPolynomial((1, 0, -1, 1)), ComplexRectangle.from_corners(-1, Fraction(-1, 2), 0, 0))


def random_fields():
    return [
        sqrt2_field(),
        gaussian_field(),
        cube_roots_field(),
        cubic_field(),
        NumberField(IntPolynomial((1, 0, -1, 0, 1)), ComplexRectangle.from_corners(0, 1, 0, 1)),
    ]


def random_element(rng, field: NumberField):
    while True:
        a = field.element([Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4))) for _ in range(field.degree)])
        if not a.is_zero():
            return a


def test_minimal_poly_on_random_elements():
    rng = np.random.default_rng(31)
    checked = 0
    for field in random_fields():
        for _ in range(10):
            a = random_element(rng, field)
            mp = minimal_poly(a)
            value = field.zero()
            for c in reversed(mp.coeffs):
                value = value * a + c
            assert value.is_zero(), f"minimal polynomial of {a} does not vanish on it"
            assert field.degree % mp.degree == 0
            checked += 1
    print(f"✓ minimal polynomials vanish on {checked} random elements")


def test_compare_modulus_is_antisymmetric():
    rng = np.random.default_rng(37)
    for field in random_fields()[:4]:
        for _ in range(10):
            a, b = random_element(rng, field), random_element(rng, field)
            assert compare_modulus(b, a) is compare_modulus(a, b).flipped()
    x = cubic_field().generator()
    # the real root of x^3 - x^2 + 1 is about -0.7549
    assert compare_modulus(x, x - 1) is ModulusOrder.LESS
    assert compare_modulus(x - 1, x) is ModulusOrder.GREATER
    box = refine_embedding(x, Fraction(1, 10 ** 6))
    assert Fraction(-7549, 10000) < box.re.lo and box.re.hi < Fraction(-7548, 10000)
    print("✓ modulus comparison is antisymmetric")


def test_embedding_of_products():
    rng = np.random.default_rng(41)
    eps = Fraction(1, 10 ** 4)
    for field in random_fields():
        for _ in range(6):
            a, b = random_element(rng, field), random_element(rng, field)
            product = refine_embedding(a, eps) * refine_embedding(b, eps)
            assert refine_embedding(a * b, eps).intersects(product)
    print("✓ embeddings of products")


if __name__ == "__main__":
    print("\n" + "="*60)
    print("NUMBER FIELD TESTS")
    print("="*60 + "\n")
    test_field_validation()
    test_element_arithmetic()
    test_arithmetic_errors()
    test_minimal_poly()
    test_refine_embedding()
    test_compare_modulus()
    test_minimal_poly_on_random_elements()
    test_compare_modulus_is_antisymmetric()
    test_embedding_of_products()
    print("\nAll number field tests passed!")
