"""
Tests for the six-term system, vanishing-subsum types and the pairing and
equal-modulus instance checks.
"""
from fractions import Fraction

import numpy as np

from tsieve_arith import ComplexRectangle, IntPolynomial
from tsieve_error_handler import PreconditionError, TheoryViolation
from tsieve_lemma_lab import (
    PartitionType, SixTermSystem, build_lemma_sets, build_six_terms, enumerate_partition_types,
    equal_modulus_trinomial_check, lemma32_item1_check, lemma32_item2_check, lemma32_item2_witnesses,
    primitive_vanishing_subsets, vanishing_subsum_decomposition,
)
from tsieve_numberfield import NumberField
from tsieve_unity import root_of_unity_test

Q = NumberField.rationals()


def cube_roots_field() -> NumberField:
    return NumberField(IntPolynomial((1, 1, 1)), ComplexRectangle.from_corners(-1, 0, 0, 1))


def rationals(*values):
    return tuple(Q.from_rational(v) for v in values)


def test_six_terms_match_determinant():
    alpha, beta, gamma = rationals(1, 2, 3)
    system = build_six_terms(alpha, beta, gamma, 2, 1)
    assert [t.rational_value() for t in system.terms] == [2, -4, -3, 9, 12, -18]
    assert system.total() == Q.from_rational(-2)

    rng = np.random.default_rng(5)
    for _ in range(500):
        values = []
        while len(values) < 3:
            v = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))
            if v:
                values.append(v)
        m, n = (int(x) for x in rng.choice(np.arange(1, 7), size=2, replace=False))
        a, b, c = values
        det = a ** m * (b ** n - c ** n) - a ** n * (b ** m - c ** m) + (b ** m * c ** n - b ** n * c ** m)
        total = build_six_terms(*rationals(a, b, c), m, n).total()
        assert total.rational_value() == det
    print("✓ six-term sum equals the determinant on 500 instances")


def test_partition_types():
    types = enumerate_partition_types()
    assert len(types) == 26
    signatures = [t.signature for t in types]
    assert signatures.count((3, 3)) == 10
    assert signatures.count((4, 2)) == 15
    assert signatures.count((6, 0)) == 1
    assert PartitionType((4, 5, 6), (1, 2, 3)).V == (1, 2, 3)
    try:
        PartitionType((1, 2), (3, 4))
        assert False, "not a partition of 1..6"
    except PreconditionError:
        pass
    print("✓ 26 admissible partition types")


def test_decomposition_of_synthetic_sums():
    four_two = SixTermSystem.from_terms(rationals(1, -1, 2, 3, -7, 2))
    result = vanishing_subsum_decomposition(four_two)
    assert (result.V, result.W) == ((3, 4, 5, 6), (1, 2))
    assert result.signature == (4, 2)

    three_three = SixTermSystem.from_terms(rationals(1, 1, -2, 1, 1, -2))
    result = vanishing_subsum_decomposition(three_three)
    assert (result.V, result.W) == ((1, 2, 3), (4, 5, 6))

    six = SixTermSystem.from_terms(rationals(1, 2, 4, 8, 16, -31))
    assert primitive_vanishing_subsets(six) == [63]
    assert vanishing_subsum_decomposition(six).signature == (6, 0)

    try:
        vanishing_subsum_decomposition(SixTermSystem.from_terms(rationals(1, 1, 1, 1, 1, 1)))
        assert False, "a non-vanishing sum has no decomposition"
    except PreconditionError:
        pass
    print("✓ synthetic decompositions")


def test_decomposition_rejects_pairs():
    # 1 and -1 share a class, so the sum splits into three vanishing pairs
    system = build_six_terms(*rationals(1, -1, 2), 4, 2)
    assert system.total().is_zero()
    try:
        vanishing_subsum_decomposition(system)
        assert False, "a (2,2,2) split must be reported"
    except TheoryViolation:
        pass
    print("✓ (2,2,2) split reported")


def test_pairing_check():
    assert lemma32_item1_check(*rationals(1, 2, 3), 2, 1)
    assert lemma32_item1_check(*rationals(1, -1, 3), 3, 1)
    print("✓ pairing check")


EXPONENTS = np.array([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])


def _random_bases(rng, field):
    while True:
        bases = []
        while len(bases) < 3:
            a = field.element([Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(field.degree)])
            if not a.is_zero():
                bases.append(a)
        alpha, beta, gamma = bases
        if not any(root_of_unity_test(x / y).is_root_of_unity for x, y in ((alpha, beta), (alpha, gamma), (beta, gamma))):
            return alpha, beta, gamma


def test_instance_checks_on_random_bases():
    rng = np.random.default_rng(17)
    gaussian = NumberField(IntPolynomial((1, 0, 1)), ComplexRectangle.from_corners(-1, 1, Fraction(1, 2), 2))
    for trial in range(200):
        field = Q if trial % 2 == 0 else gaussian
        alpha, beta, gamma = _random_bases(rng, field)
        m, n = (int(x) for x in rng.choice(EXPONENTS, size=2, replace=False))
        while True:
            m_prime, n_prime = (int(x) for x in rng.choice(EXPONENTS, size=2, replace=False))
            if (m_prime, n_prime) != (m, n):
                break
        assert lemma32_item1_check(alpha, beta, gamma, m, n), f"pairing check fails at {(alpha, beta, gamma, m, n)}"
        assert lemma32_item2_check(alpha, beta, gamma, m, n, m_prime, n_prime), \
            f"ratio check fails at {(alpha, beta, gamma, m, n, m_prime, n_prime)}"
    print("✓ pairing and ratio checks on 200 random instances")


def test_ratio_check():
    K = cube_roots_field()
    w = K.generator()
    alpha, beta, gamma = K.from_rational(2), 2 * w, 2 * w * w
    witnesses = lemma32_item2_witnesses(alpha, beta, gamma, 2, 1, 5, 1)
    assert ((1, 2, 3, 4, 5, 6), ()) in witnesses
    assert lemma32_item2_check(alpha, beta, gamma, 2, 1, 5, 1)

    sets = build_lemma_sets(*rationals(1, 2, 3), 2, 1, 3, 1)
    assert len(sets.S) == len(sets.S_prime) == 6
    assert lemma32_item2_check(*rationals(1, 2, 3), 2, 1, 3, 1)
    try:
        build_lemma_sets(*rationals(1, 2, 3), 2, 1, 2, 1)
        assert False, "identical exponent pairs must be rejected"
    except PreconditionError:
        pass
    print("✓ ratio check")


def test_equal_modulus_trinomial_check():
    K = cube_roots_field()
    w = K.generator()
    roots = (K.one(), w, w * w)
    # X^3 - 1 has three roots of modulus 1 and their cubes coincide
    assert equal_modulus_trinomial_check(*roots, 3, 1, K.zero(), K.from_rational(-1))
    try:
        equal_modulus_trinomial_check(K.from_rational(2), w, w * w, 3, 1, K.zero(), K.from_rational(-1))
        assert False, "2 is not a root of X^3 - 1"
    except PreconditionError:
        pass
    print("✓ equal-modulus check")


if __name__ == "__main__":
    print("\n" + "="*60)
    print("LEMMA LAB TESTS")
    print("="*60 + "\n")
    test_six_terms_match_determinant()
    test_partition_types()
    test_decomposition_of_synthetic_sums()
    test_decomposition_rejects_pairs()
    test_pairing_check()
    test_instance_checks_on_random_bases()
    test_ratio_check()
    test_equal_modulus_trinomial_check()
    print("\nAll lemma lab tests passed!")
