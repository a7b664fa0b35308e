from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arrfree.exactnum import (
    CycNum,
    cyclotomic_polynomial,
    euler_phi,
    reduce_mod_cyclotomic,
)


def cyc(order, *coeffs):
    return CycNum(order, [Fraction(c) for c in coeffs])


class TestCyclotomicPolynomials:
    @pytest.mark.parametrize(
        "n, expected",
        [
            (1, (-1, 1)),
            (2, (1, 1)),
            (3, (1, 1, 1)),
            (4, (1, 0, 1)),
            (5, (1, 1, 1, 1, 1)),
            (6, (1, -1, 1)),
            (12, (1, 0, -1, 0, 1)),
        ],
    )
    def test_goldens(self, n, expected):
        assert cyclotomic_polynomial(n) == expected

    def test_degree_is_phi(self):
        for n in range(1, 20):
            assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n)

    def test_zero_order_rejected(self):
        with pytest.raises(ValueError):
            cyclotomic_polynomial(0)
        with pytest.raises(ValueError):
            euler_phi(0)


class TestReduction:
    def test_zeta3_squared(self):
        assert reduce_mod_cyclotomic([0, 0, 1], 3) == cyc(3, -1, -1)

    def test_zeta4_squared(self):
        assert reduce_mod_cyclotomic([0, 0, 1], 4) == cyc(4, -1, 0)

    def test_constant_embeds(self):
        assert reduce_mod_cyclotomic([5], 3) == cyc(3, 5, 0)

    def test_idempotent(self):
        value = reduce_mod_cyclotomic([Fraction(2, 3), -1, 4, 7], 5)
        again = reduce_mod_cyclotomic(value.coeffs, 5)
        assert value == again

    def test_high_powers_fold(self):
        # zeta_6^7 = zeta_6
        assert reduce_mod_cyclotomic([0] * 7 + [1], 6) == CycNum.zeta(6)

    def test_zero_order_rejected(self):
        with pytest.raises(ValueError):
            reduce_mod_cyclotomic([1], 0)


class TestFieldOperations:
    def test_zeta3_plus_square_is_minus_one(self):
        z = CycNum.zeta(3)
        assert z + z * z == cyc(3, -1, 0)

    def test_zeta3_times_zeta3(self):
        z = CycNum.zeta(3)
        assert z * z == cyc(3, -1, -1)

    def test_additive_inverse(self):
        a = CycNum.rational(5, Fraction(2, 3)) + CycNum.zeta(5, 3)
        assert (a + (-a)).is_zero()

    def test_inv_zeta3(self):
        z = CycNum.zeta(3)
        assert z.inv() == cyc(3, -1, -1)

    def test_inv_constant(self):
        assert CycNum.rational(3, 2).inv() == CycNum.rational(3, Fraction(1, 2))

    def test_inv_one_plus_i(self):
        i = CycNum.zeta(4)
        a = 1 + i
        inv = a.inv()
        assert a * inv == CycNum.one(4)
        # independent check: (1+i)(1-i) = 2, so the inverse is (1-i)/2
        assert inv == (1 - i) / 2

    def test_is_zero(self):
        z = CycNum.zeta(3)
        assert (1 + z + z * z).is_zero()
        i = CycNum.zeta(4)
        assert (i * i + 1).is_zero()
        # zeta - zeta^2 = 1 + 2 zeta after reduction
        assert z - z * z == cyc(3, 1, 2)
        assert not (z - z * z).is_zero()

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            CycNum.zero(3).inv()
        with pytest.raises(ZeroDivisionError):
            CycNum.one(3) / CycNum.zero(3)

    def test_order_mismatch_rejected(self):
        with pytest.raises(ValueError):
            CycNum.zeta(3) + CycNum.zeta(4)
        with pytest.raises(ValueError):
            CycNum.zeta(3) * CycNum.one(6)

    def test_int_and_fraction_coercion(self):
        z = CycNum.zeta(3)
        assert 1 + z == cyc(3, 1, 1)
        assert 2 * z == cyc(3, 0, 2)
        assert z - Fraction(1, 2) == cyc(3, Fraction(-1, 2), 1)
        assert 1 / (1 + z) * (1 + z) == 1

    def test_pow(self):
        z = CycNum.zeta(5)
        assert z**5 == CycNum.one(5)
        assert z**-1 == z.inv()
        assert z**0 == 1

    def test_embedding_matches_rational_arithmetic(self):
        a, b = Fraction(3, 4), Fraction(-7, 5)
        for order in (1, 2, 3, 4, 6):
            ca, cb = CycNum.rational(order, a), CycNum.rational(order, b)
            assert (ca + cb).as_rational() == a + b
            assert (ca * cb).as_rational() == a * b
            assert (ca / cb).as_rational() == a / b

    def test_lift(self):
        assert CycNum.zeta(2).lift(6) == CycNum.zeta(6, 3)
        assert CycNum.zeta(3).lift(6) == CycNum.zeta(6, 2)
        with pytest.raises(ValueError):
            CycNum.zeta(3).lift(4)

    def test_canonical_equality_and_hash(self):
        z = CycNum.zeta(3)
        left = (1 + z) * (1 + z)
        right = 1 + 2 * z + z * z
        assert left == right
        assert hash(left) == hash(right)

    def test_immutable(self):
        z = CycNum.zeta(3)
        with pytest.raises(AttributeError):
            z.order = 4


def _cyc_values(order):
    phi = euler_phi(order)
    coefficient = st.fractions(min_value=-4, max_value=4, max_denominator=4)
    return st.tuples(*[coefficient] * phi).map(lambda v: CycNum(order, v))


@st.composite
def _triples(draw):
    order = draw(st.sampled_from([1, 2, 3, 4, 5, 6]))
    values = _cyc_values(order)
    return draw(values), draw(values), draw(values)


class TestFieldAxioms:
    @given(_triples())
    @settings(max_examples=120, deadline=None)
    def test_ring_axioms(self, triple):
        a, b, c = triple
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a

    @given(_triples())
    @settings(max_examples=120, deadline=None)
    def test_multiplicative_inverse(self, triple):
        a, _, _ = triple
        if not a.is_zero():
            assert a * a.inv() == CycNum.one(a.order)

    @given(_triples())
    @settings(max_examples=60, deadline=None)
    def test_lift_is_a_homomorphism(self, triple):
        a, b, _ = triple
        target = a.order * 2
        assert (a + b).lift(target) == a.lift(target) + b.lift(target)
        assert (a * b).lift(target) == a.lift(target) * b.lift(target)
