import pytest

from stable_pieces.errors import NonDivisible
from stable_pieces.weyl.polynomial import CountPolynomial


def test_normalized_factored_form() -> None:
    p = CountPolynomial.from_coeffs([0, -1, 0, 1])
    assert p.q_power == 1
    assert p.q_minus_one_power == 1
    assert p.cofactor == (1, 1)
    assert p.factored() == "q*(q-1)*(1+q)"
    assert str(p) == "-q+q^3"


def test_expanded_matches_factored() -> None:
    p = CountPolynomial(q_power=2, q_minus_one_power=3, cofactor=(1, 1, 1))
    for q in (2, 3, 4, 5, 7):
        assert p.evaluate(q) == sum(c * q**k for k, c in enumerate(p.coeffs))
    assert p.degree == 7
    assert p.leading_coefficient == 1


def test_equality_is_polynomial_equality() -> None:
    a = CountPolynomial.from_coeffs([1, 1]) * CountPolynomial.from_coeffs([-1, 1])
    b = CountPolynomial.from_coeffs([-1, 0, 1])
    assert a == b
    assert a + CountPolynomial.from_coeffs([1]) == CountPolynomial.monomial(2)


def test_zero() -> None:
    zero = CountPolynomial.zero()
    assert zero.is_zero()
    assert zero.evaluate(3) == 0
    assert zero.factored() == "0"
    assert zero + CountPolynomial.monomial(1) == CountPolynomial.monomial(1)
    assert (zero * CountPolynomial.monomial(4)).is_zero()


def test_shift_and_divide() -> None:
    p = CountPolynomial(q_power=1, q_minus_one_power=1, cofactor=(1, 1))
    assert p.shift(-1).coeffs == (-1, 0, 1)
    assert p.shift(2).q_power == 3
    assert p.divide_by_q_minus_one(1) == CountPolynomial.from_coeffs([0, 1, 1])
    with pytest.raises(NonDivisible):
        p.shift(-2)
    with pytest.raises(NonDivisible):
        p.divide_by_q_minus_one(2)


def test_json_and_text_forms() -> None:
    total = CountPolynomial.from_coeffs([1, 1, 1, 1])
    assert str(total) == "1+q+q^2+q^3"
    assert total.to_json() == {"factored": "1+q+q^2+q^3", "coeffs": [1, 1, 1, 1]}
    assert CountPolynomial.monomial(0).factored() == "1"
    assert CountPolynomial(q_power=2).factored() == "q^2"
    assert CountPolynomial(q_minus_one_power=2, cofactor=(2,)).factored() == "(q-1)^2*2"
