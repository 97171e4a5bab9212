from collections.abc import Iterable, Sequence
from typing import Any

import sympy
from pydantic import BaseModel, ConfigDict, Field

from stable_pieces.errors import NonDivisible

Q = sympy.Symbol("q")


def _poly(coeffs: Sequence[int]) -> sympy.Poly:
    # sympy wants the leading coefficient first
    return sympy.Poly(list(reversed(list(coeffs))) or [0], Q, domain=sympy.ZZ)


def _coeffs(poly: sympy.Poly) -> tuple[int, ...]:
    if poly.is_zero:
        return ()
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


class CountPolynomial(BaseModel):
    """q^a (q-1)^b P(q) with P(0) != 0 and P(1) != 0.

    The factored form is normalized, so two instances are equal exactly when
    they are equal as polynomials. ``cofactor`` lists P's coefficients from
    the constant term up; the zero polynomial has an empty cofactor.
    """

    model_config = ConfigDict(frozen=True)

    q_power: int = Field(default=0, ge=0)
    q_minus_one_power: int = Field(default=0, ge=0)
    cofactor: tuple[int, ...] = (1,)

    @classmethod
    def from_poly(cls, poly: sympy.Poly) -> "CountPolynomial":
        if poly.is_zero:
            return cls(cofactor=())
        q_power = 0
        while poly.eval(0) == 0:
            poly = sympy.Poly(sympy.quo(poly, sympy.Poly(Q, Q, domain=sympy.ZZ)), Q, domain=sympy.ZZ)
            q_power += 1
        q_minus_one_power = 0
        linear = sympy.Poly(Q - 1, Q, domain=sympy.ZZ)
        while poly.eval(1) == 0:
            poly = sympy.Poly(sympy.quo(poly, linear), Q, domain=sympy.ZZ)
            q_minus_one_power += 1
        return cls(
            q_power=q_power,
            q_minus_one_power=q_minus_one_power,
            cofactor=_coeffs(poly),
        )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "CountPolynomial":
        return cls.from_poly(_poly(list(coeffs)))

    @classmethod
    def monomial(cls, exponent: int) -> "CountPolynomial":
        return cls(q_power=exponent)

    @classmethod
    def zero(cls) -> "CountPolynomial":
        return cls(cofactor=())

    def is_zero(self) -> bool:
        return not self.cofactor

    def poly(self) -> sympy.Poly:
        if self.is_zero():
            return _poly([])
        return (
            sympy.Poly(Q**self.q_power * (Q - 1) ** self.q_minus_one_power, Q, domain=sympy.ZZ)
            * _poly(self.cofactor)
        )

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Expanded coefficients, constant term first."""
        return _coeffs(self.poly())

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -1
        return self.q_power + self.q_minus_one_power + len(self.cofactor) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.cofactor[-1] if self.cofactor else 0

    def evaluate(self, q: int) -> int:
        if self.is_zero():
            return 0
        cofactor = sum(c * q**k for k, c in enumerate(self.cofactor))
        return q**self.q_power * (q - 1) ** self.q_minus_one_power * cofactor

    def __add__(self, other: "CountPolynomial") -> "CountPolynomial":
        return CountPolynomial.from_poly(self.poly() + other.poly())

    def __mul__(self, other: "CountPolynomial") -> "CountPolynomial":
        if self.is_zero() or other.is_zero():
            return CountPolynomial.zero()
        return CountPolynomial.from_poly(_poly(self.cofactor) * _poly(other.cofactor)).model_copy(
            update={
                "q_power": self.q_power + other.q_power,
                "q_minus_one_power": self.q_minus_one_power + other.q_minus_one_power,
            }
        )

    def shift(self, exponent: int) -> "CountPolynomial":
        """Multiply by q^exponent; a negative exponent must divide exactly."""
        if self.is_zero():
            return self
        if self.q_power + exponent < 0:
            raise NonDivisible(f"q^{-exponent} does not divide {self}.")
        return self.model_copy(update={"q_power": self.q_power + exponent})

    def divide_by_q_minus_one(self, power: int) -> "CountPolynomial":
        if self.is_zero() or power == 0:
            return self
        if self.q_minus_one_power < power:
            raise NonDivisible(f"(q-1)^{power} does not divide {self}.")
        return self.model_copy(update={"q_minus_one_power": self.q_minus_one_power - power})

    def factored(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if self.q_power:
            parts.append("q" if self.q_power == 1 else f"q^{self.q_power}")
        if self.q_minus_one_power:
            parts.append("(q-1)" if self.q_minus_one_power == 1 else f"(q-1)^{self.q_minus_one_power}")
        if self.cofactor != (1,) or not parts:
            cofactor = _format_expanded(self.cofactor)
            compound = sum(1 for c in self.cofactor if c) > 1
            parts.append(f"({cofactor})" if parts and compound else cofactor)
        return "*".join(parts)

    def to_json(self) -> dict[str, Any]:
        return {"factored": self.factored(), "coeffs": list(self.coeffs)}

    def __str__(self) -> str:
        return _format_expanded(self.coeffs)


def _format_expanded(coeffs: Sequence[int]) -> str:
    """Ascending form, e.g. ``1+q+q^2+q^3`` or ``-q+q^3``."""
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        power = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        if k == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = power
        else:
            body = f"{abs(c)}*{power}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        text += f"{sign}{body}"
    return text
