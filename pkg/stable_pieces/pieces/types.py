from dataclasses import dataclass
from typing import Any

from pydantic import BaseModel, Field

from stable_pieces.errors import InvalidTwistedPair
from stable_pieces.weyl import CountPolynomial, NodeSubset, WeylDatum, WeylElement


def subset_json(nodes: NodeSubset) -> list[int]:
    return sorted(nodes)


def subset_text(nodes: NodeSubset) -> str:
    return "{" + ",".join(str(i) for i in sorted(nodes)) + "}"


def element_json(x: WeylElement) -> list[int]:
    return list(x.word)


@dataclass(frozen=True)
class TwistedPair:
    """(J, y) with Ad(y) delta(J) = Jp simple and y in ^{Jp}W^{delta(J)}."""

    J: NodeSubset
    y: WeylElement
    Jp: NodeSubset

    @property
    def datum(self) -> WeylDatum:
        return self.y.datum

    @classmethod
    def create(cls, datum: WeylDatum, J: NodeSubset, y: WeylElement | None = None) -> "TwistedPair":
        J = frozenset(J)
        if not J <= datum.nodes:
            raise InvalidTwistedPair(f"J={subset_text(J)} is not a subset of {subset_text(datum.nodes)}.")
        y = datum.identity if y is None else y
        delta_J = datum.delta_subset(J)
        Jp, all_simple = datum.ad_subset(y, delta_J)
        if not all_simple:
            raise InvalidTwistedPair(
                f"Ad({y!r}) delta({subset_text(J)}) contains non-simple reflections."
            )
        if not datum.is_minimal(Jp, y, delta_J):
            raise InvalidTwistedPair(
                f"{y!r} is not minimal in its ({subset_text(Jp)}, {subset_text(delta_J)}) double coset."
            )
        return cls(J=J, y=y, Jp=Jp)

    def __repr__(self) -> str:
        return f"TwistedPair(J={subset_text(self.J)}, y={self.y!r}, Jp={subset_text(self.Jp)})"


@dataclass(frozen=True)
class PieceState:
    n: int
    J: NodeSubset
    Jp: NodeSubset
    y: WeylElement
    prevJ: NodeSubset

    def same_data(self, other: "PieceState") -> bool:
        return self.J == other.J and self.Jp == other.Jp and self.y == other.y


@dataclass(frozen=True)
class PieceStep:
    J: NodeSubset
    Jp: NodeSubset
    u: WeylElement


@dataclass(frozen=True)
class PieceDescriptor:
    """A stabilized sequence (J_n, Jp_n, u_n), n = 0..r, with its invariants."""

    pair: TwistedPair
    steps: tuple[PieceStep, ...]
    w: WeylElement
    J_inf: NodeSubset
    twist: WeylElement
    exponent: int
    count: CountPolynomial
    dim: int

    @property
    def r(self) -> int:
        return len(self.steps) - 1

    @property
    def us(self) -> tuple[WeylElement, ...]:
        return tuple(step.u for step in self.steps)

    def sort_key(self) -> tuple:
        return tuple(u.sort_key() for u in self.us)

    def partial_products(self) -> tuple[WeylElement, ...]:
        products = []
        current = self.w.datum.identity
        for u in self.us:
            current = current * u
            products.append(current)
        return tuple(products)

    def to_json(self) -> dict[str, Any]:
        return {
            "J": subset_json(self.pair.J),
            "Jprime": subset_json(self.pair.Jp),
            "y": element_json(self.pair.y),
            "steps": [
                {"Jn": subset_json(s.J), "Jpn": subset_json(s.Jp), "un": element_json(s.u)}
                for s in self.steps
            ],
            "w": element_json(self.w),
            "Jinf": subset_json(self.J_inf),
            "twist": element_json(self.twist),
            "exponent": self.exponent,
            "count": self.count.to_json(),
            "dim": self.dim,
        }

    def steps_text(self) -> str:
        return ";".join(f"({subset_text(s.J)},{subset_text(s.Jp)},{s.u!r})" for s in self.steps)


class SumCheck(BaseModel):
    """Both sides of sum_sigma q^l(w_sigma) = P(W^{Jp}) for one twisted pair."""

    J: list[int]
    Jprime: list[int]
    y: list[int]
    pieces: int
    lhs: CountPolynomial
    rhs: CountPolynomial
    injective: bool
    uncancelled: dict[int, tuple[int, int]] = Field(
        default_factory=dict, description="q -> (sum of piece counts, [G:P_J][G:P_Jp]|L_Jp|)"
    )

    @property
    def holds(self) -> bool:
        return (
            self.lhs == self.rhs
            and self.injective
            and all(left == right for left, right in self.uncancelled.values())
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "J": self.J,
            "Jprime": self.Jprime,
            "y": self.y,
            "pieces": self.pieces,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "injective": self.injective,
            "uncancelled": {str(q): list(sides) for q, sides in sorted(self.uncancelled.items())},
            "holds": self.holds,
        }
