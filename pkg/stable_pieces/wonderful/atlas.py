import logging
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

from opentelemetry import trace
from opentelemetry.trace.status import Status, StatusCode
from pydantic import BaseModel

from stable_pieces.config import GuardConfig
from stable_pieces.errors import InvariantBreach, StablePiecesError, UsageError
from stable_pieces.pieces import PieceDescriptor, PieceEnumerator, TwistedPair
from stable_pieces.pieces.types import element_json, subset_json, subset_text
from stable_pieces.weyl import CountPolynomial, NodeSubset, WeylDatum, WeylElement

tracer = trace.get_tracer("stable_pieces.wonderful")

TOTAL_SAMPLE_QS = (2, 3, 4, 5)


@dataclass(frozen=True)
class CsIndex:
    """(J, sigma, J_inf, twist); the character sheaf slot is left abstract."""

    J: NodeSubset
    sigma_id: int
    J_inf: NodeSubset
    twist: WeylElement

    def to_json(self) -> dict[str, Any]:
        return {
            "J": subset_json(self.J),
            "sigma_id": self.sigma_id,
            "Jinf": subset_json(self.J_inf),
            "twist": element_json(self.twist),
        }


@dataclass(frozen=True)
class AtlasRow:
    J: NodeSubset
    sigma_id: int
    descriptor: PieceDescriptor
    quotient_count: CountPolynomial

    @property
    def dim(self) -> int:
        return self.quotient_count.degree

    @property
    def orbit_data(self) -> tuple[NodeSubset, WeylElement]:
        return self.descriptor.J_inf, self.descriptor.twist

    @property
    def cs_index(self) -> CsIndex:
        return CsIndex(self.J, self.sigma_id, self.descriptor.J_inf, self.descriptor.twist)

    def to_csv_row(self) -> dict[str, Any]:
        sigma = self.descriptor
        return {
            "J": subset_text(self.J),
            "sigma_id": self.sigma_id,
            "steps": sigma.steps_text(),
            "w": repr(sigma.w),
            "J_inf": subset_text(sigma.J_inf),
            "twist": repr(sigma.twist),
            "exponent": sigma.exponent,
            "count_factored": self.quotient_count.factored(),
            "dim": self.dim,
        }

    def to_json(self) -> dict[str, Any]:
        return {
            "J": subset_json(self.J),
            "sigma_id": self.sigma_id,
            "piece": self.descriptor.to_json(),
            "quotient_count": self.quotient_count.to_json(),
            "dim": self.dim,
        }


CSV_COLUMNS = ["J", "sigma_id", "steps", "w", "J_inf", "twist", "exponent", "count_factored", "dim"]


@dataclass(frozen=True)
class CompletionAtlas:
    datum: WeylDatum
    rows: tuple[AtlasRow, ...]
    total: CountPolynomial

    @property
    def expected_degree(self) -> int:
        return 2 * self.datum.num_positive + self.datum.rank

    @property
    def total_holds(self) -> bool:
        """The total counts a smooth projective variety of dimension 2N + |I|."""
        return self.total.degree == self.expected_degree and self.total.leading_coefficient == 1

    def to_json(self) -> dict[str, Any]:
        return {
            "type": self.datum.type_spec,
            "rows": [row.to_json() for row in self.rows],
            "total": self.total.to_json(),
            "total_holds": self.total_holds,
            "cs_index": [index.to_json() for index in cs_index(self)],
        }


def boundary_data(datum: WeylDatum, J: Iterable[int]) -> TwistedPair:
    """(J, y_J) with y_J the longest element of W^{delta(J)}; its target type is delta(J)*."""
    J = frozenset(J)
    y = datum.longest_in_W_upper(J)
    expected = datum.star(datum.delta_subset(J))
    image, all_simple = datum.ad_subset(y, datum.delta_subset(J))
    if not all_simple or image != expected:
        raise InvariantBreach(
            f"Ad({y!r}) delta({subset_text(J)}) = {subset_text(image)} is not delta(J)* = {subset_text(expected)}."
        )
    return TwistedPair.create(datum, J, y)


def build_atlas(datum: WeylDatum, guards: GuardConfig | None = None) -> CompletionAtlas:
    """Every piece of every boundary stratum, counted modulo its torus Delta_J."""
    if datum.torus_rank != datum.rank:
        raise UsageError(
            f"The completion atlas needs the adjoint group (torus rank {datum.rank}), got torus rank {datum.torus_rank}."
        )
    with tracer.start_as_current_span("wonderful.build_atlas") as span:
        span.set_attribute("datum.type", str(datum.type_spec))
        enumerator = PieceEnumerator(datum, guards)
        rows: list[AtlasRow] = []
        try:
            for J in sorted(datum.subsets(), key=lambda nodes: (-len(nodes), sorted(nodes))):
                for sigma_id, sigma in enumerate(enumerator.enumerate(boundary_data(datum, J))):
                    quotient = enumerator.piece_count(sigma, quotient_by_delta=True)
                    rows.append(AtlasRow(J=J, sigma_id=sigma_id, descriptor=sigma, quotient_count=quotient))
        except StablePiecesError as e:
            span.set_status(Status(StatusCode.ERROR, str(e)))
            span.record_exception(e)
            raise
        total = CountPolynomial.zero()
        for row in rows:
            total = total + row.quotient_count
        span.set_attribute("atlas.rows", len(rows))
        span.set_attribute("atlas.total", str(total))
        atlas = CompletionAtlas(datum=datum, rows=tuple(rows), total=total)
        if not atlas.total_holds:
            span.set_status(Status(StatusCode.ERROR, "atlas total is not monic of the expected degree"))
            logging.error(f"Atlas total {total} is not monic of degree {atlas.expected_degree}")
        return atlas


def cs_index(atlas: CompletionAtlas) -> list[CsIndex]:
    return [row.cs_index for row in atlas.rows]


class BoundaryTotal(BaseModel):
    """Sum of the piece counts over one stratum against the closed form
    [G:P_J][G:P_{J'}] |L_{J'}| / (q-1)^{|I|-|J|}."""

    J: list[int]
    pieces: int
    total: CountPolynomial
    expected: CountPolynomial
    samples: dict[int, tuple[int, int]]

    @property
    def holds(self) -> bool:
        return self.total.coeffs == self.expected.coeffs and all(a == b for a, b in self.samples.values())

    def to_json(self) -> dict[str, Any]:
        return {
            "J": self.J,
            "pieces": self.pieces,
            "total": self.total.to_json(),
            "expected": self.expected.to_json(),
            "samples": {str(q): list(pair) for q, pair in sorted(self.samples.items())},
            "holds": self.holds,
        }


def per_J_totals(atlas: CompletionAtlas, sample_qs: Iterable[int] = TOTAL_SAMPLE_QS) -> list[BoundaryTotal]:
    datum = atlas.datum
    enumerator = PieceEnumerator(datum)
    by_J: dict[NodeSubset, list[AtlasRow]] = {}
    for row in atlas.rows:
        by_J.setdefault(row.J, []).append(row)

    totals = []
    for J, rows in by_J.items():
        Jp = rows[0].descriptor.pair.Jp
        total = CountPolynomial.zero()
        for row in rows:
            total = total + row.quotient_count
        expected = (
            datum.poincare(datum.coset_reps(J))
            * datum.poincare(datum.coset_reps(Jp))
            * enumerator.levi_order(Jp)
        ).divide_by_q_minus_one(datum.rank - len(J))
        samples = {
            q: (sum(row.quotient_count.evaluate(q) for row in rows), expected.evaluate(q)) for q in sample_qs
        }
        totals.append(
            BoundaryTotal(J=subset_json(J), pieces=len(rows), total=total, expected=expected, samples=samples)
        )
    return totals
