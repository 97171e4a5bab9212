import logging
from collections import Counter, defaultdict
from collections.abc import Iterator, Sequence
from itertools import product
from typing import Any

import numpy as np
import sympy
from opentelemetry import trace
from opentelemetry.trace.status import Status, StatusCode
from pydantic import BaseModel, Field, field_validator, model_validator

from stable_pieces.config import GuardConfig, ModelMode
from stable_pieces.errors import TooLarge
from stable_pieces.glmodel.classifiers import classify_line_hyperplane, classify_line_pair
from stable_pieces.glmodel.field import (
    Subspace,
    all_subspaces,
    gaussian_binomial,
    general_linear,
    gl_order,
    induced_map,
    mat_inverse,
    mat_mul,
    matrix_key,
)
from stable_pieces.glmodel.filtration import (
    Filtration,
    block_permutation,
    element_permutation,
    gl_datum,
    permutation_element,
    permutation_matrix,
    rel_pos,
)
from stable_pieces.glmodel.quadruple import (
    ModelRecord,
    ModelSignature,
    Quadruple,
    partial_positions_hold,
    trajectory,
)
from stable_pieces.pieces import PieceEnumerator, TwistedPair
from stable_pieces.pieces.types import subset_json
from stable_pieces.weyl import NodeSubset, WeylDatum, WeylElement

tracer = trace.get_tracer("stable_pieces.glmodel")


class ModelConfig(BaseModel):
    """Which quadruples to enumerate: block sizes of V_* and the block permutation sigma."""

    mode: ModelMode = "two_step_1dim"
    d: int = Field(default=2, ge=2)
    q: int = 2
    blocks: list[int] | None = None
    sigma: list[int] | None = None

    @field_validator("q")
    @classmethod
    def _prime_field(cls, q: int) -> int:
        if not sympy.isprime(q):
            raise ValueError(f"q must be a prime, got {q}")
        return q

    @model_validator(mode="after")
    def _fill_blocks(self) -> "ModelConfig":
        match self.mode:
            case "two_step_1dim":
                self.blocks, self.sigma = [1, self.d - 1], [1, 2]
            case "hyperplane_dual":
                self.blocks, self.sigma = [1, self.d - 1], [2, 1]
            case _:
                self.blocks = self.blocks or [1] * self.d
                self.sigma = self.sigma or list(range(1, len(self.blocks) + 1))
        is_permutation = sorted(self.sigma) == list(range(1, len(self.blocks) + 1))
        if any(b <= 0 for b in self.blocks) or sum(self.blocks) != self.d or not is_permutation:
            raise ValueError(f"blocks={self.blocks} / sigma={self.sigma} do not describe d={self.d}")
        return self

    @property
    def blocks_p(self) -> list[int]:
        """Block sizes of V'_*: block sigma(i) has the size of block i."""
        sizes = [0] * len(self.blocks)
        for i, size in enumerate(self.blocks):
            sizes[self.sigma[i] - 1] = size
        return sizes

    def dims(self) -> list[int]:
        return _cumulative(self.blocks)

    def dims_p(self) -> list[int]:
        return _cumulative(self.blocks_p)

    def size(self) -> int:
        """|Sigma|: pairs of flags times the choices of (a_i)."""
        total = _flag_count(self.blocks, self.q) * _flag_count(self.blocks_p, self.q)
        for size in self.blocks:
            total *= gl_order(size, self.q)
        return total


def _cumulative(blocks: Sequence[int]) -> list[int]:
    dims = [0]
    for size in blocks:
        dims.append(dims[-1] + size)
    return dims


def _flag_count(blocks: Sequence[int], q: int) -> int:
    remaining, count = sum(blocks), 1
    for size in blocks:
        count *= gaussian_binomial(remaining, size, q)
        remaining -= size
    return count


def _type_of_dims(dims: Sequence[int], d: int) -> NodeSubset:
    return frozenset(i for i in range(1, d) if i not in set(dims))


def all_flags(dims: Sequence[int], d: int, p: int) -> Iterator[Filtration]:
    """Every filtration with the given member dimensions."""
    by_dim = {k: list(all_subspaces(d, k, p)) for k in set(dims)}

    def extend(chain: list[Subspace]) -> Iterator[list[Subspace]]:
        if len(chain) == len(dims):
            yield chain
            return
        for candidate in by_dim[dims[len(chain)]]:
            if chain[-1] <= candidate:
                yield from extend(chain + [candidate])

    for chain in extend([Subspace.zero(d, p)]):
        yield Filtration(tuple(chain))


def model_twisted_pair(config: ModelConfig, datum: WeylDatum) -> TwistedPair:
    """J = type of V_*, y = the minimal representative of the block permutation."""
    J = _type_of_dims(config.dims(), config.d)
    Jp = _type_of_dims(config.dims_p(), config.d)
    block = permutation_element(datum, block_permutation(config.blocks, config.blocks_p, config.sigma))
    y = datum.min_double_coset(Jp, block, J)
    return TwistedPair.create(datum, J, y)


class Bucket(BaseModel):
    signature: list[dict[str, Any]]
    signature_text: str
    size: int
    matched_sigma: list[int] | None = None
    matched_text: str | None = None
    predicted: int | None = None
    labels: list[int] = Field(default_factory=list)


class PartitionResult(BaseModel):
    config: ModelConfig
    total: int
    buckets: list[Bucket]
    unmatched_descriptors: int
    classifier_agrees: bool | None
    partial_positions_hold: bool

    @property
    def verdict(self) -> bool:
        named = self.config.mode != "full"
        return (
            self.total == self.config.size()
            and all(b.matched_sigma is not None and b.size == b.predicted for b in self.buckets)
            and self.unmatched_descriptors == 0
            and self.classifier_agrees is not False
            and self.partial_positions_hold
            and (not named or len(self.buckets) == self.config.d)
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "config": self.config.model_dump(),
            "total": self.total,
            "buckets": [b.model_dump() for b in self.buckets],
            "unmatched_descriptors": self.unmatched_descriptors,
            "classifier_agrees": self.classifier_agrees,
            "partial_positions_hold": self.partial_positions_hold,
            "verdict": self.verdict,
        }


def _label(config: ModelConfig, Q: Quadruple) -> int | None:
    V1 = Q.V.members[1]
    match config.mode:
        case "two_step_1dim":
            return classify_line_pair(V1, Q.Vp.members[1], Q.a[1])
        case "hyperplane_dual":
            return classify_line_hyperplane(V1, Q.Vp.members[1], Q.a[1])
    return None


def _classifier_agrees(labels: dict[ModelSignature, set[int]]) -> bool:
    seen: set[int] = set()
    for found in labels.values():
        if len(found) != 1 or found & seen:
            return False
        seen |= found
    return True


def brute_force_partition(config: ModelConfig, guards: GuardConfig | None = None) -> PartitionResult:
    """Enumerate every quadruple of the configuration, bucket by signature and
    match the buckets against the enumerated pieces."""
    guards = guards or GuardConfig()
    with tracer.start_as_current_span("glmodel.brute_force_partition") as span:
        span.set_attribute("model.mode", config.mode)
        span.set_attribute("model.d", config.d)
        span.set_attribute("model.q", config.q)
        expected_size = config.size()
        span.set_attribute("model.size", expected_size)
        if expected_size > guards.max_quadruples:
            error = TooLarge(
                f"{expected_size} quadruples for d={config.d}, q={config.q} exceed the guard {guards.max_quadruples}."
            )
            span.set_status(Status(StatusCode.ERROR, str(error)))
            raise error

        datum = gl_datum(config.d)
        d, p = config.d, config.q
        max_iter = guards.refine_guard(d)
        general = {size: list(general_linear(size, p)) for size in set(config.blocks)}
        flags_p = list(all_flags(config.dims_p(), d, p))

        buckets: Counter[ModelSignature] = Counter()
        labels: dict[ModelSignature, set[int]] = defaultdict(set)
        positions_ok = True
        total = 0
        for V in all_flags(config.dims(), d, p):
            for Vp in flags_p:
                for maps in product(*(general[size] for size in config.blocks)):
                    Q = Quadruple(V=V, Vp=Vp, sigma=tuple(config.sigma), a=tuple(maps))
                    steps = trajectory(Q, datum, max_iter)
                    sig = ModelSignature(tuple(r for _, r in steps))
                    buckets[sig] += 1
                    total += 1
                    if not partial_positions_hold(steps, datum):
                        positions_ok = False
                    label = _label(config, Q)
                    if label is not None:
                        labels[sig].add(label)

        enumerator = PieceEnumerator(datum, guards)
        descriptors = enumerator.enumerate(model_twisted_pair(config, datum))
        by_key = {
            tuple(ModelRecord(J=s.J, Jp=s.Jp, u=s.u) for s in sigma.steps): sigma for sigma in descriptors
        }
        rows = []
        for sig, size in buckets.items():
            sigma = by_key.get(sig.records)
            rows.append(
                (
                    sigma.sort_key() if sigma else (),
                    str(sig),
                    Bucket(
                        signature=sig.to_json(),
                        signature_text=str(sig),
                        size=size,
                        matched_sigma=list(sigma.w.word) if sigma else None,
                        matched_text=repr(sigma.w) if sigma else None,
                        predicted=sigma.count.evaluate(config.q) if sigma else None,
                        labels=sorted(labels.get(sig, ())),
                    ),
                )
            )
        rows.sort(key=lambda row: (row[0] == (), row[0], row[1]))
        matched = {key for key in by_key if ModelSignature(key) in buckets}

        result = PartitionResult(
            config=config,
            total=total,
            buckets=[row[2] for row in rows],
            unmatched_descriptors=len(by_key) - len(matched),
            classifier_agrees=_classifier_agrees(labels) if config.mode != "full" else None,
            partial_positions_hold=positions_ok,
        )
        span.set_attribute("model.buckets", len(result.buckets))
        span.set_attribute("model.verdict", result.verdict)
        if total != expected_size:
            logging.error(f"Enumerated {total} quadruples, expected {expected_size}")
        if not result.verdict:
            span.set_status(Status(StatusCode.ERROR, "model partition disagrees with the pieces"))
        return result


def unipotent_radical(dims: Sequence[int], d: int, p: int) -> list[np.ndarray]:
    """U_P for P the stabilizer of the standard flag with these member dimensions."""
    steps = sorted(set(dims) | {0, d})
    block_of = [next(b for b in range(len(steps) - 1) if steps[b] <= k < steps[b + 1]) for k in range(d)]
    free = [(r, c) for r in range(d) for c in range(d) if block_of[r] < block_of[c]]
    radical = []
    for values in product(range(p), repeat=len(free)):
        matrix = np.identity(d, dtype=np.int64)
        for (r, c), value in zip(free, values):
            matrix[r, c] = value
        radical.append(matrix)
    return radical


def _dims_of_type(nodes: NodeSubset, d: int) -> list[int]:
    return [k for k in range(d + 1) if k not in nodes]


def _in_radical(g: np.ndarray, flag: Filtration) -> bool:
    if not flag.is_stabilized_by(g):
        return False
    return all(
        np.array_equal(induced_map(g, block, block), np.identity(block.dim, dtype=np.int64))
        for block in flag.blocks
    )


def measure_unipotent_quotient(d: int, q: int, J: NodeSubset, u: WeylElement, K: NodeSubset) -> int:
    """|U_P| / |U_P cap U_Q| for P standard of type J and Q = u P_K u^-1."""
    with tracer.start_as_current_span("glmodel.measure_unipotent_quotient") as span:
        radical = unipotent_radical(_dims_of_type(J, d), d, q)
        u_dot = permutation_matrix(element_permutation(u, d))
        u_inv = mat_inverse(u_dot, q)
        flag_K = Filtration.standard(_dims_of_type(K, d), d, q)
        shared = sum(1 for x in radical if _in_radical(mat_mul(mat_mul(u_inv, x, q), u_dot, q), flag_K))
        span.set_attribute("radical.size", len(radical))
        span.set_attribute("radical.shared", shared)
        return len(radical) // shared


class DoubleCosetCheck(BaseModel):
    d: int
    q: int
    J: list[int]
    Jprime: list[int]
    y: list[int]
    size: int
    single_double_coset: bool
    gamma_count: int
    levi_order: int

    @property
    def holds(self) -> bool:
        return self.single_double_coset and self.gamma_count == self.levi_order


def verify_double_coset(
    d: int,
    q: int,
    J: NodeSubset,
    Jp: NodeSubset,
    y: WeylElement,
    guards: GuardConfig | None = None,
) -> DoubleCosetCheck:
    """{g : pos(P', gPg^-1) = y} is P' y U_P, and splits into |L_{J'}(F_q)| (U_P', U_P) double cosets."""
    guards = guards or GuardConfig()
    with tracer.start_as_current_span("glmodel.verify_double_coset") as span:
        order = gl_order(d, q)
        if order > guards.max_group_order:
            error = TooLarge(f"|GL_{d}(F_{q})| = {order} exceeds the guard {guards.max_group_order}.")
            span.set_status(Status(StatusCode.ERROR, str(error)))
            raise error
        datum = y.datum
        flag, flag_p = (Filtration.standard(_dims_of_type(nodes, d), d, q) for nodes in (J, Jp))
        group = list(general_linear(d, q))
        parabolic_p = [g for g in group if flag_p.is_stabilized_by(g)]
        radical = unipotent_radical(_dims_of_type(J, d), d, q)
        radical_p = unipotent_radical(_dims_of_type(Jp, d), d, q)

        cell = {matrix_key(g): g for g in group if rel_pos(flag_p, flag.image(g), datum) == y}
        y_dot = permutation_matrix(element_permutation(y, d))
        generated = {
            matrix_key(mat_mul(mat_mul(a, y_dot, q), b, q)) for a in parabolic_p for b in radical
        }

        seen: set[tuple[int, ...]] = set()
        gamma = 0
        for key, g in cell.items():
            if key in seen:
                continue
            gamma += 1
            for a in radical_p:
                left = mat_mul(a, g, q)
                seen.update(matrix_key(mat_mul(left, b, q)) for b in radical)

        levi = 1
        for lower, upper in zip(flag_p.dims, flag_p.dims[1:]):
            levi *= gl_order(upper - lower, q)
        check = DoubleCosetCheck(
            d=d,
            q=q,
            J=subset_json(J),
            Jprime=subset_json(Jp),
            y=list(y.word),
            size=len(cell),
            single_double_coset=generated == set(cell),
            gamma_count=gamma,
            levi_order=levi,
        )
        span.set_attribute("cell.size", len(cell))
        span.set_attribute("cell.holds", check.holds)
        return check
