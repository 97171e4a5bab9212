import logging
import re
from collections.abc import Iterable, Sequence
from itertools import combinations
from typing import Literal

import numpy as np
from opentelemetry import trace
from opentelemetry.trace.status import Status, StatusCode

from stable_pieces.errors import InvalidAutomorphism, MixedDatum, NonFiniteType, NotMinimalRep
from stable_pieces.weyl.cartan import cartan_from_coxeter, coxeter_from_cartan, parse_type
from stable_pieces.weyl.polynomial import CountPolynomial

NodeSubset = frozenset[int]

MAX_POSITIVE_ROOTS = 10_000

_WORD_TOKEN = re.compile(r"s(\d+)")


class WeylElement:
    """An element of W stored as the permutation it induces on the roots.

    ``perm[k]`` is the index of w(beta_k); indices below ``datum.num_positive``
    are positive roots, index ``num_positive + k`` is -beta_k.
    """

    __slots__ = ("datum", "perm", "_hash")

    def __init__(self, datum: "WeylDatum", perm: tuple[int, ...]) -> None:
        self.datum = datum
        self.perm = perm
        self._hash = hash(perm)

    def _check_owner(self, other: "WeylElement") -> None:
        if other.datum is not self.datum:
            raise MixedDatum("Cannot combine elements of different Weyl data.")

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        self._check_owner(other)
        perm = self.perm
        return self.datum.element(tuple(perm[k] for k in other.perm))

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for k, image in enumerate(self.perm):
            inv[image] = k
        return self.datum.element(tuple(inv))

    @property
    def length(self) -> int:
        return self.datum.length_of(self.perm)

    @property
    def word(self) -> tuple[int, ...]:
        return self.datum.reduced_word(self)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.length, self.word)

    def is_identity(self) -> bool:
        return self.perm == self.datum.identity.perm

    def has_right_descent(self, i: int) -> bool:
        return self.perm[i - 1] >= self.datum.num_positive

    def has_left_descent(self, i: int) -> bool:
        return self.inverse().has_right_descent(i)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.datum is other.datum and self.perm == other.perm

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        word = self.word
        return " ".join(f"s{i}" for i in word) if word else "e"


class WeylDatum:
    """A finite Weyl group W with simple reflections indexed by I = {1..rank},
    a diagram automorphism delta and the rank of the ambient maximal torus.

    Immutable after construction; all queries are pure.
    """

    def __init__(
        self,
        cartan: np.ndarray,
        delta: Sequence[int] | None = None,
        torus_rank: int | None = None,
        type_spec: str | None = None,
    ) -> None:
        self.tracer = trace.get_tracer("stable_pieces.weyl")
        self.cartan = np.asarray(cartan, dtype=np.int64)
        self.rank = int(self.cartan.shape[0])
        self.nodes: NodeSubset = frozenset(range(1, self.rank + 1))
        self.type_spec = type_spec or "custom"
        self.coxeter_matrix = coxeter_from_cartan(self.cartan)
        self.torus_rank = self.rank if torus_rank is None else torus_rank
        if self.torus_rank < 0:
            raise ValueError("torus_rank must be non-negative.")
        self.delta = self._validate_delta(delta)
        self._delta_inverse = {image: i for i, image in self.delta.items()}

        with self.tracer.start_as_current_span("weyl.build") as span:
            span.set_attribute("weyl.type", self.type_spec)
            span.set_attribute("weyl.rank", self.rank)
            self.positive_roots = self._positive_roots()
            self.num_positive = len(self.positive_roots)
            self._root_index = {root: k for k, root in enumerate(self.positive_roots)}
            self._lengths: dict[tuple[int, ...], int] = {}
            self._elements: dict[tuple[int, ...], WeylElement] = {}
            self.identity = self.element(tuple(range(2 * self.num_positive)))
            self._simples = tuple(self._simple_reflection(i) for i in range(1, self.rank + 1))
            self.elements = self._close_group()
            self._words = self._reduced_words()
            self.elements = tuple(sorted(self.elements, key=WeylElement.sort_key))
            self.w0 = self.elements[-1]
            span.set_attribute("weyl.order", len(self.elements))
            span.set_attribute("weyl.nu", self.num_positive)

        if self.w0.length != self.num_positive:
            raise NonFiniteType("Longest element length disagrees with the number of positive roots.")

    # construction helpers

    def _validate_delta(self, delta: Sequence[int] | None) -> dict[int, int]:
        if delta is None:
            return {i: i for i in self.nodes}
        images = [int(i) for i in delta]
        if len(images) != self.rank or set(images) != set(self.nodes):
            raise InvalidAutomorphism(f"delta {images} is not a permutation of the nodes 1..{self.rank}.")
        mapping = {i + 1: image for i, image in enumerate(images)}
        for i in self.nodes:
            for j in self.nodes:
                if self.cartan[mapping[i] - 1, mapping[j] - 1] != self.cartan[i - 1, j - 1]:
                    raise InvalidAutomorphism(
                        f"delta does not preserve the Cartan matrix at nodes ({i},{j})."
                    )
        return mapping

    def _reflect(self, i: int, root: tuple[int, ...]) -> tuple[int, ...]:
        vector = np.array(root, dtype=np.int64)
        pairing = int(self.cartan[i] @ vector)
        vector[i] -= pairing
        return tuple(int(c) for c in vector)

    def _positive_roots(self) -> tuple[tuple[int, ...], ...]:
        simples = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        seen = set(simples)
        queue = list(simples)
        while queue:
            root = queue.pop()
            for i in range(self.rank):
                image = self._reflect(i, root)
                if min(image) < 0 or image in seen:
                    continue
                seen.add(image)
                queue.append(image)
                if len(seen) > MAX_POSITIVE_ROOTS:
                    raise NonFiniteType("Root closure does not terminate; the group is infinite.")
        return tuple(sorted(seen, key=lambda root: (sum(root), tuple(-c for c in root))))

    def _root_position(self, vector: tuple[int, ...]) -> int:
        if vector in self._root_index:
            return self._root_index[vector]
        negated = tuple(-c for c in vector)
        return self.num_positive + self._root_index[negated]

    def _simple_reflection(self, i: int) -> WeylElement:
        images = []
        for root in self.positive_roots:
            images.append(self._root_position(self._reflect(i - 1, root)))
        images += [(k + self.num_positive) % (2 * self.num_positive) for k in images]
        return self.element(tuple(images))

    def _close_group(self) -> list[WeylElement]:
        found = {self.identity.perm: self.identity}
        frontier = [self.identity]
        while frontier:
            next_frontier = []
            for w in frontier:
                for s in self._simples:
                    x = s * w
                    if x.perm not in found:
                        found[x.perm] = x
                        next_frontier.append(x)
            frontier = next_frontier
        return list(found.values())

    def _reduced_words(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        words: dict[tuple[int, ...], tuple[int, ...]] = {self.identity.perm: ()}
        for x in sorted(self.elements, key=lambda w: w.length):
            if x.perm in words:
                continue
            first = min(i for i in self.nodes if x.has_left_descent(i))
            words[x.perm] = (first,) + words[(self.simple(first) * x).perm]
        return words

    # elements

    def element(self, perm: tuple[int, ...]) -> WeylElement:
        cached = self._elements.get(perm)
        if cached is None:
            cached = WeylElement(self, perm)
            self._elements[perm] = cached
        return cached

    def length_of(self, perm: tuple[int, ...]) -> int:
        length = self._lengths.get(perm)
        if length is None:
            length = sum(1 for k in range(self.num_positive) if perm[k] >= self.num_positive)
            self._lengths[perm] = length
        return length

    def reduced_word(self, x: WeylElement) -> tuple[int, ...]:
        return self._words[x.perm]

    def simple(self, i: int) -> WeylElement:
        return self._simples[i - 1]

    def element_from_word(self, word: Iterable[int]) -> WeylElement:
        x = self.identity
        for i in word:
            if i not in self.nodes:
                raise ValueError(f"Node {i} is not in 1..{self.rank}.")
            x = x * self.simple(i)
        return x

    def parse_word(self, text: str) -> WeylElement:
        """Parse ``"s1 s2"``, ``"s1s2"``, ``"1 2"`` or ``"e"`` into an element."""
        cleaned = text.strip().lower()
        if cleaned in {"", "e", "id"}:
            return self.identity
        if "s" in cleaned:
            letters = [int(m) for m in _WORD_TOKEN.findall(cleaned)]
        else:
            letters = [int(t) for t in re.split(r"[\s,]+", cleaned) if t]
        return self.element_from_word(letters)

    # subsets

    def subsets(self) -> list[NodeSubset]:
        """All J of I, by decreasing size then lexicographically."""
        result = []
        for size in range(self.rank, -1, -1):
            result += [frozenset(c) for c in combinations(sorted(self.nodes), size)]
        return result

    def delta_subset(self, nodes: Iterable[int]) -> NodeSubset:
        return frozenset(self.delta[i] for i in nodes)

    def delta_inverse_subset(self, nodes: Iterable[int]) -> NodeSubset:
        return frozenset(self._delta_inverse[i] for i in nodes)

    def parabolic(self, nodes: Iterable[int]) -> tuple[WeylElement, ...]:
        allowed = frozenset(nodes)
        return tuple(w for w in self.elements if set(w.word) <= allowed)

    # operations

    def min_double_coset(self, left: Iterable[int], x: WeylElement, right: Iterable[int]) -> WeylElement:
        """The minimal-length element of W_left * x * W_right."""
        left, right = frozenset(left), frozenset(right)
        changed = True
        while changed:
            changed = False
            for j in sorted(left):
                if x.has_left_descent(j):
                    x = self.simple(j) * x
                    changed = True
            for j in sorted(right):
                if x.has_right_descent(j):
                    x = x * self.simple(j)
                    changed = True
        return x

    def is_minimal(self, left: Iterable[int], x: WeylElement, right: Iterable[int]) -> bool:
        return not any(x.has_left_descent(j) for j in left) and not any(
            x.has_right_descent(j) for j in right
        )

    def coset_reps(
        self, nodes: Iterable[int], side: Literal["left", "right"] = "right"
    ) -> tuple[WeylElement, ...]:
        """W^J (side="right", minimal in x W_J) or ^J W (side="left")."""
        nodes = frozenset(nodes)
        if side == "right":
            return tuple(w for w in self.elements if self.is_minimal((), w, nodes))
        return tuple(w for w in self.elements if self.is_minimal(nodes, w, ()))

    def double_reps(self, left: Iterable[int], right: Iterable[int]) -> tuple[WeylElement, ...]:
        left, right = frozenset(left), frozenset(right)
        return tuple(w for w in self.elements if self.is_minimal(left, w, right))

    def ad_subset(self, x: WeylElement, nodes: Iterable[int]) -> tuple[NodeSubset, bool]:
        """Nodes j with x s_k x^-1 = s_j for some k in nodes, and whether every
        conjugate was simple."""
        simple_images = set()
        all_simple = True
        for k in nodes:
            image = x.perm[k - 1]
            if image >= self.num_positive:
                image -= self.num_positive
            if image < self.rank:
                simple_images.add(image + 1)
            else:
                all_simple = False
        return frozenset(simple_images), all_simple

    def nu(self, nodes: Iterable[int]) -> int:
        """Number of reflections of W_J."""
        outside = [i - 1 for i in self.nodes - frozenset(nodes)]
        return sum(1 for root in self.positive_roots if all(root[i] == 0 for i in outside))

    def longest_in_W_upper(self, nodes: Iterable[int]) -> WeylElement:
        """The longest element of W^{delta(J)}."""
        reps = self.coset_reps(self.delta_subset(nodes), side="right")
        return max(reps, key=WeylElement.sort_key)

    def opposition(self, i: int) -> int:
        """i* with w0 s_i w0 = s_{i*}."""
        return self.w0.perm[i - 1] - self.num_positive + 1

    def star(self, nodes: Iterable[int]) -> NodeSubset:
        return frozenset(self.opposition(i) for i in nodes)

    def poincare(self, elements: Iterable[WeylElement]) -> CountPolynomial:
        counts: list[int] = []
        for w in elements:
            while len(counts) <= w.length:
                counts.append(0)
            counts[w.length] += 1
        return CountPolynomial.from_coeffs(counts)

    def order_poly(self) -> CountPolynomial:
        """q^nu (q-1)^torus_rank sum_w q^l(w): the order of the split group."""
        torus = CountPolynomial(q_power=self.num_positive, q_minus_one_power=self.torus_rank)
        return torus * self.poincare(self.elements)

    def unipotent_codim(self, left: Iterable[int], u: WeylElement, right: Iterable[int]) -> int:
        """dim (U_P cap U_Q)\\U_P = l(u) + nu_K - nu_{J cap Ad(u)K}, for P of type J
        and Q of type K in relative position u."""
        left, right = frozenset(left), frozenset(right)
        if not self.is_minimal(left, u, right):
            raise NotMinimalRep(f"{u!r} is not a minimal ({sorted(left)}, {sorted(right)}) double coset representative.")
        conjugated, _ = self.ad_subset(u, right)
        return u.length + self.nu(right) - self.nu(left & conjugated)

    def __repr__(self) -> str:
        return f"WeylDatum({self.type_spec}, delta={[self.delta[i] for i in sorted(self.nodes)]}, torus_rank={self.torus_rank})"


def build_weyl(
    type_spec: str | Sequence[Sequence[int]],
    delta: Sequence[int] | None = None,
    torus_rank: int | None = None,
) -> WeylDatum:
    """Build a Weyl datum from a Cartan type string or an explicit Coxeter matrix."""
    tracer = trace.get_tracer("stable_pieces.weyl")
    with tracer.start_as_current_span("build_weyl") as span:
        try:
            if isinstance(type_spec, str):
                span.set_attribute("type_spec", type_spec)
                cartan = parse_type(type_spec)
                label = type_spec.strip()
            else:
                cartan = cartan_from_coxeter(type_spec)
                label = "coxeter" + "".join(str(m) for row in type_spec for m in row)
            datum = WeylDatum(cartan, delta=delta, torus_rank=torus_rank, type_spec=label)
        except Exception as e:
            span.set_status(Status(StatusCode.ERROR, str(e)))
            span.record_exception(e)
            logging.debug(f"build_weyl failed for {type_spec!r}: {e}")
            raise
        return datum


def parse_delta(text: str | None) -> list[int] | None:
    """``"2,1"`` -> [2, 1]; empty means the identity."""
    if text is None or not text.strip():
        return None
    return [int(t) for t in re.split(r"[\s,]+", text.strip()) if t]


def parse_subset(text: str | None, rank: int | None = None) -> NodeSubset:
    """``"1,3"`` / ``"1 3"`` / ``"13"`` -> {1, 3}.

    The unseparated form reads one digit per node, so it is refused once the
    rank reaches 10.
    """
    if text is None:
        return frozenset()
    cleaned = text.strip().strip("{}")
    if not cleaned:
        return frozenset()
    if re.fullmatch(r"\d+", cleaned) and len(cleaned) > 1 and "," not in cleaned:
        if rank is not None and rank >= 10:
            raise ValueError(f"Node subset '{cleaned}' is ambiguous at rank {rank}; separate nodes with commas.")
        return frozenset(int(c) for c in cleaned)
    return frozenset(int(t) for t in re.split(r"[\s,]+", cleaned) if t)
