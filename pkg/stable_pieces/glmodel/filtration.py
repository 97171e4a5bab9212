from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from stable_pieces.errors import AmbientMismatch, InvalidQuadruple
from stable_pieces.glmodel.field import Subquotient, Subspace
from stable_pieces.weyl import NodeSubset, WeylDatum, WeylElement, build_weyl


def gl_datum(d: int) -> WeylDatum:
    """W = S_d as type A_{d-1}, with the torus rank of GL_d."""
    if d < 2:
        raise InvalidQuadruple(f"The GL model needs d >= 2, got {d}.")
    return build_weyl(f"A{d - 1}", torus_rank=d)


@dataclass(frozen=True)
class Filtration:
    """0 = V_0 <= V_1 <= ... <= V_n = V; repeated members are allowed."""

    members: tuple[Subspace, ...]

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise InvalidQuadruple("A filtration needs at least the members 0 and V.")
        first, last = self.members[0], self.members[-1]
        if first.dim != 0 or last.dim != last.d:
            raise InvalidQuadruple("A filtration must start at 0 and end at the whole space.")
        for lower, upper in zip(self.members, self.members[1:]):
            if not lower <= upper:
                raise InvalidQuadruple(f"{lower!r} is not contained in {upper!r}.")

    @classmethod
    def standard(cls, dims: Sequence[int], d: int, p: int) -> "Filtration":
        """The flag span(e_1..e_k) for k in dims (0 and d added if missing)."""
        steps = sorted(set(dims) | {0, d})
        return cls(tuple(Subspace.standard(k, d, p) for k in steps))

    @property
    def n(self) -> int:
        return len(self.members) - 1

    @property
    def d(self) -> int:
        return self.members[0].d

    @property
    def p(self) -> int:
        return self.members[0].p

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.dim for m in self.members)

    @cached_property
    def blocks(self) -> tuple[Subquotient, ...]:
        return tuple(Subquotient(upper, lower) for lower, upper in zip(self.members, self.members[1:]))

    def block(self, i: int) -> Subquotient:
        """V_i / V_{i-1}, 1-based."""
        return self.blocks[i - 1]

    @property
    def block_dims(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.dims, self.dims[1:]))

    def compacted(self) -> "Filtration":
        members = [self.members[0]]
        for member in self.members[1:]:
            if member != members[-1]:
                members.append(member)
        return Filtration(tuple(members))

    def image(self, g: np.ndarray) -> "Filtration":
        return Filtration(tuple(m.image(g) for m in self.members))

    def is_stabilized_by(self, g: np.ndarray) -> bool:
        return all(m.image(g) == m for m in self.members)


def filtration_type(F: Filtration) -> NodeSubset:
    """The i in [1, d-1] that are not the dimension of any member."""
    dims = set(F.dims)
    return frozenset(i for i in range(1, F.d) if i not in dims)


def permutation_element(datum: WeylDatum, perm: Sequence[int]) -> WeylElement:
    """The element acting by e_k -> e_{perm[k-1]}, by bubble sort."""
    work = list(perm)
    swaps = []
    for end in range(len(work) - 1, 0, -1):
        for i in range(end):
            if work[i] > work[i + 1]:
                work[i], work[i + 1] = work[i + 1], work[i]
                swaps.append(i + 1)
    return datum.element_from_word(reversed(swaps))


def element_permutation(x: WeylElement, d: int) -> tuple[int, ...]:
    perm = list(range(1, d + 1))
    for i in reversed(x.word):
        perm = [k + 1 if k == i else k - 1 if k == i + 1 else k for k in perm]
    return tuple(perm)


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    d = len(perm)
    matrix = np.zeros((d, d), dtype=np.int64)
    for k, image in enumerate(perm):
        matrix[image - 1, k] = 1
    return matrix


def intersection_counts(F: Filtration, Fp: Filtration) -> np.ndarray:
    """M_ij = dim of the (i, j) Zassenhaus cell of F (rows) against Fp (columns)."""
    if F.d != Fp.d or F.p != Fp.p:
        raise AmbientMismatch(f"Filtrations of F_{F.p}^{F.d} and F_{Fp.p}^{Fp.d} cannot be compared.")
    D = np.array([[(a & b).dim for b in Fp.members] for a in F.members], dtype=np.int64)
    return D[1:, 1:] - D[:-1, 1:] - D[1:, :-1] + D[:-1, :-1]


def rel_pos(F: Filtration, Fp: Filtration, datum: WeylDatum) -> WeylElement:
    """Minimal element of W_{type F} \\ W / W_{type Fp} describing the pair.

    Rows of the cell matrix are blocks of F (values), columns are blocks of Fp
    (positions); positions are filled column block by column block, taking
    values from the row blocks in increasing order.
    """
    counts = intersection_counts(F, Fp)
    starts = [int(sum(F.block_dims[:i])) for i in range(F.n)]
    next_value = [s + 1 for s in starts]
    perm = []
    for j in range(Fp.n):
        for i in range(F.n):
            for _ in range(int(counts[i, j])):
                perm.append(next_value[i])
                next_value[i] += 1
    return permutation_element(datum, perm)


def block_permutation(dims: Sequence[int], dims_p: Sequence[int], sigma: Sequence[int]) -> tuple[int, ...]:
    """Send the positions of block i of the first filtration, in order, onto
    the positions of block sigma(i) of the second."""
    starts_p = [sum(dims_p[:k]) for k in range(len(dims_p))]
    perm = []
    for i, size in enumerate(dims):
        target = sigma[i] - 1
        if dims_p[target] != size:
            raise InvalidQuadruple(f"Block {i + 1} has dim {size} but block {sigma[i]} has dim {dims_p[target]}.")
        perm += [starts_p[target] + t + 1 for t in range(size)]
    return tuple(perm)
