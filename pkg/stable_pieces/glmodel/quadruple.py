from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from stable_pieces.errors import InvalidQuadruple, NoStabilization
from stable_pieces.glmodel.field import (
    Subquotient,
    Subspace,
    apply_coords,
    induced_map,
    is_invertible,
    mat_inverse,
    mat_mul,
)
from stable_pieces.glmodel.filtration import Filtration, filtration_type, rel_pos
from stable_pieces.pieces.types import subset_json, subset_text
from stable_pieces.weyl import NodeSubset, WeylDatum, WeylElement


@dataclass(frozen=True, eq=False)
class Quadruple:
    """(V_*, V'_*, sigma, (a_i)) with a_i : V_i/V_{i-1} -> V'_{sigma(i)}/V'_{sigma(i)-1}.

    ``sigma`` lists the 1-based images; each a_i acts on canonical coordinates.
    """

    V: Filtration
    Vp: Filtration
    sigma: tuple[int, ...]
    a: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        n = self.V.n
        if self.Vp.n != n or len(self.sigma) != n or len(self.a) != n:
            raise InvalidQuadruple("V_*, V'_*, sigma and (a_i) must all have n entries.")
        if self.V.d != self.Vp.d or self.V.p != self.Vp.p:
            raise InvalidQuadruple("V_* and V'_* live in different spaces.")
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise InvalidQuadruple(f"sigma={self.sigma} is not a permutation of 1..{n}.")
        for i, a_i in enumerate(self.a, start=1):
            size = self.V.block_dims[i - 1]
            if self.Vp.block_dims[self.sigma[i - 1] - 1] != size:
                raise InvalidQuadruple(f"Block {i} and its sigma-image have different dimensions.")
            if a_i.shape != (size, size) or not is_invertible(a_i, self.p):
                raise InvalidQuadruple(f"a_{i} is not an invertible {size}x{size} matrix.")

    @property
    def n(self) -> int:
        return self.V.n

    @property
    def p(self) -> int:
        return self.V.p


@dataclass(frozen=True)
class ModelRecord:
    J: NodeSubset
    Jp: NodeSubset
    u: WeylElement

    def to_json(self) -> dict[str, Any]:
        return {"J": subset_json(self.J), "Jp": subset_json(self.Jp), "u": list(self.u.word)}


@dataclass(frozen=True)
class ModelSignature:
    records: tuple[ModelRecord, ...]

    @property
    def stabilization(self) -> int:
        return len(self.records) - 1

    def to_json(self) -> list[dict[str, Any]]:
        return [record.to_json() for record in self.records]

    def __str__(self) -> str:
        return ";".join(f"({subset_text(r.J)},{subset_text(r.Jp)},{r.u!r})" for r in self.records)


def compact(Q: Quadruple) -> Quadruple:
    """Drop the empty blocks of both filtrations and renumber sigma."""
    keep = [i for i in range(1, Q.n + 1) if Q.V.block_dims[i - 1] > 0]
    keep_p = [k for k in range(1, Q.n + 1) if Q.Vp.block_dims[k - 1] > 0]
    if len(keep) == Q.n:
        return Q
    renumber = {k: index for index, k in enumerate(keep_p, start=1)}
    return Quadruple(
        V=Q.V.compacted(),
        Vp=Q.Vp.compacted(),
        sigma=tuple(renumber[Q.sigma[i - 1]] for i in keep),
        a=tuple(Q.a[i - 1] for i in keep),
    )


def _zassenhaus(Q: Quadruple, k: int, j: int, source: Subquotient, target: Subquotient) -> np.ndarray:
    """t : X'_{kj}/X'_{k,j-1} -> X_{jk}/X_{j,k-1}, as B A^-1 through the common quotient
    (V'_k cap V_j) / ((V'_{k-1} cap V_j) + (V'_k cap V_{j-1}))."""
    V, Vp, p = Q.V.members, Q.Vp.members, Q.p
    middle = Subquotient(Vp[k] & V[j], (Vp[k - 1] & V[j]) + (Vp[k] & V[j - 1]))
    if middle.dim != source.dim or middle.dim != target.dim:
        raise InvalidQuadruple(f"Cell ({k},{j}) is not a Zassenhaus isomorphism.")
    if middle.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    lifts = [middle.lift(unit) for unit in np.identity(middle.dim, dtype=np.int64)]
    A = np.array([source.coords(v) for v in lifts], dtype=np.int64).T
    B = np.array([target.coords(v) for v in lifts], dtype=np.int64).T
    return mat_mul(B, mat_inverse(A, p), p)


def refine(Q: Quadruple) -> Quadruple:
    """One refinement round; the result has n^2 positional blocks, block (i, j)
    at position (i-1)n + j, and maps block (i, j) to block (j, sigma(i))."""
    n, p = Q.n, Q.p
    V, Vp = Q.V.members, Q.Vp.members
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]

    X = [V[0]] + [V[i - 1] + (V[i] & Vp[j]) for i, j in cells]
    Xp = [Vp[0]] + [Vp[i - 1] + (Vp[i] & V[j]) for i, j in cells]

    def position(i: int, j: int) -> int:
        return (i - 1) * n + j

    Y = [V[0]]
    for i, j in cells:
        k = Q.sigma[i - 1]
        source, target = Q.V.block(i), Q.Vp.block(k)
        pulled = apply_coords(mat_inverse(Q.a[i - 1], p), target.subspace_coords(Xp[position(k, j)]))
        Y.append(source.lift_subspace(pulled))

    newV, newVp = Filtration(tuple(Y)), Filtration(tuple(X))
    sigma, maps = [], []
    for i, j in cells:
        k = Q.sigma[i - 1]
        sigma.append(position(j, k))
        source_block, target_block = newV.block(position(i, j)), newVp.block(position(j, k))
        # a_i carries the Y cell onto the X' cell (k, j)
        Xp_cell = Subquotient(Xp[position(k, j)], Xp[position(k, j) - 1])
        via_a = []
        for unit in np.identity(source_block.dim, dtype=np.int64):
            v = source_block.lift(unit)
            image = Q.Vp.block(k).lift(mat_mul(Q.a[i - 1], Q.V.block(i).coords(v), p))
            via_a.append(Xp_cell.coords(image))
        A_prime = np.array(via_a, dtype=np.int64).T.reshape(Xp_cell.dim, source_block.dim)
        t = _zassenhaus(Q, k, j, Xp_cell, target_block)
        maps.append(mat_mul(t, A_prime, p) if t.size else np.zeros((0, 0), dtype=np.int64))
    return Quadruple(V=newV, Vp=newVp, sigma=tuple(sigma), a=tuple(maps))


def record(Q: Quadruple, datum: WeylDatum) -> ModelRecord:
    return ModelRecord(J=filtration_type(Q.V), Jp=filtration_type(Q.Vp), u=rel_pos(Q.Vp, Q.V, datum))


def trajectory(Q: Quadruple, datum: WeylDatum, max_iter: int) -> list[tuple[Quadruple, ModelRecord]]:
    """Compacted refinements with their records, up to the first repeat."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1.")
    current = compact(Q)
    steps = [(current, record(current, datum))]
    for _ in range(max_iter):
        nxt = compact(refine(current))
        nxt_record = record(nxt, datum)
        if nxt_record == steps[-1][1]:
            return steps
        steps.append((nxt, nxt_record))
        current = nxt
    raise NoStabilization(f"Refinement did not stabilize within {max_iter} rounds.")


def signature(Q: Quadruple, datum: WeylDatum, max_iter: int) -> ModelSignature:
    return ModelSignature(tuple(r for _, r in trajectory(Q, datum, max_iter)))


def verify_partial_positions(Q: Quadruple, datum: WeylDatum, max_iter: int) -> bool:
    """rel_pos(V'_*, V^n_*) equals u_0 u_1 ... u_n for every n."""
    return partial_positions_hold(trajectory(Q, datum, max_iter), datum)


def partial_positions_hold(steps: list[tuple[Quadruple, ModelRecord]], datum: WeylDatum) -> bool:
    Vp = steps[0][0].Vp
    product = datum.identity
    for current, rec in steps:
        product = product * rec.u
        if rel_pos(Vp, current.V, datum) != product:
            return False
    return True


def transport(Q: Quadruple, g: np.ndarray) -> Quadruple:
    """The action of g in GL(V) on quadruples."""
    p = Q.p
    V, Vp = Q.V.image(g), Q.Vp.image(g)
    maps = []
    for i, a_i in enumerate(Q.a, start=1):
        k = Q.sigma[i - 1]
        into = induced_map(g, Q.V.block(i), V.block(i))
        onto = induced_map(g, Q.Vp.block(k), Vp.block(k))
        maps.append(mat_mul(mat_mul(onto, a_i, p), mat_inverse(into, p), p))
    return Quadruple(V=V, Vp=Vp, sigma=Q.sigma, a=tuple(maps))


def make_quadruple(
    V: Sequence[Subspace], Vp: Sequence[Subspace], sigma: Sequence[int], a: Sequence[np.ndarray]
) -> Quadruple:
    p = V[0].p
    return Quadruple(
        V=Filtration(tuple(V)),
        Vp=Filtration(tuple(Vp)),
        sigma=tuple(sigma),
        a=tuple(np.asarray(m, dtype=np.int64) % p for m in a),
    )
