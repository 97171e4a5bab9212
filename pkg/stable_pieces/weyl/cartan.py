"""Cartan matrices for finite crystallographic types, Bourbaki numbering.

Type strings are single components like ``A2`` or ``G2`` joined by ``x`` for
products (``A1xB2``); nodes of a product are numbered consecutively.
"""

import re
from collections.abc import Sequence

import numpy as np

from stable_pieces.errors import InvalidCoxeterMatrix, NonFiniteType, UnsupportedType

COMPONENT_PATTERN = re.compile(r"^(?P<family>[ABCDEFG])(?P<rank>\d+)$")

# product a_ij * a_ji -> Coxeter label
_LABEL_OF_PRODUCT = {0: 2, 1: 3, 2: 4, 3: 6}
_BOND_OF_LABEL = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3)}


def _chain(rank: int) -> np.ndarray:
    cartan = 2 * np.identity(rank, dtype=np.int64)
    for i in range(rank - 1):
        cartan[i, i + 1] = -1
        cartan[i + 1, i] = -1
    return cartan


def component_cartan(family: str, rank: int) -> np.ndarray:
    """Cartan matrix a_ij = <alpha_i^vee, alpha_j> of one irreducible type."""
    match family:
        case "A" if rank >= 1:
            return _chain(rank)
        case "B" if rank >= 2:
            cartan = _chain(rank)
            cartan[rank - 1, rank - 2] = -2
            return cartan
        case "C" if rank >= 2:
            cartan = _chain(rank)
            cartan[rank - 2, rank - 1] = -2
            return cartan
        case "D" if rank >= 4:
            cartan = _chain(rank)
            cartan[rank - 2, rank - 1] = 0
            cartan[rank - 1, rank - 2] = 0
            cartan[rank - 3, rank - 1] = -1
            cartan[rank - 1, rank - 3] = -1
            return cartan
        case "G" if rank == 2:
            return np.array([[2, -3], [-1, 2]], dtype=np.int64)
        case "F" if rank == 4:
            cartan = _chain(4)
            cartan[2, 1] = -2
            return cartan
        case "E" if 6 <= rank <= 8:
            raise UnsupportedType(f"Type E{rank} is finite but unsupported; use A-D, F4 or G2.")
    raise NonFiniteType(f"Unknown or non-finite Cartan type '{family}{rank}'.")


def parse_type(type_spec: str) -> np.ndarray:
    """Block-diagonal Cartan matrix of a type string such as ``A2`` or ``A1xG2``."""
    blocks: list[np.ndarray] = []
    for component in type_spec.strip().split("x"):
        match = COMPONENT_PATTERN.match(component.strip())
        if not match:
            raise NonFiniteType(f"Cannot parse Cartan type component '{component}'.")
        blocks.append(component_cartan(match["family"], int(match["rank"])))

    size = sum(block.shape[0] for block in blocks)
    cartan = np.zeros((size, size), dtype=np.int64)
    offset = 0
    for block in blocks:
        rank = block.shape[0]
        cartan[offset : offset + rank, offset : offset + rank] = block
        offset += rank
    return cartan


def coxeter_from_cartan(cartan: np.ndarray) -> tuple[tuple[int, ...], ...]:
    rank = cartan.shape[0]
    rows = []
    for i in range(rank):
        row = []
        for j in range(rank):
            if i == j:
                row.append(1)
                continue
            product = int(cartan[i, j] * cartan[j, i])
            if product not in _LABEL_OF_PRODUCT:
                raise NonFiniteType(f"Bond between nodes {i + 1} and {j + 1} is not of finite type.")
            row.append(_LABEL_OF_PRODUCT[product])
        rows.append(tuple(row))
    return tuple(rows)


def _is_forest(matrix: Sequence[Sequence[int]]) -> bool:
    rank = len(matrix)
    parent = list(range(rank))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(rank):
        for j in range(i + 1, rank):
            if matrix[i][j] == 2:
                continue
            root_i, root_j = find(i), find(j)
            if root_i == root_j:
                return False
            parent[root_i] = root_j
    return True


def cartan_from_coxeter(matrix: Sequence[Sequence[int]]) -> np.ndarray:
    """A crystallographic Cartan matrix realizing an explicit Coxeter matrix.

    Finite Coxeter diagrams are forests, so orienting every multiple bond from
    the lower to the higher index gives a symmetrizable matrix.
    """
    rank = len(matrix)
    if any(len(row) != rank for row in matrix):
        raise InvalidCoxeterMatrix("Coxeter matrix must be square.")
    for i in range(rank):
        if matrix[i][i] != 1:
            raise InvalidCoxeterMatrix(f"Diagonal entry m({i + 1},{i + 1}) must be 1.")
        for j in range(rank):
            if matrix[i][j] != matrix[j][i]:
                raise InvalidCoxeterMatrix(f"Coxeter matrix is not symmetric at ({i + 1},{j + 1}).")
            if i != j and matrix[i][j] not in _BOND_OF_LABEL:
                raise InvalidCoxeterMatrix(
                    f"Label m({i + 1},{j + 1})={matrix[i][j]} is not a Weyl group label (2, 3, 4, 6)."
                )
    if not _is_forest(matrix):
        raise NonFiniteType("Coxeter diagram contains a cycle; the group is infinite.")

    cartan = 2 * np.identity(rank, dtype=np.int64)
    for i in range(rank):
        for j in range(i + 1, rank):
            upper, lower = _BOND_OF_LABEL[matrix[i][j]]
            cartan[i, j] = upper
            cartan[j, i] = lower
    return cartan
