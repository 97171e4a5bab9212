from itertools import product

import numpy as np
import pytest

from stable_pieces.errors import AmbientMismatch, InvalidQuadruple
from stable_pieces.glmodel.field import (
    Subquotient,
    Subspace,
    all_subspaces,
    gaussian_binomial,
    general_linear,
    gl_order,
    induced_map,
    mat_inverse,
    mat_mul,
    rref,
)


def every_subspace(d: int, p: int) -> list[Subspace]:
    return [s for k in range(d + 1) for s in all_subspaces(d, k, p)]


def test_rref_is_reduced() -> None:
    rows, pivots = rref([[2, 1, 0], [1, 1, 1]], 3)
    assert pivots == (0, 1)
    assert rows.tolist() == [[1, 0, 2], [0, 1, 2]]


def test_span_is_basis_independent() -> None:
    a = Subspace.span([[1, 1, 0], [0, 1, 1]], 3, 2)
    b = Subspace.span([[1, 0, 1], [1, 1, 0]], 3, 2)
    assert a == b
    assert hash(a) == hash(b)
    assert a.dim == 2


@pytest.mark.parametrize("d,k,p,expected", [(3, 1, 2, 7), (3, 2, 2, 7), (3, 2, 3, 13), (4, 2, 2, 35)])
def test_all_subspaces_count(d: int, k: int, p: int, expected: int) -> None:
    found = set(all_subspaces(d, k, p))
    assert len(found) == expected == gaussian_binomial(d, k, p)
    assert all(s.dim == k for s in found)


@pytest.mark.parametrize("d,p", [(2, 2), (2, 3), (3, 2)])
def test_dimension_formula(d: int, p: int) -> None:
    spaces = every_subspace(d, p)
    for a, b in product(spaces, repeat=2):
        meet = a & b
        assert meet <= a and meet <= b
        assert a.dim + b.dim == (a + b).dim + meet.dim


def test_orthogonal() -> None:
    line = Subspace.span([[1, 1, 0]], 3, 2)
    plane = line.orthogonal()
    assert plane.dim == 2
    assert plane.contains_vector(np.array([1, 1, 0]))
    assert plane.contains_vector(np.array([0, 0, 1]))
    assert plane.orthogonal() == line


def test_ambient_mismatch() -> None:
    with pytest.raises(AmbientMismatch):
        _ = Subspace.full(2, 2) + Subspace.full(3, 2)
    with pytest.raises(AmbientMismatch):
        Subspace.span([[1, 0]], 3, 2)


def test_group_orders() -> None:
    assert gl_order(1, 2) == 1
    assert gl_order(2, 2) == 6
    assert gl_order(2, 3) == 48
    assert gl_order(3, 2) == 168
    assert len(list(general_linear(2, 2))) == 6
    assert len(list(general_linear(2, 3))) == 48


def test_inverse() -> None:
    for g in general_linear(2, 3):
        assert (mat_mul(g, mat_inverse(g, 3), 3) == np.identity(2, dtype=np.int64)).all()
    with pytest.raises(InvalidQuadruple):
        mat_inverse(np.array([[1, 1], [1, 1]]), 2)


def test_image_under_g() -> None:
    swap = np.array([[0, 1], [1, 0]])
    assert Subspace.standard(1, 2, 2).image(swap) == Subspace.span([[0, 1]], 2, 2)


def test_subquotient_coordinates() -> None:
    top = Subspace.full(3, 3)
    bottom = Subspace.span([[1, 2, 0]], 3, 3)
    quotient = Subquotient(top, bottom)
    assert quotient.dim == 2
    for coords in product(range(3), repeat=2):
        v = quotient.lift(np.array(coords))
        assert quotient.coords(v).tolist() == list(coords)
    assert quotient.coords(np.array([2, 1, 0])).tolist() == [0, 0]


def test_subquotient_subspaces() -> None:
    top, bottom = Subspace.full(3, 2), Subspace.standard(1, 3, 2)
    quotient = Subquotient(top, bottom)
    middle = Subspace.span([[1, 0, 0], [0, 1, 1]], 3, 2)
    coords = quotient.subspace_coords(middle)
    assert coords.dim == 1
    assert quotient.lift_subspace(coords) == middle
    with pytest.raises(InvalidQuadruple):
        Subquotient(bottom, top)


def test_induced_map_identity() -> None:
    top = Subspace.span([[1, 0, 0], [0, 1, 1]], 3, 2)
    block = Subquotient(top, Subspace.standard(1, 3, 2))
    assert induced_map(np.identity(3, dtype=np.int64), block, block).tolist() == [[1]]
