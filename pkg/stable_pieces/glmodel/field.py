"""Linear algebra over a prime field F_p on small dense numpy matrices.

Subspaces are stored by their reduced row-echelon basis, which is unique, so
structural equality is subspace equality. Vectors are rows; a linear map g
acts on column vectors, i.e. a row v goes to (g @ v).
"""

from collections.abc import Iterable, Iterator
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from stable_pieces.errors import AmbientMismatch, InvalidQuadruple


def rref(matrix: np.ndarray | Iterable[Iterable[int]], p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form over F_p; returns the nonzero rows and pivot columns."""
    work = np.array(matrix, dtype=np.int64) % p
    if work.ndim != 2 or work.shape[0] == 0:
        width = work.shape[-1] if work.ndim == 2 else 0
        return np.zeros((0, width), dtype=np.int64), ()
    rows, cols = work.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        candidates = np.nonzero(work[r:, c])[0]
        if candidates.size == 0:
            continue
        pivot = r + int(candidates[0])
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        work[r] = (work[r] * pow(int(work[r, c]), -1, p)) % p
        others = np.nonzero(work[:, c])[0]
        others = others[others != r]
        if others.size:
            work[others] = (work[others] - np.outer(work[others, c], work[r])) % p
        pivots.append(c)
        r += 1
    return work[:r], tuple(pivots)


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def mat_rank(matrix: np.ndarray, p: int) -> int:
    return len(rref(matrix, p)[1])


def mat_inverse(matrix: np.ndarray, p: int) -> np.ndarray:
    square = np.asarray(matrix, dtype=np.int64) % p
    n = square.shape[0]
    if square.shape != (n, n):
        raise InvalidQuadruple(f"Cannot invert a {square.shape} matrix.")
    if n == 0:
        return square.copy()
    reduced, pivots = rref(np.hstack([square, np.identity(n, dtype=np.int64)]), p)
    if pivots[:n] != tuple(range(n)) or len(pivots) < n:
        raise InvalidQuadruple("Matrix is not invertible over F_p.")
    return reduced[:, n:]


def is_invertible(matrix: np.ndarray, p: int) -> bool:
    n = matrix.shape[0]
    return matrix.shape == (n, n) and mat_rank(matrix, p) == n


def gl_order(n: int, q: int) -> int:
    order = 1
    for i in range(n):
        order *= q**n - q**i
    return order


def general_linear(n: int, p: int) -> Iterator[np.ndarray]:
    """Every invertible n x n matrix over F_p, in lexicographic entry order."""
    if n == 0:
        yield np.zeros((0, 0), dtype=np.int64)
        return
    for entries in product(range(p), repeat=n * n):
        matrix = np.array(entries, dtype=np.int64).reshape(n, n)
        if is_invertible(matrix, p):
            yield matrix


def matrix_key(matrix: np.ndarray) -> tuple[int, ...]:
    return tuple(int(x) for x in np.asarray(matrix).reshape(-1))


class Subspace:
    __slots__ = ("p", "d", "rows", "pivots", "_hash")

    def __init__(self, p: int, d: int, rows: tuple[tuple[int, ...], ...], pivots: tuple[int, ...]) -> None:
        self.p = p
        self.d = d
        self.rows = rows
        self.pivots = pivots
        self._hash = hash((p, d, rows))

    @classmethod
    def span(cls, vectors: np.ndarray | Iterable[Iterable[int]], d: int, p: int) -> "Subspace":
        matrix = np.array(list(vectors) if not isinstance(vectors, np.ndarray) else vectors, dtype=np.int64)
        if matrix.size == 0:
            return cls.zero(d, p)
        if matrix.ndim != 2 or matrix.shape[1] != d:
            raise AmbientMismatch(f"Vectors of shape {matrix.shape} do not live in F_{p}^{d}.")
        reduced, pivots = rref(matrix, p)
        return cls(p, d, tuple(tuple(int(x) for x in row) for row in reduced), pivots)

    @classmethod
    def zero(cls, d: int, p: int) -> "Subspace":
        return cls(p, d, (), ())

    @classmethod
    def full(cls, d: int, p: int) -> "Subspace":
        return cls.standard(d, d, p)

    @classmethod
    def standard(cls, k: int, d: int, p: int) -> "Subspace":
        """span(e_1, ..., e_k)."""
        rows = tuple(tuple(int(i == j) for j in range(d)) for i in range(k))
        return cls(p, d, rows, tuple(range(k)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.dim, self.d)

    def _check(self, other: "Subspace") -> None:
        if other.p != self.p or other.d != self.d:
            raise AmbientMismatch(f"F_{self.p}^{self.d} and F_{other.p}^{other.d} differ.")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return _sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return _intersect(self, other)

    def orthogonal(self) -> "Subspace":
        """Annihilator under the standard pairing."""
        free = [c for c in range(self.d) if c not in self.pivots]
        vectors = []
        for f in free:
            v = np.zeros(self.d, dtype=np.int64)
            v[f] = 1
            for row, pivot in zip(self.rows, self.pivots):
                v[pivot] = -row[f] % self.p
            vectors.append(v)
        return Subspace.span(vectors, self.d, self.p)

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return (self + other).dim == other.dim

    def contains_vector(self, vector: np.ndarray) -> bool:
        return Subspace.span([*self.rows, list(vector)], self.d, self.p).dim == self.dim

    def image(self, g: np.ndarray) -> "Subspace":
        if self.dim == 0:
            return self
        return Subspace.span(mat_mul(self.matrix, np.asarray(g).T, self.p), self.d, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.p == other.p and self.d == other.d and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Subspace(F_{self.p}^{self.d}, {[list(r) for r in self.rows]})"


@lru_cache(maxsize=1 << 16)
def _sum(a: Subspace, b: Subspace) -> Subspace:
    if a.dim == 0:
        return b
    if b.dim == 0:
        return a
    return Subspace.span([*a.rows, *b.rows], a.d, a.p)


@lru_cache(maxsize=1 << 16)
def _intersect(a: Subspace, b: Subspace) -> Subspace:
    return (a.orthogonal() + b.orthogonal()).orthogonal()


def all_subspaces(d: int, k: int, p: int) -> Iterator[Subspace]:
    """Every k-dimensional subspace of F_p^d, one RREF matrix each."""
    for pivots in combinations(range(d), k):
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, d) if c not in pivots]
        for values in product(range(p), repeat=len(free)):
            matrix = np.zeros((k, d), dtype=np.int64)
            for r, pc in enumerate(pivots):
                matrix[r, pc] = 1
            for (r, c), value in zip(free, values):
                matrix[r, c] = value
            yield Subspace(p, d, tuple(tuple(int(x) for x in row) for row in matrix), pivots)


def gaussian_binomial(d: int, k: int, q: int) -> int:
    numerator, denominator = 1, 1
    for i in range(k):
        numerator *= q ** (d - i) - 1
        denominator *= q ** (i + 1) - 1
    return numerator // denominator


class Subquotient:
    """top/bottom with the canonical pivot-complement basis.

    Vectors of ``top`` are reduced modulo ``bottom`` by clearing the bottom
    pivot columns; the reduced vectors' RREF is the basis, and coordinates
    are read off at its pivot columns.
    """

    def __init__(self, top: Subspace, bottom: Subspace) -> None:
        if not bottom <= top:
            raise InvalidQuadruple(f"{bottom!r} is not contained in {top!r}.")
        self.top = top
        self.bottom = bottom
        self.p = top.p
        reduced = [self.reduce(np.array(row, dtype=np.int64)) for row in top.rows]
        basis, pivots = rref(np.array(reduced, dtype=np.int64).reshape(len(reduced), top.d), self.p)
        self.basis = basis
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, vector: np.ndarray) -> np.ndarray:
        v = np.array(vector, dtype=np.int64) % self.p
        for row, pivot in zip(self.bottom.rows, self.bottom.pivots):
            if v[pivot]:
                v = (v - v[pivot] * np.array(row, dtype=np.int64)) % self.p
        return v

    def coords(self, vector: np.ndarray) -> np.ndarray:
        reduced = self.reduce(vector)
        return np.array([reduced[c] for c in self.pivots], dtype=np.int64)

    def lift(self, coords: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros(self.top.d, dtype=np.int64)
        return mat_mul(np.asarray(coords, dtype=np.int64), self.basis, self.p)

    def subspace_coords(self, middle: Subspace) -> Subspace:
        """middle/bottom as a subspace of F_p^dim, for bottom <= middle <= top."""
        return Subspace.span([self.coords(np.array(row)) for row in middle.rows], self.dim, self.p)

    def lift_subspace(self, coords: Subspace) -> Subspace:
        """The subspace between bottom and top whose image is ``coords``."""
        lifted = [self.lift(np.array(row)) for row in coords.rows]
        return self.bottom + Subspace.span(lifted, self.top.d, self.p)

    def __repr__(self) -> str:
        return f"Subquotient(dim={self.dim}, top={self.top!r}, bottom={self.bottom!r})"


def induced_map(g: np.ndarray, source: Subquotient, target: Subquotient) -> np.ndarray:
    """Matrix of v mod source.bottom -> g v mod target.bottom in canonical coordinates."""
    p = source.p
    columns = []
    for k in range(source.dim):
        unit = np.zeros(source.dim, dtype=np.int64)
        unit[k] = 1
        image = mat_mul(np.asarray(g), source.lift(unit), p)
        columns.append(target.coords(image))
    if not columns:
        return np.zeros((target.dim, 0), dtype=np.int64)
    return np.array(columns, dtype=np.int64).T % p


def apply_coords(matrix: np.ndarray, coords: Subspace) -> Subspace:
    """Image of a coordinate subspace under a matrix acting on column vectors."""
    if coords.dim == 0:
        return Subspace.zero(matrix.shape[0], coords.p)
    return Subspace.span(mat_mul(coords.matrix, matrix.T, coords.p), matrix.shape[0], coords.p)
