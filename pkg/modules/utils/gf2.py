"""
GF(2) Linear Algebra Module
Bit-packed matrices over the two-element field and the elimination routines
every homology computation is built on
"""

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from modules.exceptions.algebra import (
    DimensionMismatchException, NotInSpanException, PreconditionException, SingularMatrixException
)


def iter_bits(vector: int) -> Iterator[int]:
    """Yield the indices of the set bits of a packed vector, lowest first"""
    while vector:
        low = vector & -vector
        yield low.bit_length() - 1
        vector ^= low


def low_bit(vector: int) -> int:
    return (vector & -vector).bit_length() - 1


def popcount(vector: int) -> int:
    return bin(vector).count('1')


def vector_from_indices(indices: Iterable[int]) -> int:
    vector = 0
    for index in indices:
        vector ^= 1 << index
    return vector


def vector_from_array(values) -> int:
    return vector_from_indices(int(i) for i in np.flatnonzero(np.asarray(values, dtype=np.uint8) & 1))


def vector_to_array(vector: int, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.uint8)
    for index in iter_bits(vector):
        out[index] = 1
    return out


@dataclass(frozen=True)
class Gf2Matrix:
    """
    A rows x cols matrix over GF(2), stored column-major

    Column j is the integer whose bit r is the entry (r, j). Addition is XOR.
    """

    rows: int
    cols: int
    columns: Tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise DimensionMismatchException(f"Expected {self.cols} columns, got {len(self.columns)}")
        limit = 1 << self.rows
        for column in self.columns:
            if column < 0 or column >= limit:
                raise DimensionMismatchException(f"Column does not fit in {self.rows} rows")

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[int]) -> 'Gf2Matrix':
        columns = tuple(columns)
        return cls(rows, len(columns), columns)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'Gf2Matrix':
        return cls(rows, cols, (0,) * cols)

    @classmethod
    def identity(cls, size: int) -> 'Gf2Matrix':
        return cls(size, size, tuple(1 << j for j in range(size)))

    @classmethod
    def from_array(cls, array) -> 'Gf2Matrix':
        array = np.asarray(array, dtype=np.uint8) & 1
        if array.ndim != 2:
            raise DimensionMismatchException("Expected a two-dimensional array")
        rows, cols = array.shape
        return cls(rows, cols, tuple(vector_from_array(array[:, j]) for j in range(cols)))

    def to_array(self) -> np.ndarray:
        if not self.cols:
            return np.zeros((self.rows, 0), dtype=np.uint8)
        return np.column_stack([vector_to_array(column, self.rows) for column in self.columns])

    def to_lists(self) -> List[List[int]]:
        return self.to_array().tolist()

    def entry(self, row: int, col: int) -> int:
        return (self.columns[col] >> row) & 1

    def apply(self, vector: int) -> int:
        """Multiply by a packed column vector"""
        out = 0
        for j in iter_bits(vector):
            out ^= self.columns[j]
        return out

    def transpose(self) -> 'Gf2Matrix':
        out = [0] * self.rows
        for j, column in enumerate(self.columns):
            bit = 1 << j
            for r in iter_bits(column):
                out[r] |= bit
        return Gf2Matrix(self.cols, self.rows, tuple(out))

    @property
    def T(self) -> 'Gf2Matrix':
        return self.transpose()

    def __matmul__(self, other: 'Gf2Matrix') -> 'Gf2Matrix':
        if self.cols != other.rows:
            raise DimensionMismatchException(
                f"Cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        return Gf2Matrix(self.rows, other.cols, tuple(self.apply(c) for c in other.columns))

    def __add__(self, other: 'Gf2Matrix') -> 'Gf2Matrix':
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchException("Cannot add matrices of different shapes")
        return Gf2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.columns, other.columns)))

    def restrict_columns(self, indices: Sequence[int]) -> 'Gf2Matrix':
        return Gf2Matrix.from_columns(self.rows, (self.columns[j] for j in indices))

    def is_zero(self) -> bool:
        return not any(self.columns)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def to_dict(self):
        return {'rows': self.rows, 'cols': self.cols, 'entries': self.to_lists()}


class _PivotTable:
    """Column reduction state: pivot row -> (reduced column, history)"""

    def __init__(self):
        self.pivots = {}

    def reduce(self, vector: int, history: int = 0) -> Tuple[int, int]:
        pivots = self.pivots
        while vector:
            low = low_bit(vector)
            entry = pivots.get(low)
            if entry is None:
                break
            vector ^= entry[0]
            history ^= entry[1]
        return vector, history

    def insert(self, vector: int, history: int):
        self.pivots[low_bit(vector)] = (vector, history)

    def __len__(self):
        return len(self.pivots)


def _column_reduce(columns: Sequence[int]):
    table = _PivotTable()
    pivot_columns = []
    null_vectors = []
    for j, column in enumerate(columns):
        reduced, history = table.reduce(column, 1 << j)
        if reduced:
            table.insert(reduced, history)
            pivot_columns.append(j)
        else:
            null_vectors.append(history)
    return table, pivot_columns, null_vectors


def rank(matrix: Gf2Matrix) -> int:
    """Rank over GF(2) by column elimination"""
    return len(_column_reduce(matrix.columns)[1])


def nullspace_basis(matrix: Gf2Matrix) -> List[int]:
    """
    Basis of {v : Mv = 0} as packed vectors over the columns of M

    Returns cols - rank(M) vectors; each one records which columns were
    combined to reach zero, so the basis depends only on column order.
    """
    return _column_reduce(matrix.columns)[2]


def image_basis(matrix: Gf2Matrix) -> List[int]:
    """Original columns of M that are independent of the columns before them"""
    pivot_columns = _column_reduce(matrix.columns)[1]
    return [matrix.columns[j] for j in pivot_columns]


def pivot_columns(matrix: Gf2Matrix) -> List[int]:
    return _column_reduce(matrix.columns)[1]


@dataclass(frozen=True)
class Quotient:
    """A basis of span(Z)/span(B): representatives plus a coordinate map"""

    representatives: Tuple[int, ...]
    indices: Tuple[int, ...]
    _table: _PivotTable = field(compare=False, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def coordinates(self, vector: int) -> int:
        """Coordinates of a vector of span(Z) in the representative basis, packed"""
        residue, history = self._table.reduce(vector, 0)
        if residue:
            raise NotInSpanException("Vector is not in the span of the cycle vectors")
        return history

    def contains(self, vector: int) -> bool:
        return not self._table.reduce(vector, 0)[0]


def quotient_basis(cycles: Sequence[int], boundaries: Sequence[int], check: bool = True) -> Quotient:
    """
    Representatives whose classes form a basis of span(cycles)/span(boundaries)

    Args:
        cycles: packed vectors spanning Z
        boundaries: packed vectors spanning B, with span(B) contained in span(Z)
        check: verify the containment first

    Returns:
        Quotient
    """
    if check and boundaries:
        span = _PivotTable()
        for z in cycles:
            reduced, _ = span.reduce(z)
            if reduced:
                span.insert(reduced, 0)
        for b in boundaries:
            if span.reduce(b)[0]:
                raise PreconditionException()

    table = _PivotTable()
    for b in boundaries:
        reduced, _ = table.reduce(b, 0)
        if reduced:
            table.insert(reduced, 0)

    representatives = []
    indices = []
    for k, z in enumerate(cycles):
        reduced, history = table.reduce(z, 0)
        if reduced:
            table.insert(reduced, history ^ (1 << len(representatives)))
            representatives.append(z)
            indices.append(k)
    return Quotient(tuple(representatives), tuple(indices), table)


def solver(matrix: Gf2Matrix) -> Callable[[int], int]:
    """Return a function mapping v to some x with Mx = v"""
    table, _, _ = _column_reduce(matrix.columns)

    def solve_one(vector: int) -> int:
        residue, history = table.reduce(vector, 0)
        if residue:
            raise NotInSpanException()
        return history

    return solve_one


def solve(matrix: Gf2Matrix, targets: Gf2Matrix) -> Gf2Matrix:
    """Solve M X = T column by column"""
    if matrix.rows != targets.rows:
        raise DimensionMismatchException("Right-hand side has the wrong number of rows")
    solve_one = solver(matrix)
    return Gf2Matrix.from_columns(matrix.cols, (solve_one(t) for t in targets.columns))


def inverse(matrix: Gf2Matrix) -> Gf2Matrix:
    if matrix.rows != matrix.cols or rank(matrix) != matrix.rows:
        raise SingularMatrixException(f"Matrix of shape {matrix.shape} is not invertible")
    return solve(matrix, Gf2Matrix.identity(matrix.rows))


def is_invertible(matrix: Gf2Matrix) -> bool:
    return matrix.rows == matrix.cols and rank(matrix) == matrix.rows
