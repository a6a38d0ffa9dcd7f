import numpy as np
import pytest

from modules.exceptions.algebra import (
    DimensionMismatchException, NotInSpanException, PreconditionException, SingularMatrixException
)
from modules.utils.gf2 import (
    Gf2Matrix, image_basis, inverse, is_invertible, iter_bits, low_bit, nullspace_basis, popcount,
    quotient_basis, rank, solve, vector_from_indices,
)


def random_matrix(rng, rows, cols):
    return Gf2Matrix.from_array(rng.integers(0, 2, size=(rows, cols)))


def test_bit_helpers():
    vector = vector_from_indices([0, 3, 5])
    assert vector == 0b101001
    assert list(iter_bits(vector)) == [0, 3, 5]
    assert low_bit(vector) == 0
    assert low_bit(0b1000) == 3
    assert popcount(vector) == 3


def test_array_conversion():
    array = np.array([[1, 0, 1], [0, 1, 1]])
    matrix = Gf2Matrix.from_array(array)
    assert matrix.shape == (2, 3)
    assert matrix.columns == (0b01, 0b10, 0b11)
    assert matrix.entry(1, 2) == 1
    assert (matrix.to_array() == array).all()
    assert matrix.to_lists() == [[1, 0, 1], [0, 1, 1]]


def test_column_does_not_fit():
    with pytest.raises(DimensionMismatchException):
        Gf2Matrix(2, 1, (0b100,))


def test_identity_and_zero_rank():
    assert rank(Gf2Matrix.identity(5)) == 5
    assert rank(Gf2Matrix.zeros(4, 3)) == 0
    assert Gf2Matrix.zeros(4, 3).is_zero()


def test_rank_of_dependent_columns():
    matrix = Gf2Matrix.from_columns(3, [0b011, 0b110, 0b101])
    assert rank(matrix) == 2
    assert nullspace_basis(matrix) == [0b111]


def test_product_and_transpose(rng):
    a = random_matrix(rng, 4, 5)
    b = random_matrix(rng, 5, 3)
    expected = (a.to_array().astype(int) @ b.to_array().astype(int)) % 2
    assert ((a @ b).to_array() == expected).all()
    assert a.T.T == a
    assert (a @ b).T == b.T @ a.T


def test_mismatched_product():
    with pytest.raises(DimensionMismatchException):
        Gf2Matrix.identity(2) @ Gf2Matrix.identity(3)
    with pytest.raises(DimensionMismatchException):
        Gf2Matrix.identity(2) + Gf2Matrix.zeros(2, 3)


def test_rank_nullity(rng):
    for _ in range(50):
        rows, cols = rng.integers(1, 9, size=2)
        matrix = random_matrix(rng, int(rows), int(cols))
        kernel = nullspace_basis(matrix)
        assert rank(matrix) + len(kernel) == matrix.cols
        assert rank(matrix) == rank(matrix.T)
        assert all(matrix.apply(v) == 0 for v in kernel)
        assert rank(Gf2Matrix.from_columns(matrix.cols, kernel)) == len(kernel)
        assert len(image_basis(matrix)) == rank(matrix)


def test_quotient_basis():
    cycles = [0b0011, 0b0110, 0b1100]
    boundaries = [0b0101]
    quotient = quotient_basis(cycles, boundaries)
    assert quotient.dimension == 2
    assert quotient.representatives == (0b0011, 0b1100)
    assert quotient.indices == (0, 2)
    assert quotient.coordinates(0b0101) == 0
    assert quotient.coordinates(0b1100) == quotient.coordinates(0b1001)
    assert quotient.contains(0b1010)
    assert not quotient.contains(0b0001)
    with pytest.raises(NotInSpanException):
        quotient.coordinates(0b0001)


def test_quotient_precondition():
    with pytest.raises(PreconditionException):
        quotient_basis([0b01], [0b10])


def test_quotient_without_boundaries():
    quotient = quotient_basis([0b1, 0b10, 0b11], [])
    assert quotient.dimension == 2
    assert quotient.indices == (0, 1)


def test_solve_and_inverse(rng):
    for _ in range(30):
        matrix = random_matrix(rng, 5, 5)
        if not is_invertible(matrix):
            with pytest.raises(SingularMatrixException):
                inverse(matrix)
            continue
        assert matrix @ inverse(matrix) == Gf2Matrix.identity(5)
        targets = random_matrix(rng, 5, 2)
        assert matrix @ solve(matrix, targets) == targets


def test_solve_outside_image():
    matrix = Gf2Matrix.from_columns(2, [0b01])
    with pytest.raises(NotInSpanException):
        solve(matrix, Gf2Matrix.from_columns(2, [0b10]))
