import pytest
import numpy as np

from ray_stmod.exceptions import FieldMismatch, NoSolution, ShapeError
from ray_stmod.linalg import (EchelonSpan, eye, matmul, nullspace, rank,
                              row_basis, row_reduce, rref_solve, solve,
                              solve_exact, zeros)


@pytest.fixture
def GF(gf3):
    return gf3.GF


def test_rank_and_row_reduce(GF):
    A = GF([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    assert rank(A) == 2
    red = row_reduce(A)
    assert red.pivots == (0, 2)
    assert red.rref[:2].tolist() == [[1, 2, 0], [0, 0, 1]]
    assert row_basis(A).shape == (2, 3)


def test_row_reduce_limited_columns(GF):
    A = GF([[0, 1, 1], [0, 2, 0]])
    red = row_reduce(A, ncols=1)
    assert red.rank == 0
    with pytest.raises(ShapeError):
        row_reduce(A, ncols=4)


def test_nullspace(gf2, GF):
    K = nullspace(gf2.GF([[1, 1]]))
    assert K.tolist() == [[1], [1]]
    A = GF([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    K = nullspace(A)
    assert K.shape == (3, 1)
    assert not np.any(matmul(A, K).view(np.ndarray))
    assert nullspace(eye(GF, 3)).shape == (3, 0)


def test_empty_shapes(GF):
    assert matmul(zeros(GF, (2, 0)), zeros(GF, (0, 3))).shape == (2, 3)
    assert rank(zeros(GF, (0, 4))) == 0
    assert nullspace(zeros(GF, (0, 2))).shape == (2, 2)


def test_solve_reports_inconsistent_columns(GF):
    A = GF([[1, 0], [0, 0]])
    B = GF([[1, 2], [0, 1]])
    result = solve(A, B)
    assert result.consistent == [True, False]
    assert result.solution[:, 0].tolist() == [1, 0]
    with pytest.raises(NoSolution) as exc:
        solve_exact(A, B)
    assert exc.value.context["columns"] == [1]


def test_rref_solve_modes(GF):
    A = GF([[1, 1], [2, 2]])
    assert rref_solve(A).rank == 1
    assert rref_solve(A, "nullspace").nullspace.shape == (2, 1)
    out = rref_solve(A, "solve", GF([[2], [1]]))
    assert out.consistent == [True]
    with pytest.raises(ShapeError):
        rref_solve(A, "solve")


def test_field_mismatch(gf2, GF):
    with pytest.raises(FieldMismatch):
        matmul(eye(GF, 2), eye(gf2.GF, 2))


def test_echelon_span(GF):
    span = EchelonSpan(GF, 3)
    assert span.extend(GF([[1, 1, 0]])) == 1
    assert not span.try_extend(GF([[2, 2, 0], [0, 0, 1]]), required=2)
    assert span.rank == 1
    assert span.try_extend(GF([[0, 1, 0]]), required=1)
    assert span.contains(GF([[1, 2, 0]]))
    assert not span.contains(GF([[0, 0, 1]]))
    assert span.contains_unit(0)
    assert span.contains_unit(1)
    assert not span.contains_unit(2)
    assert span.increase(GF([[0, 0, 2]])) == 1
    assert span.rank == 2
    new = span.absorb(GF([[1, 0, 1], [0, 0, 1]]))
    assert new.shape[0] == 1
    assert span.rank == 3


def test_echelon_span_width_check(GF):
    span = EchelonSpan(GF, 2)
    with pytest.raises(ShapeError):
        span.extend(GF([[1, 0, 0]]))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
