"""Dense exact linear algebra over ``galois`` field arrays.

Every routine accepts 0 x m and m x 0 matrices. Reductions go through
``FieldArray.row_reduce`` (Gauss-Jordan, first nonzero pivot), so the
reduced echelon form, and everything derived from it, is canonical.
"""
from typing import List, NamedTuple, Optional, Sequence, Tuple, Type

import galois
import numpy as np

from ray_stmod.exceptions import FieldMismatch, NoSolution, ShapeError


class RowReduction(NamedTuple):
    rref: galois.FieldArray
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


class SolveResult(NamedTuple):
    solution: galois.FieldArray
    consistent: List[bool]


class RrefSolveResult(NamedTuple):
    rank: int
    pivots: Tuple[int, ...]
    nullspace: Optional[galois.FieldArray] = None
    solution: Optional[galois.FieldArray] = None
    consistent: Optional[List[bool]] = None


def _check_matrix(A, name: str = "A") -> None:
    if not isinstance(A, galois.FieldArray):
        raise TypeError(f"{name} must be a galois FieldArray, got {type(A)}")
    if A.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {A.shape}")


def _check_same_field(A, B) -> None:
    if type(A) is not type(B):
        raise FieldMismatch(
            f"Cannot combine {type(A).name} and {type(B).name} matrices")


def eye(field: Type[galois.FieldArray], n: int) -> galois.FieldArray:
    return field(np.eye(n, dtype=np.int64))


def zeros(field: Type[galois.FieldArray], shape) -> galois.FieldArray:
    return field(np.zeros(shape, dtype=np.int64))


def matmul(A: galois.FieldArray, B: galois.FieldArray) -> galois.FieldArray:
    """``A @ B`` that also handles empty inner or outer dimensions."""
    _check_same_field(A, B)
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"Cannot multiply {A.shape} by {B.shape}")
    if 0 in A.shape or 0 in B.shape:
        return zeros(type(A), (A.shape[0], B.shape[1]))
    return A @ B


def kron(A: galois.FieldArray, B: galois.FieldArray) -> galois.FieldArray:
    _check_same_field(A, B)
    (m1, n1), (m2, n2) = A.shape, B.shape
    if 0 in (m1, n1, m2, n2):
        return zeros(type(A), (m1 * m2, n1 * n2))
    out = A[:, None, :, None] * B[None, :, None, :]
    return out.reshape(m1 * m2, n1 * n2)


def vstack(blocks: Sequence[galois.FieldArray]) -> galois.FieldArray:
    field = type(blocks[0])
    for b in blocks:
        _check_same_field(blocks[0], b)
    return field(
        np.vstack([b.view(np.ndarray).astype(np.int64) for b in blocks]))


def hstack(blocks: Sequence[galois.FieldArray]) -> galois.FieldArray:
    field = type(blocks[0])
    for b in blocks:
        _check_same_field(blocks[0], b)
    return field(
        np.hstack([b.view(np.ndarray).astype(np.int64) for b in blocks]))


def block_diag(blocks: Sequence[galois.FieldArray],
               field: Optional[Type[galois.FieldArray]] = None
               ) -> galois.FieldArray:
    field = field or type(blocks[0])
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        _check_same_field(field.Zeros(1), b)
        out[r:r + b.shape[0], c:c + b.shape[1]] = b.view(np.ndarray)
        r += b.shape[0]
        c += b.shape[1]
    return field(out)


def row_reduce(A: galois.FieldArray,
               ncols: Optional[int] = None) -> RowReduction:
    """Reduced row echelon form of ``A``, pivoting on the first ``ncols``
    columns only (all of them by default)."""
    _check_matrix(A)
    m, n = A.shape
    ncols = n if ncols is None else ncols
    if ncols > n:
        raise ShapeError(f"ncols={ncols} exceeds the {n} columns of A")
    if m == 0 or ncols == 0:
        return RowReduction(A.copy(), ())
    rref = A.row_reduce(ncols=ncols)
    head = rref[:, :ncols].view(np.ndarray)
    nonzero = np.any(head != 0, axis=1)
    pivots = tuple(int(np.argmax(row != 0)) for row in head[nonzero])
    return RowReduction(rref, pivots)


def rank(A: galois.FieldArray) -> int:
    return row_reduce(A).rank


def row_basis(A: galois.FieldArray) -> galois.FieldArray:
    """Canonical basis of the row space: the nonzero rows of the RREF."""
    red = row_reduce(A)
    return red.rref[:red.rank]


def nullspace(A: galois.FieldArray) -> galois.FieldArray:
    """Basis of ker(A) as the columns of an ``n x k`` matrix.

    The transpose of the result is in reduced row echelon form.
    """
    _check_matrix(A)
    field = type(A)
    n = A.shape[1]
    red = row_reduce(A)
    pivots = list(red.pivots)
    free = [j for j in range(n) if j not in set(pivots)]
    if not free:
        return zeros(field, (n, 0))
    basis = zeros(field, (len(free), n))
    basis[:, free] = eye(field, len(free))
    if pivots:
        basis[:, pivots] = -red.rref[:len(pivots)][:, free].T
    return row_basis(basis).T


def solve(A: galois.FieldArray, B: galois.FieldArray) -> SolveResult:
    """One particular solution of ``A X = B`` per column of ``B``.

    Columns with no solution are flagged in ``consistent`` and filled
    with zeros in ``solution``.
    """
    _check_matrix(A)
    _check_matrix(B, "B")
    _check_same_field(A, B)
    m, n = A.shape
    if B.shape[0] != m:
        raise ShapeError(
            f"B must have {m} rows to match A, got shape {B.shape}")
    k = B.shape[1]
    field = type(A)
    solution = zeros(field, (n, k))
    if k == 0:
        return SolveResult(solution, [])
    if m == 0:
        return SolveResult(solution, [True] * k)
    red = row_reduce(hstack([A, B]), ncols=n)
    r = red.rank
    rest = red.rref[r:, n:].view(np.ndarray)
    consistent = [bool(not np.any(rest[:, j])) for j in range(k)]
    if r:
        solution[list(red.pivots), :] = red.rref[:r, n:]
    for j, ok in enumerate(consistent):
        if not ok:
            solution[:, j] = 0
    return SolveResult(solution, consistent)


def solve_exact(A: galois.FieldArray,
                B: galois.FieldArray) -> galois.FieldArray:
    result = solve(A, B)
    bad = [j for j, ok in enumerate(result.consistent) if not ok]
    if bad:
        raise NoSolution(
            f"A X = B has no solution in columns {bad}", columns=bad)
    return result.solution


def rref_solve(A: galois.FieldArray,
               mode: str = "rank",
               B: Optional[galois.FieldArray] = None) -> RrefSolveResult:
    """Rank, pivots, and depending on ``mode`` a nullspace basis or a
    solution of ``A X = B``.

    Args:
        A: The coefficient matrix.
        mode (str): One of ``"rank"``, ``"nullspace"`` or ``"solve"``.
        B: Right-hand sides, required in solve mode.
    """
    if mode not in ("rank", "nullspace", "solve"):
        raise ValueError(
            f"mode must be one of rank, nullspace, solve, got {mode!r}")
    red = row_reduce(A)
    if mode == "rank":
        return RrefSolveResult(red.rank, red.pivots)
    if mode == "nullspace":
        return RrefSolveResult(red.rank, red.pivots, nullspace=nullspace(A))
    if B is None:
        raise ShapeError("solve mode requires a right-hand side B")
    result = solve(A, B)
    return RrefSolveResult(
        red.rank,
        red.pivots,
        solution=result.solution,
        consistent=result.consistent)


class EchelonSpan:
    """Incrementally grown row space kept in reduced echelon form.

    Rank-greedy loops add candidate rows one batch at a time; each batch
    costs one reduction against the current basis instead of a fresh rank
    computation of the whole stack.
    """

    def __init__(self,
                 field: Type[galois.FieldArray],
                 width: int,
                 rows: Optional[galois.FieldArray] = None):
        self.field = field
        self.width = width
        self._basis = zeros(field, (0, width))
        self._pivots: List[int] = []
        if rows is not None:
            self.extend(rows)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def basis(self) -> galois.FieldArray:
        return self._basis.copy()

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(self._pivots)

    def copy(self) -> "EchelonSpan":
        other = EchelonSpan(self.field, self.width)
        other._basis = self._basis.copy()
        other._pivots = list(self._pivots)
        return other

    def _as_rows(self, vectors: galois.FieldArray) -> galois.FieldArray:
        if vectors.ndim == 1:
            vectors = vectors.reshape(1, -1)
        if vectors.shape[1] != self.width:
            raise ShapeError(f"Expected rows of width {self.width}, "
                             f"got shape {vectors.shape}")
        if type(vectors) is not self.field:
            raise FieldMismatch(f"Rows live in {type(vectors).name}, "
                                f"expected {self.field.name}")
        return vectors

    def reduce(self, vectors: galois.FieldArray) -> galois.FieldArray:
        """Residues of ``vectors`` modulo the span (zero on every pivot)."""
        vectors = self._as_rows(vectors)
        if not self._pivots or vectors.shape[0] == 0:
            return vectors.copy()
        return vectors - matmul(vectors[:, self._pivots], self._basis)

    def _new_rows(self, vectors):
        red = row_reduce(self.reduce(vectors))
        return red.rref[:red.rank], red.pivots

    def _merge(self, new_rows, new_pivots) -> None:
        if not new_pivots:
            return
        old = self._basis
        if old.shape[0]:
            old = old - matmul(old[:, list(new_pivots)], new_rows)
        rows = vstack([old, new_rows])
        pivots = self._pivots + list(new_pivots)
        order = np.argsort(pivots, kind="stable")
        self._basis = rows[order]
        self._pivots = [pivots[i] for i in order]

    def increase(self, vectors: galois.FieldArray) -> int:
        """Rank gained by adding ``vectors``, without adding them."""
        return len(self._new_rows(vectors)[1])

    def extend(self, vectors: galois.FieldArray) -> int:
        new_rows, new_pivots = self._new_rows(vectors)
        self._merge(new_rows, new_pivots)
        return len(new_pivots)

    def try_extend(self, vectors: galois.FieldArray, required: int) -> bool:
        """Add ``vectors`` only if they raise the rank by ``required``."""
        new_rows, new_pivots = self._new_rows(vectors)
        if len(new_pivots) != required:
            return False
        self._merge(new_rows, new_pivots)
        return True

    def contains(self, vectors: galois.FieldArray) -> bool:
        return not np.any(self.reduce(vectors).view(np.ndarray))

    def coordinates(self, vectors: galois.FieldArray) -> galois.FieldArray:
        """Coefficients of ``vectors`` in the echelon basis (valid for
        members of the span)."""
        vectors = self._as_rows(vectors)
        return vectors[:, self._pivots]

    def absorb(self, vectors: galois.FieldArray) -> galois.FieldArray:
        """Add ``vectors`` and return the reduced rows that were new.

        Spinning loops feed the returned rows back in after acting on
        them, so every vector of the final span is eventually acted on.
        """
        new_rows, new_pivots = self._new_rows(vectors)
        self._merge(new_rows, new_pivots)
        return new_rows

    def contains_unit(self, j: int) -> bool:
        """Whether the standard basis vector e_j lies in the span."""
        if j not in self._pivots:
            return False
        row = self._basis[self._pivots.index(j)].view(np.ndarray)
        return int(np.count_nonzero(row)) == 1
