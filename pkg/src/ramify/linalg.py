"""Dense exact linear algebra over finite fields."""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionMismatch, FieldMismatch, SingularMatrix
from .fields import FieldElement, FiniteField


class MatrixFF:
    """Square matrix over a finite field; immutable."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field: FiniteField, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch("matrix must be square")
            for x in r:
                if x.field != field:
                    raise FieldMismatch("entry over a different field")
        self.field = field
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, field: FiniteField, n: int) -> "MatrixFF":
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_int_rows(cls, field: FiniteField, rows: Sequence[Sequence]) -> "MatrixFF":
        """Entries given as ints (prime subfield) or coordinate vectors."""
        out = []
        for r in rows:
            row = []
            for x in r:
                if isinstance(x, int):
                    row.append(field.from_int(x))
                else:
                    row.append(field.from_coeffs(x))
            out.append(row)
        return cls(field, out)

    def key(self) -> tuple[int, ...]:
        """Canonical integer tuple; used for ordering and hashing."""
        return tuple(x.key() for row in self.rows for x in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixFF)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.field, self.rows))

    def __repr__(self) -> str:
        return f"MatrixFF({self.n}x{self.n}, key={self.key()})"

    def _check(self, other: "MatrixFF") -> None:
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")

    def __mul__(self, other: "MatrixFF") -> "MatrixFF":
        self._check(other)
        n = self.n
        zero = self.field.zero()
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            new = []
            for col in cols:
                s = zero
                for a, b in zip(row, col):
                    if a and b:
                        s = s + a * b
                new.append(s)
            out.append(new)
        return MatrixFF(self.field, out)

    def __sub__(self, other: "MatrixFF") -> "MatrixFF":
        self._check(other)
        return MatrixFF(
            self.field,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __pow__(self, e: int) -> "MatrixFF":
        if e < 0:
            return self.inverse() ** (-e)
        result = MatrixFF.identity(self.field, self.n)
        acc = self
        while e:
            if e & 1:
                result = result * acc
            acc = acc * acc
            e >>= 1
        return result

    def is_identity(self) -> bool:
        return self == MatrixFF.identity(self.field, self.n)

    def is_zero(self) -> bool:
        return not any(any(x for x in row) for row in self.rows)

    def rank(self) -> int:
        return _row_reduce([list(r) for r in self.rows], self.field)[1]

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def inverse(self) -> "MatrixFF":
        n = self.n
        field = self.field
        ident = MatrixFF.identity(field, n)
        aug = [list(r1) + list(r2) for r1, r2 in zip(self.rows, ident.rows)]
        reduced, rank = _row_reduce(aug, field, ncols=n)
        if rank < n:
            raise SingularMatrix("matrix is not invertible")
        return MatrixFF(field, [row[n:] for row in reduced])


def _row_reduce(rows: list[list[FieldElement]], field: FiniteField, ncols: int | None = None):
    """In-place reduced row echelon form on the first ncols columns.

    Returns (rows, rank); pivot choice is deterministic (first nonzero).
    """
    if not rows:
        return rows, 0
    total_cols = len(rows[0])
    if ncols is None:
        ncols = total_cols
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [inv * x for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rows, rank


def nullspace(rows: list[list[FieldElement]], ncols: int, field: FiniteField):
    """Basis of the right kernel of the given row system, deterministic."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        one, zero = field.one(), field.zero()
        return [
            tuple(one if j == i else zero for j in range(ncols)) for i in range(ncols)
        ]
    reduced, rank = _row_reduce(work, field)
    pivots = []
    for row in reduced[:rank]:
        for j, x in enumerate(row):
            if x:
                pivots.append(j)
                break
    free = [j for j in range(ncols) if j not in pivots]
    zero, one = field.zero(), field.one()
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for row, pj in zip(reduced[:rank], pivots):
            vec[pj] = -row[f]
        basis.append(tuple(vec))
    return basis


def fixed_subspace(mats: Sequence[MatrixFF]):
    """Common fixed space {v : Mv = v for all M}; returns (dimension, basis)."""
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    field = mats[0].field
    n = mats[0].n
    rows = []
    for m in mats:
        if m.field != field or m.n != n:
            raise DimensionMismatch("matrices of mixed shape or field")
        diff = m - MatrixFF.identity(field, n)
        rows.extend([list(r) for r in diff.rows])
    basis = nullspace(rows, n, field)
    return len(basis), tuple(basis)
