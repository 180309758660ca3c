"""Exact dense linear algebra over prime fields GF(p).

All residues are stored as plain int64 numpy arrays reduced to ``[0, p)``.
The modulus is capped at 65521 (the largest 16-bit prime) so every product
of two residues, and every dot product at the scales this package handles,
fits comfortably in int64 intermediates.

Basis choices are deterministic everywhere: ``rref`` picks the first nonzero
entry below the current row as pivot, ``kernel_basis`` returns the canonical
free-variable basis, ``image_basis`` returns the pivot columns of the input.
Downstream outputs are therefore reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FieldMismatchError, ShapeError, ValidationError

MAX_PRIME = 65521


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p), 2 <= p <= 65521."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise ValidationError(f"field modulus must be an integer, got {self.p!r}")
        if self.p < 2 or self.p > MAX_PRIME:
            raise ValidationError(f"field modulus {self.p} outside [2, {MAX_PRIME}]")
        if not _is_prime(self.p):
            raise ValidationError(f"field modulus {self.p} is not prime")

    def __repr__(self) -> str:
        return f"GF({self.p})"


@dataclass(frozen=True, eq=False)
class FFMatrix:
    """Dense matrix over GF(p); immutable after construction.

    ``data`` is always a 2-D int64 array with entries in ``[0, p)``.
    Zero-by-n and n-by-zero matrices are legal and represent maps to or
    from the zero space.
    """

    field: FieldSpec
    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise ShapeError(f"matrix data must be 2-D, got shape {arr.shape}")
        arr = np.mod(arr, self.field.p)
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "FFMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "FFMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FFMatrix":
        """Build a matrix from a row-major list of lists.

        ``cols`` is required when ``rows`` is empty (a 0 x cols matrix has no
        rows to infer the width from).
        """
        if len(rows) == 0:
            if cols is None:
                raise ShapeError("cols is required for a matrix with no rows")
            return cls.zeros(field, 0, cols)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ShapeError(f"ragged rows: widths {sorted(widths)}")
        if cols is not None and widths != {cols}:
            raise ShapeError(f"declared cols {cols} != row width {widths.pop()}")
        return cls(field, np.array(rows, dtype=np.int64).reshape(len(rows), -1))

    def transpose(self) -> "FFMatrix":
        return FFMatrix(self.field, self.data.T)

    def column(self, j: int) -> "FFMatrix":
        return FFMatrix(self.field, self.data[:, j : j + 1])

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        return mat_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FFMatrix):
            return NotImplemented
        return self.field == other.field and self.data.shape == other.data.shape and bool(
            np.array_equal(self.data, other.data)
        )

    def __repr__(self) -> str:
        return f"FFMatrix({self.rows}x{self.cols} over {self.field})"


def ff_inv(a: int, field: FieldSpec) -> int:
    """Multiplicative inverse of the residue ``a`` in GF(p).

    Raises:
        ZeroDivisionError: if ``a`` is 0 mod p.
    """
    a %= field.p
    if a == 0:
        raise ZeroDivisionError("0 has no multiplicative inverse")
    return pow(a, -1, field.p)


def mat_mul(a: FFMatrix, b: FFMatrix) -> FFMatrix:
    """Matrix product over the common field.

    Raises:
        FieldMismatchError: operands over different fields.
        ShapeError: inner dimensions disagree.
    """
    if a.field != b.field:
        raise FieldMismatchError(f"cannot multiply over {a.field} and {b.field}")
    if a.cols != b.rows:
        raise ShapeError(f"inner dimensions disagree: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    return FFMatrix(a.field, (a.data @ b.data) % a.field.p)


def rref(m: FFMatrix) -> tuple[FFMatrix, int, tuple[int, ...]]:
    """Reduced row echelon form over GF(p).

    Gauss-Jordan elimination with deterministic pivoting: for each column the
    first nonzero entry at or below the current row becomes the pivot.

    Args:
        m: input matrix (not mutated).

    Returns:
        ``(R, rank, pivot_cols)`` where R is the unique RREF of ``m``, rank is
        the number of nonzero rows of R and pivot_cols is strictly increasing.
    """
    p = m.field.p
    a = m.data.copy()
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = int(nz[0]) + row
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), -1, p)
        a[row] = (a[row] * inv) % p
        for r in range(n_rows):
            if r != row and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[row]) % p
        pivots.append(col)
        row += 1
    return FFMatrix(m.field, a), len(pivots), tuple(pivots)


def rank(m: FFMatrix) -> int:
    return rref(m)[1]


def kernel_basis(m: FFMatrix) -> FFMatrix:
    """Basis of the null space {x : Mx = 0} as matrix columns.

    Returns the canonical free-variable basis read off the RREF: one column
    per non-pivot column ``f`` of M, carrying 1 at coordinate ``f`` and
    ``-R[i, f]`` at each pivot coordinate. Shape is cols x nullity.
    """
    r, rk, pivots = rref(m)
    p = m.field.p
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = np.zeros((m.cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, c in enumerate(pivots):
            basis[c, j] = (-int(r.data[i, f])) % p
    return FFMatrix(m.field, basis)


def image_basis(m: FFMatrix) -> FFMatrix:
    """Basis of the column space: the pivot columns of M itself.

    Pivot indices come from the RREF, so the selection is deterministic.
    Shape is rows x rank.
    """
    _, _, pivots = rref(m)
    return FFMatrix(m.field, m.data[:, list(pivots)].reshape(m.rows, len(pivots)))


def solve(a: FFMatrix, b: FFMatrix) -> FFMatrix | None:
    """Solve AX = B column-wise; None if any column is inconsistent.

    Free variables are set to 0, making the solution canonical. When the
    columns of A are independent the solution is unique.

    Raises:
        FieldMismatchError: operands over different fields.
        ShapeError: row counts disagree.
    """
    if a.field != b.field:
        raise FieldMismatchError(f"cannot solve over {a.field} with rhs over {b.field}")
    if a.rows != b.rows:
        raise ShapeError(f"lhs has {a.rows} rows, rhs has {b.rows}")
    aug = FFMatrix(a.field, np.hstack([a.data, b.data]))
    r, _, pivots = rref(aug)
    if any(c >= a.cols for c in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c, :] = r.data[i, a.cols :]
    return FFMatrix(a.field, x)


def hstack(parts: Sequence[FFMatrix]) -> FFMatrix:
    """Concatenate matrices left to right; all must share field and rows."""
    if not parts:
        raise ShapeError("hstack needs at least one matrix")
    f = parts[0].field
    n = parts[0].rows
    for m in parts[1:]:
        if m.field != f:
            raise FieldMismatchError("hstack over mixed fields")
        if m.rows != n:
            raise ShapeError(f"hstack row mismatch: {n} vs {m.rows}")
    return FFMatrix(f, np.hstack([m.data for m in parts]))
