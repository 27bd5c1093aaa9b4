"""Exact linear algebra over the rationals.

All entries are `fractions.Fraction` values; nothing in this module ever
touches floating point.  Elimination pivots on the first nonzero entry in
column order, so every result is deterministic and reproducible bit for bit.
Degenerate shapes (0 x n and n x 0) are legal everywhere.

Matrices are dense.  The row-reduction inner loop only walks the nonzero
positions of the pivot row, which makes it cheap on the very sparse systems
produced elsewhere in this package while keeping a single code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "NotSymmetric",
    "NotContained",
    "QMatrix",
    "Subspace",
    "rref",
    "row_reduce",
    "kernel_basis",
    "kernel_basis_from_rows",
    "kernel_from_reduced",
    "complement_in",
    "congruence_diagonalize",
    "determinant",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NotSymmetric(ValueError):
    """A symmetric matrix was required."""


class NotContained(ValueError):
    """The claimed subspace inclusion does not hold."""


def _fraction_row(row: Iterable) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in row)


@dataclass(frozen=True)
class QMatrix:
    """Immutable dense rational matrix, row major."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @staticmethod
    def from_rows(rows: Iterable[Iterable], cols: int | None = None) -> "QMatrix":
        data = tuple(_fraction_row(r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return QMatrix(len(data), cols, data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "QMatrix":
        row = (_ZERO,) * cols
        return QMatrix(rows, cols, tuple(row for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix(
            n,
            n,
            tuple(
                tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)
            ),
        )

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "QMatrix":
        return QMatrix(
            self.cols,
            self.rows,
            tuple(
                tuple(self.entries[i][j] for i in range(self.rows))
                for j in range(self.cols)
            ),
        )

    def mul(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in product")
        out = []
        for i in range(self.rows):
            srow = self.entries[i]
            nz = [(k, srow[k]) for k in range(self.cols) if srow[k]]
            acc = [_ZERO] * other.cols
            for k, v in nz:
                orow = other.entries[k]
                for j in range(other.cols):
                    if orow[j]:
                        acc[j] += v * orow[j]
            out.append(tuple(acc))
        return QMatrix(self.rows, other.cols, tuple(out))

    def mulvec(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = _fraction_row(vec)
        out = []
        for row in self.entries:
            s = _ZERO
            for a, b in zip(row, v):
                if a and b:
                    s += a * b
            out.append(s)
        return tuple(out)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    return False
        return True

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries)


def _rref_in_place(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """Gauss-Jordan elimination; returns the pivot columns.

    Pivot choice is the first row with a nonzero entry in the leftmost
    unprocessed column.  After return, rows[:rank] are the pivot rows and
    all later rows are zero.
    """
    pivots: list[int] = []
    nrows = len(rows)
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        pv = prow[c]
        if pv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] /= pv
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                row = rows[i]
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def row_reduce(
    rows: Iterable[Sequence[Fraction]], ncols: int
) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a row list; returns (rows, pivot columns)."""
    work = [list(r) for r in rows]
    for r in work:
        if len(r) != ncols:
            raise ValueError("row length mismatch")
    pivots = _rref_in_place(work, ncols)
    return work, pivots


def rref(matrix: QMatrix) -> tuple[QMatrix, tuple[int, ...], int]:
    """Reduced row echelon form of a matrix.

    Returns (R, pivot columns, rank); R is the unique RREF of the input.
    """
    work, pivots = row_reduce(matrix.entries, matrix.cols)
    reduced = QMatrix(matrix.rows, matrix.cols, tuple(tuple(r) for r in work))
    return reduced, tuple(pivots), len(pivots)


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n stored by its unique reduced-echelon basis.

    Basis rows have strictly increasing pivot columns, pivot entries 1 and
    zeros above each pivot, so equal subspaces compare equal structurally.
    """

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        last = -1
        for row in self.basis:
            if len(row) != self.ambient_dim:
                raise ValueError("basis vector has wrong length")
            lead = next((j for j, x in enumerate(row) if x), None)
            if lead is None or lead <= last:
                raise ValueError("basis is not in echelon form")
            last = lead

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        work = [list(_fraction_row(v)) for v in vectors]
        for v in work:
            if len(v) != ambient_dim:
                raise ValueError("vector length mismatch")
        _rref_in_place(work, ambient_dim)
        rows = tuple(tuple(r) for r in work if any(r))
        return Subspace(ambient_dim, rows)

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, QMatrix.identity(ambient_dim).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivot_columns(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def reduce(self, vector: Sequence) -> list[Fraction]:
        """Remainder of a vector after elimination against the basis."""
        v = list(_fraction_row(vector))
        if len(v) != self.ambient_dim:
            raise ValueError("vector length mismatch")
        for row, p in zip(self.basis, self.pivot_columns()):
            f = v[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        v[j] -= f * row[j]
        return v

    def contains(self, vector: Sequence) -> bool:
        return not any(self.reduce(vector))


def kernel_basis_from_rows(rows: Iterable[Sequence[Fraction]], ncols: int) -> Subspace:
    """Kernel of the linear map whose constraint rows are given.

    Identically-zero rows impose no constraints and are dropped before
    elimination, which the unique answer does not depend on.
    """
    work = [list(r) for r in rows if any(r)]
    pivots = _rref_in_place(work, ncols)
    return kernel_from_reduced(work, pivots, ncols)


def kernel_from_reduced(
    reduced: list[list[Fraction]], pivots: Sequence[int], ncols: int
) -> Subspace:
    """Kernel basis read off an already row-reduced system."""
    pivset = set(pivots)
    vectors = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [_ZERO] * ncols
        v[f] = _ONE
        for r, p in enumerate(pivots):
            coef = reduced[r][f]
            if coef:
                v[p] = -coef
        vectors.append(v)
    return Subspace.from_vectors(ncols, vectors)


def kernel_basis(matrix: QMatrix) -> Subspace:
    """Basis of {v : Mv = 0} with dim = cols - rank."""
    return kernel_basis_from_rows(matrix.entries, matrix.cols)


def complement_in(sub: Subspace, within: Subspace) -> Subspace:
    """Deterministic complement of `sub` inside `within`.

    Raises NotContained unless every basis vector of `sub` lies in `within`.
    The result together with `sub` spans `within` and meets `sub` only in 0.
    """
    if sub.ambient_dim != within.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    for v in sub.basis:
        if not within.contains(v):
            raise NotContained("subspace is not contained in the ambient one")
    # Echelon rows keyed by pivot column; start from `sub` and sweep the
    # basis of `within`, keeping each reduced remainder that survives.
    held: list[tuple[int, list[Fraction]]] = [
        (p, list(row)) for p, row in zip(sub.pivot_columns(), sub.basis)
    ]
    held.sort()
    kept: list[list[Fraction]] = []
    for w in within.basis:
        v = list(w)
        for p, row in held:
            f = v[p]
            if f:
                for j in range(p, len(v)):
                    if row[j]:
                        v[j] -= f * row[j]
        lead = next((j for j, x in enumerate(v) if x), None)
        if lead is None:
            continue
        if v[lead] != 1:
            lv = v[lead]
            for j in range(lead, len(v)):
                if v[j]:
                    v[j] /= lv
        held.append((lead, v))
        held.sort(key=lambda t: t[0])
        kept.append(v)
    out = Subspace.from_vectors(sub.ambient_dim, kept)
    assert out.dim == within.dim - sub.dim
    return out


def congruence_diagonalize(matrix: QMatrix) -> tuple[QMatrix, tuple[Fraction, ...]]:
    """Diagonalize a symmetric matrix by congruence.

    Returns (P, d) with P invertible and P^T S P = diag(d) exactly.  Only
    symmetric row/column operations are used, so the multiset of signs of d
    is the congruence invariant of S.
    """
    if not matrix.is_symmetric():
        raise NotSymmetric("congruence diagonalization needs a symmetric matrix")
    n = matrix.rows
    a = matrix.to_lists()
    p = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    for k in range(n):
        if not a[k][k]:
            j = next((i for i in range(k + 1, n) if a[i][i]), -1)
            if j >= 0:
                for t in range(n):
                    a[t][k], a[t][j] = a[t][j], a[t][k]
                a[k], a[j] = a[j], a[k]
                for t in range(n):
                    p[t][k], p[t][j] = p[t][j], p[t][k]
            else:
                j = next((i for i in range(k + 1, n) if a[k][i]), -1)
                if j < 0:
                    continue
                # No nonzero diagonal is available: fold column/row j into
                # k, which makes a[k][k] = 2 a[k][j] != 0.
                for t in range(n):
                    a[t][k] += a[t][j]
                for t in range(n):
                    a[k][t] += a[j][t]
                for t in range(n):
                    p[t][k] += p[t][j]
        piv = a[k][k]
        if not piv:
            continue
        for i in range(k + 1, n):
            f = a[k][i] / piv
            if f:
                for t in range(n):
                    a[t][i] -= f * a[t][k]
                for t in range(n):
                    a[i][t] -= f * a[k][t]
                for t in range(n):
                    p[t][i] -= f * p[t][k]
    for i in range(n):
        for j in range(n):
            if i != j and a[i][j]:
                raise AssertionError("congruence reduction left an off-diagonal entry")
    diag = tuple(a[i][i] for i in range(n))
    return QMatrix(n, n, tuple(tuple(row) for row in p)), diag


def determinant(matrix: QMatrix) -> Fraction:
    """Exact determinant via fraction elimination with row swaps."""
    if matrix.rows != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    a = matrix.to_lists()
    det = _ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), -1)
        if pr < 0:
            return _ZERO
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f /= piv
                row = a[i]
                prow = a[c]
                for j in range(c, n):
                    if prow[j]:
                        row[j] -= f * prow[j]
    return det
