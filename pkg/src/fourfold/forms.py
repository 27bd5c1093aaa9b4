"""Closed oriented simply connected four-manifolds via their intersection forms.

An intersection form is a symmetric unimodular integer matrix; rank and
signature are computed exactly by congruence diagonalization.  From the form
we present the rational cohomology algebra by structure constants (degrees 0,
2 and 4, zero differential), evaluate the closed-form homotopy rank tables,
and classify rational homotopy type by rank and signature.  A small catalog
covers the classical examples: complex projective hypersurfaces, complete
intersections, the K3 surface and connected sums of projective planes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import NotSymmetric, QMatrix, congruence_diagonalize, determinant

__all__ = [
    "NotUnimodular",
    "IntersectionForm",
    "AlgebraElement",
    "CohomologyAlgebra",
    "RankTable",
    "make_form",
    "cohomology_algebra",
    "algebra_from_split",
    "closed_form_ranks",
    "hypersurface_b2",
    "complete_intersection_b2",
    "rationally_equivalent",
    "canonical_connected_sum",
    "diagonal_form",
    "empty_form",
    "hyperbolic_form",
    "e8_form",
    "k3_form",
    "connected_sum_form",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NotUnimodular(ValueError):
    """The matrix determinant is not +1 or -1."""


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric unimodular integer matrix with rank and signature split."""

    matrix: tuple[tuple[int, ...], ...]
    b2: int
    b2_plus: int
    b2_minus: int

    @property
    def rank(self) -> int:
        return self.b2

    @property
    def signature(self) -> int:
        return self.b2_plus - self.b2_minus


def _validated_int(x) -> int:
    # bools are ints in Python; a form entry must be a plain integer
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"form entries must be integers, got {x!r}")
    return x


def make_form(matrix: Sequence[Sequence[int]]) -> IntersectionForm:
    """Validate a square symmetric integer matrix and derive its invariants.

    The empty 0 x 0 matrix is the rank-zero form (the four-sphere class) and
    skips the determinant check.  For positive rank, |det| must be 1; the
    negative-definite diagonal forms are legal (det -1 in odd rank).
    """
    rows = [list(r) for r in matrix]
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise ValueError("form matrix must be square")
    data = tuple(tuple(_validated_int(x) for x in r) for r in rows)
    for i in range(n):
        for j in range(i):
            if data[i][j] != data[j][i]:
                raise NotSymmetric("intersection form must be symmetric")
    if n == 0:
        return IntersectionForm(data, 0, 0, 0)
    qm = QMatrix.from_rows(data)
    det = determinant(qm)
    if det != 1 and det != -1:
        raise NotUnimodular(f"determinant is {det}, expected +1 or -1")
    _, diag = congruence_diagonalize(qm)
    plus = sum(1 for x in diag if x > 0)
    minus = sum(1 for x in diag if x < 0)
    assert plus + minus == n  # unimodular, so no zero can appear
    return IntersectionForm(data, n, plus, minus)


# ---------------------------------------------------------------- catalog


def diagonal_form(entries: Sequence[int]) -> IntersectionForm:
    n = len(entries)
    return make_form([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def empty_form() -> IntersectionForm:
    return make_form([])


def hyperbolic_form() -> IntersectionForm:
    return make_form([[0, 1], [1, 0]])


_E8_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7))


def e8_form(negative: bool = False) -> IntersectionForm:
    rows = [[0] * 8 for _ in range(8)]
    for i in range(8):
        rows[i][i] = 2
    for i, j in _E8_EDGES:
        rows[i][j] = rows[j][i] = -1
    if negative:
        rows = [[-x for x in r] for r in rows]
    return make_form(rows)


def _block_diagonal(blocks: Sequence[IntersectionForm]) -> list[list[int]]:
    size = sum(b.b2 for b in blocks)
    rows = [[0] * size for _ in range(size)]
    offset = 0
    for b in blocks:
        for i in range(b.b2):
            for j in range(b.b2):
                rows[offset + i][offset + j] = b.matrix[i][j]
        offset += b.b2
    return rows


def k3_form() -> IntersectionForm:
    """Three hyperbolic planes plus two negative E8 blocks: b2 22, signature -16."""
    h = hyperbolic_form()
    e8m = e8_form(negative=True)
    return make_form(_block_diagonal([h, h, h, e8m, e8m]))


def connected_sum_form(plus: int, minus: int) -> IntersectionForm:
    return diagonal_form([1] * plus + [-1] * minus)


# --------------------------------------------------------- cohomology algebra


@dataclass(frozen=True)
class AlgebraElement:
    """Element of a graded algebra, as coordinates in the degree basis."""

    degree: int
    coords: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class CohomologyAlgebra:
    """Rational cohomology of a four-manifold, by basis and structure constants.

    Degree 0 is spanned by the unit, degree 2 by classes x1..xb2 that
    diagonalize the intersection pairing, degree 4 by the volume class V.
    Products: x_i * x_j = 0 for i != j, x_i^2 = +V or -V according to the
    signature split, and V annihilates everything of positive degree.  At
    rank zero the algebra is spanned by the unit and V alone.  The
    differential is zero throughout.
    """

    b2: int
    b2_plus: int
    b2_minus: int

    def __post_init__(self) -> None:
        if self.b2 != self.b2_plus + self.b2_minus or min(self.b2_plus, self.b2_minus) < 0:
            raise ValueError("invalid signature split")

    @property
    def signature(self) -> int:
        return self.b2_plus - self.b2_minus

    def dim(self, degree: int) -> int:
        if degree == 0 or degree == 4:
            return 1
        if degree == 2:
            return self.b2
        return 0

    def total_dim(self) -> int:
        return self.b2 + 2

    def basis_names(self, degree: int) -> tuple[str, ...]:
        if degree == 0:
            return ("1",)
        if degree == 2:
            return tuple(f"x{i + 1}" for i in range(self.b2))
        if degree == 4:
            return ("V",)
        return ()

    def sign(self, i: int) -> int:
        return 1 if i < self.b2_plus else -1

    def zero(self, degree: int) -> AlgebraElement:
        return AlgebraElement(degree, (_ZERO,) * self.dim(degree))

    def unit(self) -> AlgebraElement:
        return AlgebraElement(0, (_ONE,))

    def basis_element(self, degree: int, i: int) -> AlgebraElement:
        d = self.dim(degree)
        return AlgebraElement(
            degree, tuple(_ONE if j == i else _ZERO for j in range(d))
        )

    def element(self, degree: int, coords: Sequence) -> AlgebraElement:
        coords = tuple(c if isinstance(c, Fraction) else Fraction(c) for c in coords)
        if len(coords) != self.dim(degree):
            raise ValueError("coordinate length mismatch")
        return AlgebraElement(degree, coords)

    def add(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        if a.degree != b.degree:
            raise ValueError("cannot add elements of different degrees")
        return AlgebraElement(a.degree, tuple(x + y for x, y in zip(a.coords, b.coords)))

    def scale(self, c, a: AlgebraElement) -> AlgebraElement:
        c = c if isinstance(c, Fraction) else Fraction(c)
        return AlgebraElement(a.degree, tuple(c * x for x in a.coords))

    def mul(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        degree = a.degree + b.degree
        if self.dim(degree) == 0:
            return self.zero(degree)
        if a.degree == 0:
            return self.scale(a.coords[0], AlgebraElement(degree, b.coords))
        if b.degree == 0:
            return self.scale(b.coords[0], AlgebraElement(degree, a.coords))
        if a.degree == 2 and b.degree == 2:
            acc = _ZERO
            for i, (x, y) in enumerate(zip(a.coords, b.coords)):
                if x and y:
                    acc += x * y * self.sign(i)
            return AlgebraElement(4, (acc,))
        # positive-degree products landing above degree 4 were caught above
        return self.zero(degree)


def cohomology_algebra(form: IntersectionForm) -> CohomologyAlgebra:
    return CohomologyAlgebra(form.b2, form.b2_plus, form.b2_minus)


def algebra_from_split(plus: int, minus: int) -> CohomologyAlgebra:
    return CohomologyAlgebra(plus + minus, plus, minus)


# ---------------------------------------------------------------- rank tables


@dataclass(frozen=True)
class RankTable:
    """Known homotopy group ranks by degree.

    When `finite_tail` is set, every unlisted degree has rank zero (the
    rationally elliptic cases).  Otherwise unlisted degrees are unknown
    rather than zero.
    """

    ranks: Mapping[int, int] = field(default_factory=dict)
    finite_tail: bool = False

    def rank(self, degree: int):
        if degree in self.ranks:
            return self.ranks[degree]
        return 0 if self.finite_tail else None

    def known_degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self.ranks))


def closed_form_ranks(b2: int, max_degree: int = 7) -> RankTable:
    """Ranks of the rational homotopy groups as functions of b2 alone.

    Ranks 0..2 are rationally elliptic with a full table; above rank 2 the
    homotopy is infinite-dimensional and only degrees up to 4 (plus degree 5
    at rank 3) admit closed forms, so higher degrees are left unknown.
    """
    if b2 < 0:
        raise ValueError("b2 must be nonnegative")
    if b2 == 0:
        entries, tail = {4: 1, 7: 1}, True
    elif b2 == 1:
        entries, tail = {2: 1, 5: 1}, True
    elif b2 == 2:
        entries, tail = {2: 2, 3: 2}, True
    else:
        entries = {
            2: b2,
            3: b2 * (b2 + 1) // 2 - 1,
            4: b2 * (b2 * b2 - 4) // 3,
        }
        if b2 == 3:
            entries[5] = 10
        tail = False
    entries = {r: v for r, v in entries.items() if r <= max_degree}
    return RankTable(entries, tail)


def hypersurface_b2(d: int) -> int:
    """Second Betti number of a smooth degree-d surface in complex projective 3-space."""
    if d < 1:
        raise ValueError("degree must be positive")
    return d * (6 - 4 * d + d * d) - 2


def complete_intersection_b2(degrees: Sequence[int]) -> int:
    """Second Betti number of a complete intersection surface of the given type.

    Computed from the Euler characteristic
    e = [C(n+3,2) - (n+3)*sum d_i + sum d_i^2 + sum_{i<j} d_i d_j] * prod d_i
    as e - 2.  The single-degree case reproduces the hypersurface formula.
    """
    ds = list(degrees)
    if not ds:
        raise ValueError("at least one degree is required")
    for d in ds:
        if d < 1:
            raise ValueError("degrees must be positive")
    n = len(ds)
    s1 = sum(ds)
    s2 = sum(d * d for d in ds)
    cross = sum(ds[i] * ds[j] for i in range(n) for j in range(i + 1, n))
    bracket = math.comb(n + 3, 2) - (n + 3) * s1 + s2 + cross
    e = bracket * math.prod(ds)
    return e - 2


# ------------------------------------------------------------- classification


def rationally_equivalent(q1: IntersectionForm, q2: IntersectionForm) -> bool:
    """Rational equivalence of unimodular forms: same rank and signature."""
    return q1.rank == q2.rank and q1.signature == q2.signature


def canonical_connected_sum(q: IntersectionForm) -> tuple[int, int]:
    """(p, q) with diag(+1 x p, -1 x q) rationally equivalent to the form."""
    return q.b2_plus, q.b2_minus
