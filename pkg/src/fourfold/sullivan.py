"""Sullivan minimal models of four-manifold cohomology algebras.

The engine runs the inductive stage construction against a zero-differential
graded algebra A.  Stage 2 has one closed degree-2 generator per basis class
of A in degree 2.  Each later step from stage k to k+1 adjoins degree-(k+1)
generators of two kinds:

* closed generators u, one per basis vector of a complement of the image of
  the stage map inside A in degree k+1, mapped onto those vectors;
* generators v with dv = z, one per basis vector z of the kernel of the map
  induced on degree-(k+2) cohomology by the stage map, mapped to zero.

Because the target differential vanishes, the stage map must kill every z
exactly, which the engine asserts rather than assumes.  The number of
generators adjoined in degree r is the rank of the r-th rational homotopy
group; it is cross-checked in build() against the codimension of the
decomposable part of the algebra, an independent computation.

Kernel and complement bases are always the deterministic echelon bases of
the linear algebra layer, so two runs produce identical models.  Any basis
choice would give an isomorphic model and the same rank table; a test hook
(`reverse_kernel_basis`) exercises that independence.

Degree bookkeeping: only monomials in generators of degree <= n can appear
in degree n, so once a stage index passes n the degree-n cochains are final.
Each extension therefore reuses the kernel and image data computed by the
previous one and performs exactly one new large elimination, for the
cocycles two degrees above the new stage.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .forms import AlgebraElement, CohomologyAlgebra, RankTable
from .gca import (
    DEFAULT_GUARD,
    BasisTooLarge,
    Derivation,
    Generator,
    GeneratorSet,
    Poly,
    basis,
    check_d_squared,
    decomposable_subspace,
)
from .linalg import (
    NotContained,
    Subspace,
    complement_in,
    kernel_from_reduced,
    row_reduce,
)

__all__ = [
    "NotSimplyConnected",
    "QuasiMorphism",
    "MinimalModelStage",
    "StageReport",
    "CheckResult",
    "VerifyReport",
    "init_stage",
    "extend_stage",
    "stage_cohomology",
    "build",
    "verify_stage",
]

_ZERO = Fraction(0)


class NotSimplyConnected(ValueError):
    """The target algebra is not connected and simply connected."""


@dataclass(frozen=True)
class QuasiMorphism:
    """Multiplicative map from the free algebra to the target algebra.

    Determined by one target element per generator; extended to monomials by
    multiplying images and to polynomials linearly.
    """

    images: tuple[AlgebraElement, ...]

    def on_mono(self, algebra: CohomologyAlgebra, mono) -> AlgebraElement:
        acc = algebra.unit()
        for i, e in enumerate(mono):
            for _ in range(e):
                acc = algebra.mul(acc, self.images[i])
        return acc

    def on_poly(
        self, algebra: CohomologyAlgebra, poly: Poly, degree: int
    ) -> AlgebraElement:
        acc = algebra.zero(degree)
        for mono, coeff in poly.terms.items():
            img = self.on_mono(algebra, mono)
            if not img.is_zero():
                acc = algebra.add(acc, algebra.scale(coeff, img))
        return acc

    def extended(self, more: Sequence[AlgebraElement]) -> "QuasiMorphism":
        return QuasiMorphism(self.images + tuple(more))


@dataclass(frozen=True)
class _DiffData:
    """Differential of one degree: domain basis, kernel and image data.

    `kernel` holds cocycle polynomials matching the reduced-echelon rows of
    `kernel_sub`; `image` holds the differentials of the pivot columns, an
    independent basis of the coboundaries one degree up.
    """

    blist: tuple
    kernel: tuple
    kernel_sub: Subspace
    image: tuple
    rank: int


@dataclass
class StageReport:
    """What one extension step did."""

    k: int
    new_cocycle_generators: int
    new_kernel_generators: int
    basis_sizes: dict
    elapsed: float


class MinimalModelStage:
    """Generators, differential and stage map after building through degree k.

    Instances are immutable; `_data` only memoizes per-degree eliminations,
    which are deterministic functions of the stage.
    """

    __slots__ = ("algebra", "gens", "diff", "qm", "k", "_data")

    def __init__(
        self,
        algebra: CohomologyAlgebra,
        gens: GeneratorSet,
        diff: Derivation,
        qm: QuasiMorphism,
        k: int,
        data: dict | None = None,
    ):
        self.algebra = algebra
        self.gens = gens
        self.diff = diff
        self.qm = qm
        self.k = k
        self._data = {} if data is None else data

    def generator_counts(self) -> dict:
        counts: dict = {}
        for g in self.gens:
            counts[g.degree] = counts.get(g.degree, 0) + 1
        return counts

    def rank_table(self) -> RankTable:
        counts = self.generator_counts()
        return RankTable({r: counts.get(r, 0) for r in range(2, self.k + 1)}, False)


def _poly_vector(poly: Poly, index: dict, ncols: int) -> list:
    v = [_ZERO] * ncols
    for mono, coeff in poly.terms.items():
        v[index[mono]] = coeff
    return v


def _vector_poly(gens: GeneratorSet, vec, blist) -> Poly:
    terms = {m: c for m, c in zip(blist, vec) if c}
    if not terms:
        return Poly.zero()
    return Poly(terms, gens.monomial_degree(next(iter(terms))))


def _diff_data(stage: MinimalModelStage, n: int, guard: int) -> _DiffData:
    cached = stage._data.get(n)
    if cached is not None:
        return cached
    gens = stage.gens
    blist = basis(gens, n, guard) if n >= 0 else []
    cod = basis(gens, n + 1, guard)
    index = {m: i for i, m in enumerate(cod)}
    ncols = len(blist)
    col_polys = [stage.diff.apply_mono(m) for m in blist]
    rowmap: dict = {}
    for j, p in enumerate(col_polys):
        for mono, c in p.terms.items():
            i = index[mono]
            row = rowmap.get(i)
            if row is None:
                row = [_ZERO] * ncols
                rowmap[i] = row
            row[j] = c
    rows = [rowmap[i] for i in sorted(rowmap)]
    reduced, pivots = row_reduce(rows, ncols)
    kernel_sub = kernel_from_reduced(reduced, pivots, ncols)
    kernel = tuple(_vector_poly(gens, v, blist) for v in kernel_sub.basis)
    image = tuple(col_polys[j] for j in pivots)
    data = _DiffData(tuple(blist), kernel, kernel_sub, image, len(pivots))
    stage._data[n] = data
    return data


def init_stage(algebra: CohomologyAlgebra) -> MinimalModelStage:
    """Stage 2: one closed degree-2 generator per degree-2 basis class."""
    if algebra.dim(0) != 1 or algebra.dim(1) != 0:
        raise NotSimplyConnected(
            "the target algebra must be connected with nothing in degree 1"
        )
    n2 = algebra.dim(2)
    gens = GeneratorSet([(f"x{i + 1}", 2) for i in range(n2)])
    diff = Derivation(gens, [Poly.zero()] * n2)
    qm = QuasiMorphism(tuple(algebra.basis_element(2, i) for i in range(n2)))
    return MinimalModelStage(algebra, gens, diff, qm, 2)


def extend_stage(
    stage: MinimalModelStage,
    guard: int = DEFAULT_GUARD,
    reverse_kernel_basis: bool = False,
) -> tuple[MinimalModelStage, StageReport]:
    """One construction step: stage k to stage k+1."""
    started = time.perf_counter()
    algebra = stage.algebra
    gens = stage.gens
    k = stage.k
    low = _diff_data(stage, k + 1, guard)
    high = _diff_data(stage, k + 2, guard)

    # Closed generators: a complement of the image of the stage map inside
    # the degree-(k+1) part of the target.
    target_dim = algebra.dim(k + 1)
    if target_dim:
        image_vectors = [
            stage.qm.on_poly(algebra, z, k + 1).coords for z in low.kernel
        ]
        reached = Subspace.from_vectors(target_dim, image_vectors)
        y_vectors = complement_in(reached, Subspace.full(target_dim)).basis
    else:
        y_vectors = ()

    # Exact generators: a complement of the coboundaries inside the
    # degree-(k+2) cocycles that the stage map sends to zero.
    ambient = len(high.blist)
    index = {m: i for i, m in enumerate(high.blist)}
    boundary_sub = Subspace.from_vectors(
        ambient, [_poly_vector(p, index, ambient) for p in low.image]
    )
    if algebra.dim(k + 2):
        zvecs = high.kernel_sub.basis
        constraint_rows = [
            [stage.qm.on_poly(algebra, z, k + 2).coords[r] for z in high.kernel]
            for r in range(algebra.dim(k + 2))
        ]
        reduced, pivots = row_reduce(constraint_rows, len(high.kernel))
        combos = kernel_from_reduced(reduced, pivots, len(high.kernel))
        vanishing_vectors = []
        for combo in combos.basis:
            acc = [_ZERO] * ambient
            for coeff, zv in zip(combo, zvecs):
                if coeff:
                    for t, x in enumerate(zv):
                        if x:
                            acc[t] += coeff * x
            vanishing_vectors.append(acc)
        vanishing = Subspace.from_vectors(ambient, vanishing_vectors)
    else:
        vanishing = high.kernel_sub
    z_polys = [
        _vector_poly(stage.gens, v, high.blist)
        for v in complement_in(boundary_sub, vanishing).basis
    ]
    if reverse_kernel_basis:
        z_polys.reverse()
    for z in z_polys:
        if not stage.qm.on_poly(algebra, z, k + 2).is_zero():
            raise AssertionError("stage map fails to kill a kernel cocycle")

    degree = k + 1
    new_gens = [Generator(f"u{degree}_{i + 1}", degree) for i in range(len(y_vectors))]
    new_gens += [Generator(f"v{degree}_{j + 1}", degree) for j in range(len(z_polys))]
    gens2 = gens.extended(new_gens)
    diff2 = stage.diff.extended(
        gens2, [Poly.zero()] * len(y_vectors) + list(z_polys)
    )
    qm2 = stage.qm.extended(
        [algebra.element(degree, y) for y in y_vectors]
        + [algebra.zero(degree)] * len(z_polys)
    )
    # Degree-n cochain data stays valid while no monomial of degree n is
    # created: appending degree-(k+1) generators only touches degree k+1
    # itself and degrees >= k+3.
    carried = {n: d for n, d in stage._data.items() if n <= k or n == k + 2}
    successor = MinimalModelStage(algebra, gens2, diff2, qm2, k + 1, carried)
    report = StageReport(
        k=k + 1,
        new_cocycle_generators=len(y_vectors),
        new_kernel_generators=len(z_polys),
        basis_sizes={k + 1: len(low.blist), k + 2: len(high.blist)},
        elapsed=time.perf_counter() - started,
    )
    return successor, report


def stage_cohomology(
    stage: MinimalModelStage, n: int, guard: int = DEFAULT_GUARD
) -> tuple[int, list, Subspace]:
    """Cohomology of the stage in degree n.

    Returns (dimension, cocycle representatives, coboundary subspace); the
    representatives project to a basis of the quotient.
    """
    if n == 0:
        return 1, [Poly.monomial(stage.gens, ())], Subspace.zero(1)
    here = _diff_data(stage, n, guard)
    below = _diff_data(stage, n - 1, guard)
    ambient = len(here.blist)
    index = {m: i for i, m in enumerate(here.blist)}
    boundary_sub = Subspace.from_vectors(
        ambient, [_poly_vector(p, index, ambient) for p in below.image]
    )
    reps = [
        _vector_poly(stage.gens, v, here.blist)
        for v in complement_in(boundary_sub, here.kernel_sub).basis
    ]
    return len(here.kernel) - below.rank, reps, boundary_sub


def build(
    algebra: CohomologyAlgebra,
    max_degree: int = 5,
    guard: int = DEFAULT_GUARD,
    reverse_kernel_basis: bool = False,
) -> tuple[MinimalModelStage, RankTable, list]:
    """Run the construction through the requested degree.

    Returns the final stage, the rank table (rank of the r-th homotopy group
    = generators of degree r, for 2 <= r <= max_degree) and the per-step
    reports.  If the basis guard trips, the raised BasisTooLarge carries the
    table of the stages completed so far.
    """
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    stage = init_stage(algebra)
    reports: list[StageReport] = []
    try:
        while stage.k < max_degree:
            stage, report = extend_stage(
                stage, guard=guard, reverse_kernel_basis=reverse_kernel_basis
            )
            reports.append(report)
        table = stage.rank_table()
        # Independent cross-check: generator counts against the codimension
        # of the decomposable part, computed from products alone.
        for r in range(2, max_degree + 1):
            codim = len(basis(stage.gens, r, guard)) - decomposable_subspace(
                stage.gens, r, guard
            ).dim
            if codim != table.ranks[r]:
                raise AssertionError(
                    f"generator count {table.ranks[r]} in degree {r} disagrees "
                    f"with decomposable codimension {codim}"
                )
    except BasisTooLarge as exc:
        exc.partial_ranks = stage.rank_table()
        exc.reports = reports
        raise
    return stage, table, reports


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def verify_stage(stage: MinimalModelStage, guard: int = DEFAULT_GUARD) -> VerifyReport:
    """Run the full invariant suite on a stage.

    Checks: the differential squares to zero, differentials land in the
    decomposable part, the stage map is a chain map and induces cohomology
    isomorphisms through degree k, and generator counts per degree agree
    with the decomposable-part codimension.
    """
    algebra = stage.algebra
    gens = stage.gens
    checks: list[CheckResult] = []

    report = check_d_squared(gens, stage.diff, through_degree=stage.k, guard=guard)
    detail = "" if report.ok else f"d(d({report.witness})) != 0"
    checks.append(CheckResult("d_squared", report.ok, detail))

    witness = stage.diff.minimality_witness()
    checks.append(
        CheckResult(
            "minimality",
            witness is None,
            "" if witness is None else f"image of {witness[0]} has a linear term",
        )
    )

    bad_chain = None
    for i, g in enumerate(gens):
        img = stage.diff.image(i)
        if img.is_zero():
            continue
        if not stage.qm.on_poly(algebra, img, g.degree + 1).is_zero():
            bad_chain = g.name
            break
    checks.append(
        CheckResult(
            "chain_map",
            bad_chain is None,
            "" if bad_chain is None else f"stage map does not kill d({bad_chain})",
        )
    )

    iso_failures = []
    for i in range(0, stage.k + 1):
        try:
            dim, reps, _ = stage_cohomology(stage, i, guard)
        except NotContained:
            # boundaries escape the cocycles, so the differential is broken
            iso_failures.append(f"H^{i}: coboundaries are not closed")
            continue
        target = algebra.dim(i)
        if dim != target:
            iso_failures.append(f"H^{i}: stage {dim} vs target {target}")
            continue
        if target:
            rows = [list(stage.qm.on_poly(algebra, rep, i).coords) for rep in reps]
            _, pivots = row_reduce(rows, target)
            if len(pivots) != target:
                iso_failures.append(f"H^{i}: induced map has rank {len(pivots)}")
    checks.append(
        CheckResult("cohomology_isomorphism", not iso_failures, "; ".join(iso_failures))
    )

    count_failures = []
    counts = stage.generator_counts()
    for r in range(2, stage.k + 1):
        codim = len(basis(gens, r, guard)) - decomposable_subspace(gens, r, guard).dim
        if codim != counts.get(r, 0):
            count_failures.append(
                f"degree {r}: {counts.get(r, 0)} generators vs codimension {codim}"
            )
    checks.append(
        CheckResult("generator_counts", not count_failures, "; ".join(count_failures))
    )

    return VerifyReport(tuple(checks))
