"""Free graded-commutative algebras with Koszul signs.

Generators all have degree >= 2.  A monomial is a tuple of exponents aligned
with the generator list, trailing zeros trimmed, so values built at one stage
stay valid after more generators are appended.  Odd-degree generators square
to zero; the sign of a product counts the crossings of odd factors when the
two sorted generator words are merged.

The monomial basis of a fixed degree is enumerated in graded-lexicographic
order: higher powers of earlier generators come first (x1^2, x1*x2, x2^2).
Every matrix built here inherits that order, so output is reproducible.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import QMatrix, Subspace

__all__ = [
    "DEFAULT_GUARD",
    "BasisTooLarge",
    "DegreeMismatch",
    "Generator",
    "GeneratorSet",
    "Mono",
    "ONE_MONO",
    "Poly",
    "Derivation",
    "DSquaredReport",
    "basis",
    "mul",
    "mono_mul",
    "differential_matrix",
    "check_d_squared",
    "decomposable_subspace",
    "mono_sort_key",
    "format_poly",
    "format_mono",
]

DEFAULT_GUARD = 200_000

Mono = tuple  # exponent tuple, trailing zeros trimmed
ONE_MONO: Mono = ()

_ZERO = Fraction(0)
_ONE = Fraction(1)


class BasisTooLarge(RuntimeError):
    """A monomial basis exceeded the configured guard limit."""

    def __init__(self, degree: int, limit: int):
        super().__init__(
            f"monomial basis in degree {degree} exceeds the guard limit {limit}"
        )
        self.degree = degree
        self.limit = limit
        # build() attaches what was finished before the guard tripped
        self.partial_ranks = None
        self.reports: list = []


class DegreeMismatch(ValueError):
    """A derivation image does not raise degree by exactly one."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


def _trim(exps: Sequence[int]) -> Mono:
    i = len(exps)
    while i and not exps[i - 1]:
        i -= 1
    return tuple(exps[:i])


class GeneratorSet:
    """Ordered generators of a free graded-commutative algebra."""

    __slots__ = ("generators", "_index", "_degrees", "_odd", "_suffix_min")

    def __init__(self, generators: Iterable):
        gens = []
        for g in generators:
            if not isinstance(g, Generator):
                name, degree = g
                g = Generator(str(name), int(degree))
            if g.degree < 2:
                raise ValueError(f"generator {g.name} has degree {g.degree} < 2")
            gens.append(g)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.generators = tuple(gens)
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._degrees = tuple(g.degree for g in gens)
        self._odd = tuple(g.degree % 2 == 1 for g in gens)
        n = len(gens)
        sm = [0] * (n + 1)
        sm[n] = 1 << 60
        for i in range(n - 1, -1, -1):
            sm[i] = min(self._degrees[i], sm[i + 1])
        self._suffix_min = tuple(sm)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i: int) -> Generator:
        return self.generators[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorSet) and self.generators == other.generators

    def __repr__(self) -> str:
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GeneratorSet({inner})"

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def degrees(self) -> tuple:
        return self._degrees

    def extended(self, more: Iterable) -> "GeneratorSet":
        return GeneratorSet(tuple(self.generators) + tuple(more))

    def monomial_degree(self, mono: Mono) -> int:
        degs = self._degrees
        return sum(e * degs[i] for i, e in enumerate(mono) if e)

    def generators_of_degree(self, degree: int) -> list:
        return [g for g in self.generators if g.degree == degree]


def basis(gens: GeneratorSet, degree: int, guard: int = DEFAULT_GUARD) -> list:
    """All monomials of the given total degree, in graded-lex order."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree == 0:
        return [ONE_MONO]
    n = len(gens)
    degs = gens._degrees
    odd = gens._odd
    sufmin = gens._suffix_min
    out: list[Mono] = []
    exps = [0] * n

    def walk(i: int, remaining: int) -> None:
        if remaining == 0:
            out.append(_trim(exps))
            if len(out) > guard:
                raise BasisTooLarge(degree, guard)
            return
        if i == n or remaining < sufmin[i]:
            return
        d = degs[i]
        top = remaining // d
        if odd[i] and top > 1:
            top = 1
        for e in range(top, -1, -1):
            exps[i] = e
            walk(i + 1, remaining - e * d)
        exps[i] = 0

    walk(0, degree)
    return out


def mono_mul(gens: GeneratorSet, a: Mono, b: Mono):
    """Product of monomials: (sign, monomial), or None when an odd square kills it."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    odd = gens._odd
    a_odd = [i for i, e in enumerate(a) if e and odd[i]]
    b_odd = [i for i, e in enumerate(b) if e and odd[i]]
    inversions = 0
    if a_odd and b_odd:
        aset = set(a_odd)
        for j in b_odd:
            if j in aset:
                return None
            inversions += len(a_odd) - bisect_right(a_odd, j)
    la, lb = len(a), len(b)
    if la < lb:
        prod = list(b)
        for i, e in enumerate(a):
            if e:
                prod[i] += e
    else:
        prod = list(a)
        for i, e in enumerate(b):
            if e:
                prod[i] += e
    return (-1 if inversions & 1 else 1), tuple(prod)


class Poly:
    """Homogeneous rational linear combination of monomials."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: dict | None = None, degree: int | None = None):
        if terms:
            self.terms = terms
            self.degree = degree
        else:
            self.terms = {}
            self.degree = None

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def from_terms(gens: GeneratorSet, items: Mapping) -> "Poly":
        terms: dict = {}
        degree = None
        for mono, coeff in items.items():
            coeff = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
            if not coeff:
                continue
            mono = _trim(mono)
            d = gens.monomial_degree(mono)
            for i, e in enumerate(mono):
                if e < 0 or (e > 1 and gens._odd[i]):
                    raise ValueError(f"invalid exponent {e} in monomial {mono}")
            if degree is None:
                degree = d
            elif degree != d:
                raise ValueError("terms are not homogeneous")
            terms[mono] = terms.get(mono, _ZERO) + coeff
        terms = {m: c for m, c in terms.items() if c}
        return Poly(terms, degree if terms else None)

    @staticmethod
    def monomial(gens: GeneratorSet, mono: Mono, coeff=1) -> "Poly":
        coeff = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
        mono = _trim(mono)
        if not coeff:
            return Poly()
        return Poly({mono: coeff}, gens.monomial_degree(mono))

    @staticmethod
    def generator(gens: GeneratorSet, name: str, coeff=1) -> "Poly":
        i = gens.index(name)
        mono = (0,) * i + (1,)
        return Poly.monomial(gens, mono, coeff)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Mono) -> Fraction:
        return self.terms.get(_trim(mono), _ZERO)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __add__(self, other: "Poly") -> "Poly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add polynomials of different degrees")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            nc = terms.get(m, _ZERO) + c
            if nc:
                terms[m] = nc
            elif m in terms:
                del terms[m]
        return Poly(terms, self.degree if terms else None)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()}, self.degree)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scaled(self, coeff) -> "Poly":
        coeff = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
        if not coeff or self.is_zero():
            return Poly()
        return Poly({m: c * coeff for m, c in self.terms.items()}, self.degree)

    def __rmul__(self, coeff) -> "Poly":
        return self.scaled(coeff)

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        inner = ", ".join(f"{m}: {c}" for m, c in sorted(self.terms.items()))
        return f"Poly({inner})"


def mul(gens: GeneratorSet, a: Poly, b: Poly) -> Poly:
    """Graded-commutative product of two homogeneous polynomials."""
    if a.is_zero() or b.is_zero():
        return Poly.zero()
    acc: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sm = mono_mul(gens, ma, mb)
            if sm is None:
                continue
            sign, m = sm
            c = ca * cb if sign > 0 else -(ca * cb)
            prev = acc.get(m)
            if prev is None:
                acc[m] = c
            else:
                nc = prev + c
                if nc:
                    acc[m] = nc
                else:
                    del acc[m]
    if not acc:
        return Poly.zero()
    return Poly(acc, a.degree + b.degree)


class Derivation:
    """Degree +1 derivation of the free algebra, given by generator images.

    The extension to the whole algebra follows the graded Leibniz rule
    D(ab) = D(a) b + (-1)^{|a|} a D(b).
    """

    __slots__ = ("gens", "images")

    def __init__(self, gens: GeneratorSet, images):
        if isinstance(images, Mapping):
            aligned = [images.get(g.name, Poly.zero()) for g in gens]
        else:
            aligned = list(images)
            if len(aligned) != len(gens):
                raise ValueError("one image per generator is required")
        for g, img in zip(gens, aligned):
            if img.is_zero():
                continue
            if img.degree != g.degree + 1:
                raise DegreeMismatch(
                    f"image of {g.name} has degree {img.degree}, expected {g.degree + 1}"
                )
        self.gens = gens
        self.images = tuple(aligned)

    def image(self, i: int) -> Poly:
        return self.images[i]

    def image_of(self, name: str) -> Poly:
        return self.images[self.gens.index(name)]

    def extended(self, gens: GeneratorSet, new_images: Sequence[Poly]) -> "Derivation":
        return Derivation(gens, list(self.images) + list(new_images))

    def minimality_witness(self):
        """First (generator name, monomial) whose image has a linear term."""
        for g, img in zip(self.gens, self.images):
            for mono in img.terms:
                if sum(mono) < 2:
                    return g.name, mono
        return None

    def is_minimal(self) -> bool:
        return self.minimality_witness() is None

    def apply_mono(self, mono: Mono) -> Poly:
        gens = self.gens
        degs = gens._degrees
        out = Poly.zero()
        prefix_degree = 0
        for i, e in enumerate(mono):
            if e:
                img = self.images[i]
                if not img.is_zero():
                    left = Poly.monomial(gens, mono[:i])
                    rest = (0,) * i + (e - 1,) + tuple(mono[i + 1 :])
                    term = mul(gens, left, mul(gens, img, Poly.monomial(gens, rest)))
                    coeff = -e if prefix_degree & 1 else e
                    out = out + term.scaled(coeff)
                prefix_degree += e * degs[i]
        return out

    def apply(self, poly: Poly) -> Poly:
        out = Poly.zero()
        for mono, coeff in poly.terms.items():
            out = out + self.apply_mono(mono).scaled(coeff)
        return out


def differential_matrix(
    gens: GeneratorSet, deriv: Derivation, degree: int, guard: int = DEFAULT_GUARD
) -> QMatrix:
    """Matrix of the derivation from degree to degree + 1.

    Rows and columns are indexed by the graded-lex monomial bases, so the
    matrix is the same on every run.
    """
    dom = basis(gens, degree, guard)
    cod = basis(gens, degree + 1, guard)
    index = {m: i for i, m in enumerate(cod)}
    rows = [[_ZERO] * len(dom) for _ in cod]
    for j, m in enumerate(dom):
        for mono, c in deriv.apply_mono(m).terms.items():
            rows[index[mono]][j] = c
    return QMatrix.from_rows(rows, cols=len(dom))


@dataclass(frozen=True)
class DSquaredReport:
    ok: bool
    witness: str | None = None
    value: Poly | None = None


def check_d_squared(
    gens: GeneratorSet,
    deriv: Derivation,
    through_degree: int | None = None,
    guard: int = DEFAULT_GUARD,
) -> DSquaredReport:
    """Check D(D(x)) = 0 on generators, and per degree when asked.

    Vanishing on generators already forces the composite to vanish
    everywhere; the per-degree sweep recomputes the matrix composition
    column by column as a belt-and-braces cross-check.
    """
    for g, img in zip(gens, deriv.images):
        if img.is_zero():
            continue
        sq = deriv.apply(img)
        if not sq.is_zero():
            return DSquaredReport(False, g.name, sq)
    if through_degree is not None:
        for n in range(2, through_degree + 1):
            for m in basis(gens, n, guard):
                sq = deriv.apply(deriv.apply_mono(m))
                if not sq.is_zero():
                    return DSquaredReport(False, format_mono(gens, m), sq)
    return DSquaredReport(True)


def decomposable_subspace(
    gens: GeneratorSet, degree: int, guard: int = DEFAULT_GUARD
) -> Subspace:
    """Span of all products of two positive-degree monomials inside a degree.

    Enumerated honestly from products, not from word lengths, so it can serve
    as an independent cross-check on generator counts: the codimension inside
    the full monomial basis equals the number of generators of that degree.
    """
    if degree < 2:
        raise ValueError("decomposables start in degree 2")
    blist = basis(gens, degree, guard)
    index = {m: i for i, m in enumerate(blist)}
    hit: set[int] = set()
    for d1 in range(2, degree - 1):
        d2 = degree - d1
        if d1 > d2:
            break
        left = basis(gens, d1, guard)
        right = left if d1 == d2 else basis(gens, d2, guard)
        for i, m1 in enumerate(left):
            start = i if d1 == d2 else 0
            for m2 in right[start:]:
                sm = mono_mul(gens, m1, m2)
                if sm is not None:
                    hit.add(index[sm[1]])
    ambient = len(blist)
    vectors = []
    for i in sorted(hit):
        v = [_ZERO] * ambient
        v[i] = _ONE
        vectors.append(v)
    return Subspace.from_vectors(ambient, vectors)


def mono_sort_key(gens: GeneratorSet, mono: Mono):
    padded = mono + (0,) * (len(gens) - len(mono))
    return tuple(-e for e in padded)


def format_mono(gens: GeneratorSet, mono: Mono) -> str:
    if not any(mono):
        return "1"
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(gens[i].name)
        elif e:
            parts.append(f"{gens[i].name}^{e}")
    return "*".join(parts)


def format_poly(gens: GeneratorSet, poly: Poly) -> str:
    if poly.is_zero():
        return "0"
    pieces = []
    for mono in sorted(poly.terms, key=lambda m: mono_sort_key(gens, m)):
        coeff = poly.terms[mono]
        negative = coeff < 0
        mag = -coeff if negative else coeff
        body = format_mono(gens, mono)
        if body == "1":
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not pieces:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f"- {text}" if negative else f"+ {text}")
    return " ".join(pieces)
