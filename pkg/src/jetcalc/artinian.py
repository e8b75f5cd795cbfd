"""Infinitesimal neighbourhoods of a rational point: the algebras Q[u]/(I(a+u) + M^(n+1)).

Everything is linear algebra on the finite staircase of monomials of degree <= n.
The ideal (I + M^(n+1))/M^(n+1) is spanned by truncate(m * g(a+u), n) over monomials
m of degree <= n and generators g, so no local monomial orders are needed.
Columns are ordered 1, u1, u2, ..., u1^2, u1*u2, ... and the pivot of a relation is
its first nonzero column; the standard monomials are the non-pivot columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .ideal import Ideal
from .poly import (
    DimensionMismatch,
    Monomial,
    Polynomial,
    RationalPoint,
    as_point,
    default_names,
    monomials_up_to,
    taylor_shift,
    truncate,
)


class PointNotOnGerm(ValueError):
    """The point is not on V(I): some shifted generator is a unit."""

    def __init__(self, generator: Polynomial, point: RationalPoint, value: Fraction):
        self.generator = generator
        self.point = point
        self.value = value
        coords = ",".join(str(c) for c in point)
        super().__init__(f"point not on germ: {generator} takes value {value} at ({coords})")


def _shifted_generators(ideal: Ideal, point: RationalPoint, n: int) -> list[Polynomial]:
    shifted = []
    for g in ideal.nonzero_generators:
        s = taylor_shift(g, point)
        c = s.constant_term()
        if c:
            raise PointNotOnGerm(g, point, c)
        s = truncate(s, n)
        if s:
            shifted.append(s)
    return shifted


def staircase_span(
    polys: Sequence[Polynomial], columns: Sequence[Monomial], n: int
) -> list[list[Fraction]]:
    """Rows of truncate(m * p, n) for all monomials m of degree <= n - ord(p), as column vectors."""
    index = {m: i for i, m in enumerate(columns)}
    rows = []
    for p in polys:
        low = min(sum(m) for m in p.terms)
        for m in columns:
            if sum(m) + low > n:
                break
            row = [Fraction(0)] * len(columns)
            for t, c in p.terms.items():
                tm = tuple(a + b for a, b in zip(t, m))
                if sum(tm) <= n:
                    row[index[tm]] += c
            rows.append(row)
    return rows


class TruncatedLocalAlgebra:
    """The algebra O_a/(I + M_a^(n+1)) with its standard monomial basis.

    Elements are coordinate vectors over ``std_monomials``.  The monomials are in the
    shifted variables u = z - a.
    """

    def __init__(self, ideal: Ideal, point: Sequence, order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        point = as_point(point)
        if len(point) != ideal.nvars:
            raise DimensionMismatch(f"point has {len(point)} coordinates, ideal has {ideal.nvars} variables")
        self.ideal = ideal
        self.point = point
        self.order = order
        self.nvars = ideal.nvars
        self.columns = monomials_up_to(self.nvars, order)
        self._index = {m: i for i, m in enumerate(self.columns)}
        shifted = _shifted_generators(ideal, point, order)
        rows = staircase_span(shifted, self.columns, order)
        self.relations, self.pivots = linalg.rref(rows, len(self.columns))
        self._set_basis()

    @classmethod
    def _from_relations(cls, ideal, point, order, relations, pivots) -> "TruncatedLocalAlgebra":
        self = object.__new__(cls)
        self.ideal = ideal
        self.point = point
        self.order = order
        self.nvars = ideal.nvars
        self.columns = monomials_up_to(self.nvars, order)
        self._index = {m: i for i, m in enumerate(self.columns)}
        self.relations, self.pivots = relations, pivots
        self._set_basis()
        return self

    def _set_basis(self):
        pivset = set(self.pivots)
        self.std_columns = [i for i in range(len(self.columns)) if i not in pivset]
        self.std_monomials: list[Monomial] = [self.columns[i] for i in self.std_columns]
        self._std_pos = {m: i for i, m in enumerate(self.std_monomials)}

    # -- basic data ------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self.std_monomials)

    def __len__(self) -> int:
        return self.dimension

    def key(self) -> tuple:
        return (
            self.nvars,
            self.point,
            self.order,
            tuple(tuple(r) for r in self.relations),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedLocalAlgebra):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"TruncatedLocalAlgebra(dim={self.dimension}, order={self.order}, point={self.point})"

    # -- conversions -------------------------------------------------------------

    def full_vector(self, p: Polynomial) -> list[Fraction]:
        """Coordinates of truncate(p, n) over all staircase columns (p in the u variables)."""
        if p.nvars != self.nvars:
            raise DimensionMismatch(f"{p.nvars} vs {self.nvars} variables")
        v = [Fraction(0)] * len(self.columns)
        for m, c in p.terms.items():
            if sum(m) <= self.order:
                v[self._index[m]] += c
        return v

    def reduce_full(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Standard-basis coordinates of a full staircase vector."""
        r = linalg.reduce_vector(v, self.relations, self.pivots)
        return [r[i] for i in self.std_columns]

    def reduce(self, p: Polynomial) -> list[Fraction]:
        """Class of a polynomial in the u variables, as standard-basis coordinates."""
        return self.reduce_full(self.full_vector(p))

    def reduce_global(self, f: Polynomial) -> list[Fraction]:
        """Class of a polynomial in the original z variables (shifted to the point first)."""
        return self.reduce(taylor_shift(f, self.point))

    def contains(self, p: Polynomial) -> bool:
        return not any(self.reduce(p))

    def element(self, coords: Sequence[Fraction]) -> Polynomial:
        """The standard-monomial representative of an element, as a polynomial in u."""
        return Polynomial(self.nvars, {m: c for m, c in zip(self.std_monomials, coords) if c})

    def basis_element(self, m: Monomial) -> list[Fraction]:
        v = [Fraction(0)] * self.dimension
        v[self._std_pos[m]] = Fraction(1)
        return v

    def one(self) -> list[Fraction]:
        return self.basis_element((0,) * self.nvars)

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
        return self.reduce(truncate(self.element(x) * self.element(y), self.order))

    def relation_polynomials(self) -> list[Polynomial]:
        return [
            Polynomial(self.nvars, {self.columns[j]: c for j, c in enumerate(row) if c})
            for row in self.relations
        ]

    def format_basis(self, names: Sequence[str] | None = None) -> list[str]:
        names = names or default_names(self.nvars, "u")
        return [Polynomial.monomial(m).format(names) for m in self.std_monomials]


def infinitesimal_algebra(ideal: Ideal, point: Sequence, n: int) -> TruncatedLocalAlgebra:
    """The n-th infinitesimal neighbourhood of ``point`` in V(ideal), as a finite algebra.

    Raises :class:`PointNotOnGerm` when the point is off V(ideal).
    """
    return TruncatedLocalAlgebra(ideal, point, n)


def project(algebra: TruncatedLocalAlgebra, n: int) -> tuple[TruncatedLocalAlgebra, list[list[Fraction]]]:
    """Truncate an order-m algebra to order n <= m.

    Returns the smaller algebra and the matrix of the quotient map: row i holds the
    image of the i-th standard monomial of ``algebra``.  The smaller algebra is
    obtained by dropping the high-degree columns of the relations, not by rebuilding.
    """
    if n > algebra.order:
        raise ValueError(f"cannot project order {algebra.order} to larger order {n}")
    if n < 0:
        raise ValueError("order must be non-negative")
    ncols = len(monomials_up_to(algebra.nvars, n))
    # staircase order puts all degree <= n columns first
    rows = [r[:ncols] for r in algebra.relations]
    rel, piv = linalg.rref(rows, ncols)
    small = TruncatedLocalAlgebra._from_relations(algebra.ideal, algebra.point, n, rel, piv)
    matrix = []
    for m in algebra.std_monomials:
        if sum(m) <= n:
            matrix.append(small.reduce(Polynomial.monomial(m)))
        else:
            matrix.append([Fraction(0)] * small.dimension)
    return small, matrix


def omega_fiber_dimension(algebra: TruncatedLocalAlgebra) -> int:
    """Dimension of M/M^(n+1) inside the algebra: the rank of the classes of nonconstant monomials."""
    vecs = [
        algebra.reduce(Polynomial.monomial(m)) for m in algebra.columns if sum(m) > 0
    ]
    return linalg.rank(vecs, algebra.dimension)


@dataclass(frozen=True)
class Subspace:
    """A subspace of a truncated algebra (or of its dual) in canonical rref form.

    Columns are indexed by the algebra's standard monomials (dual basis when ``dual``).
    """

    algebra: TruncatedLocalAlgebra
    matrix: tuple[tuple[Fraction, ...], ...]
    dual: bool = False

    @classmethod
    def from_rows(cls, algebra: TruncatedLocalAlgebra, rows, dual: bool = False) -> "Subspace":
        red, _ = linalg.rref(rows, algebra.dimension)
        return cls(algebra, tuple(tuple(r) for r in red), dual)

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def codimension(self) -> int:
        return self.algebra.dimension - self.dimension

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.dual == other.dual
            and self.matrix == other.matrix
            and self.algebra == other.algebra
        )

    def __hash__(self) -> int:
        return hash((self.dual, self.matrix, self.algebra))

    def polynomials(self) -> list[Polynomial]:
        """Row space as polynomials in u (only meaningful for non-dual subspaces)."""
        return [self.algebra.element(r) for r in self.matrix]

    def contains(self, v: Sequence[Fraction]) -> bool:
        pivots = [next(j for j, x in enumerate(r) if x) for r in self.matrix]
        return not any(linalg.reduce_vector(v, [list(r) for r in self.matrix], pivots))


def ideal_image_subspace(sub: Ideal, algebra: TruncatedLocalAlgebra) -> Subspace:
    """Image of the ideal ``sub`` inside ``algebra`` (same point, same order)."""
    if sub.nvars != algebra.nvars:
        raise DimensionMismatch(f"{sub.nvars} vs {algebra.nvars} variables")
    shifted = _shifted_generators(sub, algebra.point, algebra.order)
    rows = staircase_span(shifted, algebra.columns, algebra.order)
    return Subspace.from_rows(algebra, [algebra.reduce_full(r) for r in rows])


def annihilator(space: Subspace) -> Subspace:
    """The functionals vanishing on ``space`` (or, for a dual subspace, the vectors they kill)."""
    basis = linalg.nullspace([list(r) for r in space.matrix], space.algebra.dimension)
    return Subspace(space.algebra, tuple(tuple(r) for r in basis), not space.dual)
