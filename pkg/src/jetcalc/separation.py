"""Jet-order separation of fibers in a polynomial family, with Grassmannian coordinates.

A family is a list of polynomials F_j(s, x) in parameters s1..sm and space
variables x1..xk.  Two fibers are compared through the images of their ideals in
the truncated algebra of the ambient space at a common point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence, Union

from .artinian import (
    PointNotOnGerm,
    Subspace,
    annihilator,
    ideal_image_subspace,
    infinitesimal_algebra,
)
from .ideal import Ideal, groebner
from .linalg import determinant
from .poly import DimensionMismatch, Polynomial, RationalPoint, as_point, compose, default_names

DEFAULT_PLUCKER_CAP = 5000


@dataclass(frozen=True)
class Family:
    """Generators F_j(s1..sm, x1..xk); the fiber over s is V(F_j(s, .))."""

    param_count: int
    space_count: int
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        total = self.param_count + self.space_count
        for g in self.generators:
            if g.nvars != total:
                raise DimensionMismatch(f"family generator {g} is not in {total} variables")

    def names(self) -> list[str]:
        return default_names(self.param_count, "s") + default_names(self.space_count, "x")


def fiber_ideal(family: Family, s: Sequence) -> Ideal:
    """Substitute parameter values: the ideal of the fiber over ``s`` in the x-variables."""
    s = as_point(s)
    if len(s) != family.param_count:
        raise DimensionMismatch(f"expected {family.param_count} parameter values, got {len(s)}")
    k = family.space_count
    images = [Polynomial.constant(k, c) for c in s] + Polynomial.variables(k)
    return Ideal(k, tuple(compose(g, images) for g in family.generators))


# -- verdicts --------------------------------------------------------------------------


@dataclass(frozen=True)
class Separated:
    order: int
    witness: tuple[Subspace, Subspace]

    def describe(self) -> str:
        return f"Separated at order {self.order}"


@dataclass(frozen=True)
class AgreeUpTo:
    """Inconclusive: the jets agree through ``max_order``.  Never a claim that the fibers coincide."""

    max_order: int

    def describe(self) -> str:
        return f"AgreeUpTo {self.max_order} (inconclusive)"


@dataclass(frozen=True)
class NotOnBothFibers:
    which: tuple[int, ...]
    reason: str

    def describe(self) -> str:
        return "NotOnBothFibers"


Verdict = Union[Separated, AgreeUpTo, NotOnBothFibers]


@dataclass(frozen=True)
class SeparationReport:
    params: tuple[RationalPoint, RationalPoint]
    point: RationalPoint
    verdict: Verdict


def _ambient(ambient: Ideal | None, k: int) -> Ideal:
    return ambient if ambient is not None else Ideal.zero(k)


def jet_subspace(ideal: Ideal, point: Sequence, n: int, ambient: Ideal | None = None) -> Subspace:
    """Image of ``ideal`` in the order-n truncated algebra of the ambient germ at ``point``."""
    algebra = infinitesimal_algebra(_ambient(ambient, ideal.nvars), point, n)
    return ideal_image_subspace(ideal, algebra)


def jets_agree(a: Ideal, b: Ideal, point: Sequence, n: int, ambient: Ideal | None = None) -> bool:
    """Do V(a) and V(b) have the same n-th infinitesimal neighbourhood at ``point``?"""
    if a.nvars != b.nvars:
        raise DimensionMismatch(f"{a.nvars} vs {b.nvars} variables")
    return jet_subspace(a, point, n, ambient) == jet_subspace(b, point, n, ambient)


def separating_order(
    family: Family,
    s: Sequence,
    s2: Sequence,
    point: Sequence,
    max_order: int,
    ambient: Ideal | None = None,
    jobs: int = 1,
) -> SeparationReport:
    """Smallest n <= max_order at which the two fibers' jets at ``point`` differ.

    With ``jobs > 1`` all orders are computed concurrently; the verdict is the same.
    """
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    s, s2, point = as_point(s), as_point(s2), as_point(point)
    fibers = (fiber_ideal(family, s), fiber_ideal(family, s2))
    off = []
    for i, fib in enumerate(fibers):
        try:
            jet_subspace(fib, point, 0, ambient)
        except PointNotOnGerm as exc:
            off.append((i, str(exc)))
    if off:
        verdict = NotOnBothFibers(tuple(i for i, _ in off), "; ".join(r for _, r in off))
        return SeparationReport((s, s2), point, verdict)

    def pair(n: int) -> tuple[Subspace, Subspace]:
        return jet_subspace(fibers[0], point, n, ambient), jet_subspace(fibers[1], point, n, ambient)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(pair, range(max_order + 1)))
        for n, (x, y) in enumerate(results):
            if x != y:
                return SeparationReport((s, s2), point, Separated(n, (x, y)))
    else:
        for n in range(max_order + 1):
            x, y = pair(n)
            if x != y:
                return SeparationReport((s, s2), point, Separated(n, (x, y)))
    return SeparationReport((s, s2), point, AgreeUpTo(max_order))


# -- Grassmannian coordinates ------------------------------------------------------------


@dataclass(frozen=True)
class GrassPoint:
    """The dual jet subspace of a fiber as a point of a Grassmannian.

    ``codimension`` is r_n; ``matrix`` is the canonical rref basis of the annihilator;
    ``plucker`` holds the normalized maximal minors, or None when over the cap.
    """

    order: int
    codimension: int
    matrix: tuple[tuple[Fraction, ...], ...]
    ambient_dimension: int
    plucker: tuple[Fraction, ...] | None = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrassPoint):
            return NotImplemented
        return (self.order, self.ambient_dimension, self.matrix) == (
            other.order,
            other.ambient_dimension,
            other.matrix,
        )

    def __hash__(self) -> int:
        return hash((self.order, self.ambient_dimension, self.matrix))


def plucker_coordinates(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[Fraction, ...]:
    """Maximal minors in lexicographic column order, scaled so the first nonzero one is 1."""
    p = len(rows)
    minors = [
        determinant([[row[j] for j in cols] for row in rows]) for cols in combinations(range(ncols), p)
    ]
    lead = next((m for m in minors if m), None)
    if lead is None:
        raise ValueError("rows are linearly dependent")
    return tuple(m / lead for m in minors)


def grass_point(
    ideal: Ideal,
    point: Sequence,
    n: int,
    ambient: Ideal | None = None,
    plucker: bool = True,
    plucker_cap: int = DEFAULT_PLUCKER_CAP,
) -> GrassPoint:
    """Annihilator of the ideal's jet subspace, with Pluecker coordinates when affordable."""
    space = jet_subspace(ideal, point, n, ambient)
    dual = annihilator(space)
    dim = space.algebra.dimension
    coords = None
    if plucker and comb(dim, dual.dimension) <= plucker_cap:
        coords = plucker_coordinates(dual.matrix, dim)
    return GrassPoint(n, space.dimension, dual.matrix, dim, coords)


# -- canonicity sample -------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyCheck:
    samples: tuple[RationalPoint, ...]
    collisions: tuple[tuple[RationalPoint, RationalPoint], ...]

    @property
    def consistent(self) -> bool:
        return not self.collisions


def canonical_family_check(
    family: Family, samples: Sequence[Sequence], max_pairs: int | None = None, jobs: int = 1
) -> FamilyCheck:
    """Pairs of sampled parameters whose fibers have identical reduced Groebner bases.

    An empty result is only consistent with canonicity on the sample, never a proof.
    ``max_pairs`` is the S-pair cap for each Groebner computation.
    """
    pts = tuple(as_point(s) for s in samples)

    def basis(s):
        return groebner(fiber_ideal(family, s), max_pairs).basis

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            bases = list(pool.map(basis, pts))
    else:
        bases = [basis(s) for s in pts]
    collisions = tuple(
        (pts[i], pts[j])
        for i, j in combinations(range(len(pts)), 2)
        if bases[i] == bases[j]
    )
    return FamilyCheck(pts, collisions)
