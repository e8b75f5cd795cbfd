"""Ideals in Q[x1..xk]: reduced Groebner bases, normal forms, sums, powers, pullbacks."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .poly import DimensionMismatch, Monomial, Polynomial, compose

DEFAULT_MAX_PAIRS = 20000
DEFAULT_MAX_DEGREE = 64


class ResourceLimitExceeded(RuntimeError):
    """The Groebner computation hit its pair or degree cap; the instance is beyond desk scale."""


def grevlex_key(m: Monomial) -> tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


def default_max_pairs() -> int:
    env = os.environ.get("JETCALC_MAX_PAIRS")
    return int(env) if env else DEFAULT_MAX_PAIRS


@dataclass(frozen=True)
class Ideal:
    """An ideal given by generators.  The zero ideal is ``Ideal(k, (0,))``."""

    nvars: int
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            gens = (Polynomial.zero(self.nvars),)
        for g in gens:
            if g.nvars != self.nvars:
                raise DimensionMismatch(f"generator {g} has {g.nvars} variables, ideal has {self.nvars}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def zero(cls, k: int) -> "Ideal":
        return cls(k, (Polynomial.zero(k),))

    @property
    def nonzero_generators(self) -> tuple[Polynomial, ...]:
        return tuple(g for g in self.generators if g)

    def is_zero(self) -> bool:
        return not self.nonzero_generators

    def __str__(self) -> str:
        return "<" + ", ".join(g.format() for g in self.generators) + ">"


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis under grevlex, sorted by descending leading monomial."""

    nvars: int
    basis: tuple[Polynomial, ...]
    order: str = field(default="grevlex")

    def leading_monomials(self) -> list[Monomial]:
        return [leading_monomial(g) for g in self.basis]

    def is_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.basis)

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()


@dataclass(frozen=True)
class PolynomialMap:
    """phi: Q^source -> Q^target; ``components[i]`` is the pullback of the i-th target coordinate."""

    source_nvars: int
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for c in self.components:
            if c.nvars != self.source_nvars:
                raise DimensionMismatch("map component in the wrong ring")

    @property
    def target_nvars(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, k: int) -> "PolynomialMap":
        return cls(k, tuple(Polynomial.variables(k)))

    def __call__(self, point: Sequence) -> tuple[Fraction, ...]:
        from .poly import evaluate

        return tuple(evaluate(c, point) for c in self.components)


def leading_monomial(p: Polynomial) -> Monomial:
    return max(p.terms, key=grevlex_key)


def _leading(p: Polynomial) -> tuple[Monomial, Fraction]:
    m = leading_monomial(p)
    return m, p.terms[m]


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(p: Polynomial) -> Polynomial:
    _, c = _leading(p)
    return p if c == 1 else p.scale(1 / c)


def _reduce(p: Polynomial, divisors: Sequence[tuple[Monomial, Polynomial]]) -> Polynomial:
    """Full reduction of ``p`` by monic divisors given as (leading monomial, polynomial)."""
    terms = dict(p.terms)
    rem: dict[Monomial, Fraction] = {}
    k = p.nvars
    while terms:
        m = max(terms, key=grevlex_key)
        c = terms.pop(m)
        for lm, g in divisors:
            if _divides(lm, m):
                shift = tuple(x - y for x, y in zip(m, lm))
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    t = tuple(a + b for a, b in zip(gm, shift))
                    s = terms.get(t, 0) - c * gc
                    if s:
                        terms[t] = s
                    else:
                        terms.pop(t, None)
                break
        else:
            rem[m] = c
    return Polynomial._raw(k, rem)


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    (mf, cf), (mg, cg) = _leading(f), _leading(g)
    lcm = _lcm(mf, mg)
    a = tuple(x - y for x, y in zip(lcm, mf))
    b = tuple(x - y for x, y in zip(lcm, mg))
    return f.mul_monomial(a, 1 / cf) - g.mul_monomial(b, 1 / cg)


def groebner(
    ideal: Ideal,
    max_pairs: int | None = None,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm with the product and chain criteria.

    The output depends only on the ideal, so permuting generators never changes it.
    """
    max_pairs = default_max_pairs() if max_pairs is None else max_pairs
    k = ideal.nvars
    gens = [_monic(g) for g in ideal.nonzero_generators]
    if not gens:
        return GroebnerBasis(k, ())
    # deterministic start regardless of generator order
    gens = sorted(set(gens), key=lambda g: [grevlex_key(m) for m, _ in _sorted_desc(g)])
    basis: list[Polynomial] = []
    lms: list[Monomial] = []
    pairs: list[tuple[int, int]] = []

    def add(p: Polynomial):
        lm = leading_monomial(p)
        if sum(lm) > max_degree:
            raise ResourceLimitExceeded(f"basis degree {sum(lm)} exceeds cap {max_degree}")
        idx = len(basis)
        basis.append(p)
        lms.append(lm)
        for j in range(idx):
            pairs.append((j, idx))

    for g in gens:
        r = _reduce(g, list(zip(lms, basis)))
        if r:
            add(_monic(r))

    processed = 0
    while pairs:
        pairs.sort(key=lambda ij: (grevlex_key(_lcm(lms[ij[0]], lms[ij[1]])), ij))
        i, j = pairs.pop(0)
        lcm = _lcm(lms[i], lms[j])
        # product criterion: coprime leading monomials
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            continue
        # chain criterion
        if any(
            t not in (i, j)
            and _divides(lms[t], lcm)
            and (min(i, t), max(i, t)) not in pairs
            and (min(j, t), max(j, t)) not in pairs
            for t in range(len(basis))
        ):
            continue
        processed += 1
        if processed > max_pairs:
            raise ResourceLimitExceeded(f"more than {max_pairs} S-pairs reduced")
        r = _reduce(_spoly(basis[i], basis[j]), list(zip(lms, basis)))
        if r:
            add(_monic(r))
    return GroebnerBasis(k, tuple(_interreduce(basis)))


def _sorted_desc(p: Polynomial):
    return sorted(p.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)


def _interreduce(basis: list[Polynomial]) -> list[Polynomial]:
    # drop elements whose leading monomial is divisible by another's
    lms = [leading_monomial(g) for g in basis]
    keep = []
    for i, g in enumerate(basis):
        redundant = any(
            j != i and _divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i)
            for j in range(len(basis))
        )
        if not redundant:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = [(leading_monomial(h), h) for j, h in enumerate(keep) if j != i]
        lm, _ = _leading(g)
        tail = _reduce(g - Polynomial.monomial(lm), others)
        out.append(_monic(Polynomial.monomial(lm) + tail))
    out.sort(key=lambda g: grevlex_key(leading_monomial(g)), reverse=True)
    return out


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Unique remainder of ``p`` modulo the ideal of ``gb``; zero iff ``p`` is a member."""
    if p.nvars != gb.nvars:
        raise DimensionMismatch(f"{p.nvars} vs {gb.nvars} variables")
    return _reduce(p, [(leading_monomial(g), g) for g in gb.basis])


def contains(ideal: Ideal, p: Polynomial, gb: GroebnerBasis | None = None) -> bool:
    gb = gb or groebner(ideal)
    return normal_form(p, gb).is_zero()


def ideal_power(ideal: Ideal, m: int) -> Ideal:
    """Generators are all m-fold products of generators (with repetition, before dedup)."""
    if m < 1:
        raise ValueError("power must be at least 1")
    prods = []
    seen = set()
    for combo in combinations_with_replacement(range(len(ideal.generators)), m):
        p = Polynomial.constant(ideal.nvars, 1)
        for i in combo:
            p = p * ideal.generators[i]
        if p not in seen:
            seen.add(p)
            prods.append(p)
    return Ideal(ideal.nvars, tuple(prods))


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    if a.nvars != b.nvars:
        raise DimensionMismatch(f"{a.nvars} vs {b.nvars} variables")
    gens = a.nonzero_generators + b.nonzero_generators
    return Ideal(a.nvars, gens)


def ideal_equal(a: Ideal, b: Ideal, max_pairs: int | None = None) -> bool:
    if a.nvars != b.nvars:
        raise DimensionMismatch(f"{a.nvars} vs {b.nvars} variables")
    return groebner(a, max_pairs).basis == groebner(b, max_pairs).basis


def pullback(ideal: Ideal, phi: PolynomialMap) -> Ideal:
    """Ideal in the source variables generated by g o phi for the generators g."""
    if ideal.nvars != phi.target_nvars:
        raise DimensionMismatch(
            f"ideal has {ideal.nvars} variables but the map has {phi.target_nvars} components"
        )
    return Ideal(phi.source_nvars, tuple(compose(g, phi.components) for g in ideal.generators))
