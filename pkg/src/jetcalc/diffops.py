"""Differential operators sum a_alpha D^alpha, jets, and operators preserving an ideal.

D^alpha is the divided-power derivative (1/alpha!) d^alpha, so D^alpha z^beta =
binom(beta, alpha) z^(beta - alpha).  Jet modules are presented as
B[u]/((u)^(n+1), f_j(z+u)) over B = Q[z]/I, with polynomials in 2k variables
(z1..zk, u1..uk).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .artinian import (
    PointNotOnGerm,
    TruncatedLocalAlgebra,
    infinitesimal_algebra,
    project,
    staircase_span,
)
from .ideal import GroebnerBasis, Ideal, groebner, normal_form
from .poly import (
    DimensionMismatch,
    Monomial,
    Polynomial,
    RationalPoint,
    as_point,
    compose,
    default_names,
    divided_derivative,
    embed,
    format_scalar,
    monomials_up_to,
    multinomial_binom,
    staircase_key,
)

Action = Callable[[Polynomial], Polynomial]


class IdealNotPreserved(ValueError):
    """D(I) is not contained in I; ``witness`` is a polynomial D_w(g) outside I."""

    def __init__(self, witness: Polynomial, word: tuple[int, ...], generator: Polynomial):
        self.witness = witness
        self.word = word
        self.generator = generator
        super().__init__(f"ideal not preserved: bracket word {word} sends {generator} to {witness} not in I")


@dataclass(frozen=True)
class DiffOperator:
    """D = sum a_alpha D^alpha with |alpha| <= order.  Zero coefficients are never stored."""

    nvars: int
    order: int
    coefficients: Mapping[Monomial, Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for alpha, a in self.coefficients.items():
            alpha = tuple(alpha)
            if len(alpha) != self.nvars or a.nvars != self.nvars:
                raise DimensionMismatch("coefficient or multi-index in the wrong ring")
            if sum(alpha) > self.order:
                raise ValueError(f"multi-index {alpha} exceeds order {self.order}")
            if a:
                clean[alpha] = a
        object.__setattr__(self, "coefficients", dict(sorted(clean.items(), key=lambda t: staircase_key(t[0]))))

    @classmethod
    def multiplication(cls, b: Polynomial) -> "DiffOperator":
        return cls(b.nvars, 0, {(0,) * b.nvars: b})

    @classmethod
    def basis_operator(cls, alpha: Monomial, coefficient: Polynomial | None = None) -> "DiffOperator":
        k = len(alpha)
        a = coefficient if coefficient is not None else Polynomial.constant(k, 1)
        return cls(k, sum(alpha), {tuple(alpha): a})

    def top_order(self) -> int:
        """Largest |alpha| with a nonzero coefficient; -1 for the zero operator."""
        return max((sum(a) for a in self.coefficients), default=-1)

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, alpha: Monomial) -> Polynomial:
        return self.coefficients.get(tuple(alpha), Polynomial.zero(self.nvars))

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply(self, f)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        coeffs = dict(self.coefficients)
        for alpha, a in other.coefficients.items():
            coeffs[alpha] = coeffs.get(alpha, Polynomial.zero(self.nvars)) + a
        return DiffOperator(self.nvars, max(self.order, other.order), coeffs)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator(self.nvars, self.order, {a: p.scale(c) for a, p in self.coefficients.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.nvars == other.nvars and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.coefficients.items())))

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for alpha, a in self.coefficients.items():
            idx = ",".join(str(e) for e in alpha)
            parts.append(f"({a.format(names)}) * D^({idx})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.format()


def apply(op: DiffOperator, f: Polynomial) -> Polynomial:
    """Sum of a_alpha * D^alpha f."""
    if f.nvars != op.nvars:
        raise DimensionMismatch(f"operator in {op.nvars} variables applied to polynomial in {f.nvars}")
    total = Polynomial.zero(op.nvars)
    for alpha, a in op.coefficients.items():
        total = total + a * divided_derivative(f, alpha)
    return total


def bracket(op: DiffOperator, b: Polynomial) -> DiffOperator:
    """[D, b] = D(b .) - b D(.), via the divided-power Leibniz rule.

    D^alpha(b x) = sum_{gamma <= alpha} D^gamma(b) D^(alpha - gamma)(x); the gamma = 0
    term cancels against b D(x).
    """
    if b.nvars != op.nvars:
        raise DimensionMismatch("bracket with a polynomial in another ring")
    k = op.nvars
    coeffs: dict[Monomial, Polynomial] = {}
    for alpha, a in op.coefficients.items():
        for gamma in monomials_up_to(k, sum(alpha)):
            if sum(gamma) == 0 or any(g > x for g, x in zip(gamma, alpha)):
                continue
            db = divided_derivative(b, gamma)
            if not db:
                continue
            rest = tuple(x - g for x, g in zip(alpha, gamma))
            coeffs[rest] = coeffs.get(rest, Polynomial.zero(k)) + a * db
    return DiffOperator(k, max(op.order - 1, 0), coeffs)


def bracket_action(action: Action, b: Polynomial) -> Action:
    """Black-box commutator f -> action(b f) - b action(f)."""
    return lambda f: action(b * f) - b * action(f)


def expand_action(action: Action, k: int, n: int, reduce: Callable[[Polynomial], Polynomial] | None = None) -> DiffOperator:
    """Recover the unique coefficients a_alpha of an order <= n operator from its values on monomials.

    Uses D(z^beta) = sum_{alpha <= beta} a_alpha binom(beta, alpha) z^(beta - alpha),
    solved in increasing |beta|.  ``reduce`` (e.g. a normal form) is applied to each coefficient.
    """
    coeffs: dict[Monomial, Polynomial] = {}
    for beta in monomials_up_to(k, n):
        value = action(Polynomial.monomial(beta))
        for alpha, a in coeffs.items():
            c = multinomial_binom(beta, alpha)
            if c:
                value = value - a.mul_monomial(tuple(x - y for x, y in zip(beta, alpha)), c)
        coeffs[beta] = reduce(value) if reduce else value
    return DiffOperator(k, n, coeffs)


def bracket_words(k: int, length: int) -> list[tuple[int, ...]]:
    """Multisets of variable indices; brackets with commuting multiplications commute."""
    return list(combinations_with_replacement(range(k), length))


def order_witness(action: Action, n: int, k: int, degree_bound: int):
    """First (word, monomial, value) with an (n+1)-fold variable bracket nonzero, else None.

    Probes monomials of degree <= degree_bound - n - 1.
    """
    xs = Polynomial.variables(k)
    probes = monomials_up_to(k, degree_bound - n - 1) if degree_bound - n - 1 >= 0 else []
    for word in bracket_words(k, n + 1):
        act = action
        for i in word:
            act = bracket_action(act, xs[i])
        for m in probes:
            value = act(Polynomial.monomial(m))
            if value:
                return word, m, value
    return None


def verify_order(action: Action, n: int, k: int, degree_bound: int) -> bool:
    """True iff every (n+1)-fold bracket with coordinate variables kills all probe monomials."""
    return order_witness(action, n, k, degree_bound) is None


# -- jets -------------------------------------------------------------------------


def _u_degree(m: Monomial, k: int) -> int:
    return sum(m[k:])


def truncate_u(p: Polynomial, k: int, n: int) -> Polynomial:
    """Drop terms of u-degree > n from a polynomial in (z, u)."""
    return Polynomial(p.nvars, {m: c for m, c in p.terms.items() if _u_degree(m, k) <= n})


def shift_to_jet(f: Polynomial) -> Polynomial:
    """f(z + u) as a polynomial in 2k variables."""
    k = f.nvars
    images = [
        Polynomial.variable(2 * k, i) + Polynomial.variable(2 * k, k + i) for i in range(k)
    ]
    return compose(f, images)


class JetPresentation:
    """Jet^(n) of B = Q[z]/I presented as B[u]/((u)^(n+1), f_j(z+u))."""

    def __init__(self, ideal: Ideal, order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        self.ideal = ideal
        self.order = order
        self.nvars = ideal.nvars
        k = self.nvars
        self.relations: list[Polynomial] = [
            truncate_u(shift_to_jet(g), k, order) for g in ideal.nonzero_generators
        ]
        self._gb: GroebnerBasis | None = None

    def names(self, prefix: str = "x") -> list[str]:
        return default_names(self.nvars, prefix) + default_names(self.nvars, "u")

    def _basis(self) -> GroebnerBasis:
        if self._gb is None:
            k, n = self.nvars, self.order
            gens = [embed(g, 2 * k) for g in self.ideal.nonzero_generators] + list(self.relations)
            gens += [Polynomial.monomial((0,) * k + m) for m in monomials_up_to(k, n + 1) if sum(m) == n + 1]
            self._gb = groebner(Ideal(2 * k, tuple(gens)))
        return self._gb

    def reduce(self, p: Polynomial) -> Polynomial:
        """Canonical representative of a (z, u)-polynomial in the jet module."""
        p = truncate_u(p, self.nvars, self.order)
        if self.ideal.is_zero():
            return p
        return normal_form(p, self._basis())

    def coefficients(self, p: Polynomial) -> dict[Monomial, Polynomial]:
        """Split a (z, u)-polynomial as sum P_alpha(z) u^alpha."""
        k = self.nvars
        out: dict[Monomial, dict] = {}
        for m, c in p.terms.items():
            out.setdefault(m[k:], {})[m[:k]] = c
        return {alpha: Polynomial(k, t) for alpha, t in out.items()}


def jet_map(f: Polynomial, presentation: JetPresentation) -> Polynomial:
    """The universal map d^(n): f -> f(z + u), truncated and reduced."""
    if f.nvars != presentation.nvars:
        raise DimensionMismatch("polynomial and jet module live over different rings")
    return presentation.reduce(shift_to_jet(f))


def jet_fiber_dimension(presentation: JetPresentation, point: Sequence) -> int:
    """dim_Q of Q[u]/((u)^(n+1), f_j(a+u)), computed from the presentation's relations."""
    k, n = presentation.nvars, presentation.order
    point = as_point(point)
    if len(point) != k:
        raise DimensionMismatch(f"point has {len(point)} coordinates, expected {k}")
    at_point = [Polynomial.constant(k, c) for c in point] + Polynomial.variables(k)
    specialized = []
    for g, rel in zip(presentation.ideal.nonzero_generators, presentation.relations):
        r = compose(rel, at_point)
        if r.constant_term():
            raise PointNotOnGerm(g, point, r.constant_term())
        if r:
            specialized.append(r)
    columns = monomials_up_to(k, n)
    return len(columns) - linalg.rank(staircase_span(specialized, columns, n), len(columns))


def fiber_dimensions(ideal: Ideal, point: Sequence, n: int) -> tuple[int, int]:
    """(jet fiber dimension, principal-parts fiber dimension) at a point of V(ideal)."""
    jet = jet_fiber_dimension(JetPresentation(ideal, n), point)
    return jet, infinitesimal_algebra(ideal, point, n).dimension


# -- functionals ------------------------------------------------------------------


@dataclass(frozen=True)
class JetFunctional:
    """A B-linear functional on the free jet module, given by its values h(u^alpha)."""

    nvars: int
    order: int
    values: Mapping[Monomial, Polynomial]

    def __post_init__(self):
        for alpha in self.values:
            if sum(alpha) > self.order:
                raise ValueError(f"multi-index {alpha} exceeds order {self.order}")
        clean = {tuple(a): v for a, v in self.values.items() if v}
        object.__setattr__(self, "values", dict(sorted(clean.items(), key=lambda t: staircase_key(t[0]))))

    def __call__(self, jet: Polynomial) -> Polynomial:
        """h(sum P_alpha u^alpha) = sum P_alpha h_alpha."""
        k = self.nvars
        total = Polynomial.zero(k)
        for m, c in jet.terms.items():
            alpha = m[k:]
            if alpha in self.values:
                total = total + self.values[alpha].mul_monomial(m[:k], c)
        return total


def functional_to_operator(h: JetFunctional) -> DiffOperator:
    """h o d^(n), written in the basis D^alpha: the coefficient of D^alpha is h(u^alpha)."""
    return DiffOperator(h.nvars, h.order, dict(h.values))


def operator_to_functional(op: DiffOperator) -> JetFunctional:
    """Read off h(u^alpha) through the unique expansion of the operator's action."""
    expanded = expand_action(op.__call__, op.nvars, op.order)
    return JetFunctional(op.nvars, op.order, dict(expanded.coefficients))


# -- ideal preservation ------------------------------------------------------------


def _iterated_bracket(op: DiffOperator, word: Iterable[int]) -> DiffOperator:
    xs = Polynomial.variables(op.nvars)
    for i in word:
        op = bracket(op, xs[i])
    return op


def preservation_constraints(ideal: Ideal, n: int) -> list[tuple[tuple[int, ...], Polynomial]]:
    """(word, generator) pairs whose images must lie in I: all words of length 0..n."""
    k = ideal.nvars
    words = [w for length in range(n + 1) for w in bracket_words(k, length)]
    return [(w, g) for w in words for g in ideal.nonzero_generators]


def preservation_witness(op: DiffOperator, ideal: Ideal, gb: GroebnerBasis | None = None):
    """None if D(I) is contained in I, else (word, generator, remainder)."""
    gb = gb or groebner(ideal)
    for word, g in preservation_constraints(ideal, op.order):
        r = normal_form(apply(_iterated_bracket(op, word), g), gb)
        if r:
            return word, g, r
    return None


def operators_preserving_ideal(ideal: Ideal, n: int, coeff_degree: int, jobs: int = 1) -> list[DiffOperator]:
    """Echelonized Q-basis of {D of order <= n, coefficients of degree <= d : D(I) in I}.

    Unknowns are the coefficients of each a_alpha; the constraints are that
    D_w(g) reduces to zero for every generator g and every variable-bracket word w
    with |w| <= n.  Brackets of length > n vanish identically, so these constraints
    are exactly D(I) in I.
    """
    k = ideal.nvars
    gb = groebner(ideal)
    unknowns = [(alpha, mu) for alpha in monomials_up_to(k, n) for mu in monomials_up_to(k, coeff_degree)]
    constraints = preservation_constraints(ideal, n)

    def column(unknown):
        alpha, mu = unknown
        op = DiffOperator.basis_operator(alpha, Polynomial.monomial(mu))
        out = []
        for word, g in constraints:
            out.append(normal_form(apply(_iterated_bracket(op, word), g), gb))
        return out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            columns = list(pool.map(column, unknowns))
    else:
        columns = [column(u) for u in unknowns]

    # rows: (constraint index, monomial) -> coefficient of each unknown
    row_keys = sorted(
        {(ci, m) for col in columns for ci, p in enumerate(col) for m in p.terms},
        key=lambda t: (t[0], staircase_key(t[1])),
    )
    rindex = {key: i for i, key in enumerate(row_keys)}
    matrix = [[Fraction(0)] * len(unknowns) for _ in row_keys]
    for j, col in enumerate(columns):
        for ci, p in enumerate(col):
            for m, c in p.terms.items():
                matrix[rindex[(ci, m)]][j] = c
    solutions = linalg.nullspace(matrix, len(unknowns))
    basis = []
    for vec in solutions:
        coeffs: dict[Monomial, Polynomial] = {}
        for (alpha, mu), c in zip(unknowns, vec):
            if c:
                coeffs[alpha] = coeffs.get(alpha, Polynomial.zero(k)) + Polynomial.monomial(mu, c)
        basis.append(DiffOperator(k, n, coeffs))
    return basis


# -- induced operators on truncated quotients ---------------------------------------


def _centered_monomial(m: Monomial, point: RationalPoint) -> Polynomial:
    """(z - a)^m as a polynomial in z."""
    k = len(m)
    images = [Polynomial.variable(k, i) - point[i] for i in range(k)]
    return compose(Polynomial.monomial(m), images)


def _to_global(p: Polynomial, point: RationalPoint) -> Polynomial:
    """Rewrite a polynomial in u = z - a as a polynomial in z."""
    k = p.nvars
    return compose(p, [Polynomial.variable(k, i) - point[i] for i in range(k)])


@dataclass(frozen=True)
class InducedOperator:
    """A linear map on a truncated algebra: ``images[i]`` is the image of the i-th standard monomial.

    An operator of order n is only determined modulo M^(N+1-n) on an order-N algebra,
    so ``exact_degree`` = N - n records up to which degree the images are meaningful.
    """

    algebra: TruncatedLocalAlgebra
    order: int
    images: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        dim = self.algebra.dimension
        if len(self.images) != dim or any(len(r) != dim for r in self.images):
            raise ValueError("operator values are not elements of the quotient algebra")

    @property
    def exact_degree(self) -> int:
        return self.algebra.order - self.order

    def __call__(self, v: Sequence[Fraction]) -> list[Fraction]:
        dim = self.algebra.dimension
        out = [Fraction(0)] * dim
        for c, row in zip(v, self.images):
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] += c * x
        return out

    def restricted(self, bound: int | None = None) -> tuple[TruncatedLocalAlgebra, list[list[Fraction]]]:
        """Images of standard monomials of degree <= bound, pushed to the order-bound algebra."""
        bound = self.exact_degree if bound is None else bound
        small, proj = project(self.algebra, bound)
        rows = []
        for m, row in zip(self.algebra.std_monomials, self.images):
            if sum(m) <= bound:
                rows.append(linalg.matmul([list(row)], proj)[0])
        return small, rows

    def agrees_with(self, other: "InducedOperator", bound: int | None = None) -> bool:
        if bound is None:
            bound = min(self.exact_degree, other.exact_degree)
        return self.restricted(bound) == other.restricted(bound)


def induce_on_quotient(
    op: DiffOperator, ideal: Ideal, N: int, point: Sequence, check: bool = True
) -> InducedOperator:
    """The map E on O_a/(I + M^(N+1)) with r o D = E o r (well defined because D(I) is in I)."""
    point = as_point(point)
    if check:
        w = preservation_witness(op, ideal)
        if w is not None:
            word, g, r = w
            raise IdealNotPreserved(r, word, g)
    algebra = infinitesimal_algebra(ideal, point, N)
    images = []
    for m in algebra.std_monomials:
        value = apply(op, _centered_monomial(m, point))
        images.append(tuple(algebra.reduce_global(value)))
    return InducedOperator(algebra, op.order, tuple(images))


def square_commutes(op: DiffOperator, induced: InducedOperator, bound: int | None = None) -> bool:
    """Check r(D(f)) = E(r(f)) for every monomial f = (z-a)^gamma with |gamma| <= bound."""
    bound = induced.exact_degree if bound is None else bound
    A = induced.algebra
    small, proj = project(A, bound)
    for gamma in monomials_up_to(A.nvars, bound):
        lhs = small.reduce_global(apply(op, _centered_monomial(gamma, A.point)))
        cls = A.reduce(Polynomial.monomial(gamma))
        rhs = linalg.matmul([induced(cls)], proj)[0]
        if lhs != rhs:
            return False
    return True


def lift_from_quotient(induced: InducedOperator, n: int | None = None) -> DiffOperator:
    """A differential operator D on Q[z] inducing the given map up to its exact degree.

    The images are only known modulo M^(N+1-n), so D(I) lies in I only to that order.
    Coefficients are solved triangularly from E(class((z-a)^beta)), |beta| <= n, and
    each is replaced by its Groebner normal form modulo I.
    """
    n = induced.order if n is None else n
    A = induced.algebra
    if n > A.order:
        raise ValueError("lift order exceeds the truncation order of the quotient")
    gb = groebner(A.ideal)
    point = A.point
    values: dict[Monomial, Polynomial] = {}
    for beta in monomials_up_to(A.nvars, n):
        image = induced(A.reduce(Polynomial.monomial(beta)))
        values[beta] = _to_global(A.element(image), point)

    coeffs: dict[Monomial, Polynomial] = {}
    for beta in monomials_up_to(A.nvars, n):
        value = values[beta]
        for alpha, a in coeffs.items():
            c = multinomial_binom(beta, alpha)
            if c:
                shift = tuple(x - y for x, y in zip(beta, alpha))
                value = value - a * _centered_monomial(shift, point).scale(c)
        coeffs[beta] = normal_form(value, gb)
    return DiffOperator(A.nvars, n, coeffs)


def format_scalar_list(v: Sequence[Fraction]) -> str:
    return "[" + ", ".join(format_scalar(x) for x in v) + "]"
