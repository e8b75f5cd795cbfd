"""Sparse multivariate polynomials over Q.

A polynomial is a map from exponent tuples to nonzero :class:`~fractions.Fraction`
coefficients.  Exponent tuples play the role of monomials throughout the package;
they are plain tuples so they hash and compare cheaply.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Monomial = tuple[int, ...]
Scalar = Fraction
RationalPoint = tuple[Fraction, ...]

Coefficient = Union[int, Fraction]


class DimensionMismatch(ValueError):
    """Raised when operands live in rings with different variable counts."""


def monomial_degree(m: Monomial) -> int:
    return sum(m)


def grlex_key(m: Monomial) -> tuple:
    """Sort key for graded lexicographic order (x1 > x2 > ... within a degree)."""
    return (sum(m), m)


def staircase_key(m: Monomial) -> tuple:
    """Ascending degree, and within a degree x1^d first.

    This is the column order used for every truncated algebra: 1, u1, u2, u1^2, u1*u2, ...
    """
    return (sum(m), tuple(-e for e in m))


def monomials_of_degree(k: int, d: int) -> list[Monomial]:
    """All exponent tuples of length k with total degree exactly d, x1-heavy first."""
    if k == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(k - 1, d - first):
            out.append((first,) + rest)
    return out


def monomials_up_to(k: int, n: int) -> list[Monomial]:
    """All monomials of degree <= n in staircase order."""
    out: list[Monomial] = []
    for d in range(n + 1):
        out.extend(monomials_of_degree(k, d))
    return out


def multinomial_binom(beta: Monomial, alpha: Monomial) -> int:
    """prod binom(beta_i, alpha_i); zero when some alpha_i > beta_i."""
    out = 1
    for b, a in zip(beta, alpha):
        if a > b:
            return 0
        out *= comb(b, a)
    return out


def as_point(coords: Iterable[Coefficient | str]) -> RationalPoint:
    return tuple(Fraction(c) for c in coords)


class Polynomial:
    """An immutable polynomial in ``nvars`` variables with rational coefficients.

    >>> x, y = Polynomial.variables(2)
    >>> str((x + y) * (x - y))
    'x1^2 - x2^2'
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Coefficient] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise DimensionMismatch(f"monomial {m} does not have {nvars} exponents")
                if c:
                    clean[tuple(m)] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Fraction]) -> "Polynomial":
        # Trusted constructor: terms already canonical.
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: Coefficient) -> "Polynomial":
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, m: Monomial, c: Coefficient = 1) -> "Polynomial":
        c = Fraction(c)
        return cls._raw(len(m), {tuple(m): c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def variables(cls, nvars: int) -> list["Polynomial"]:
        return [cls.variable(nvars, i) for i in range(nvars)]

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded lexicographic order (the printing order)."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: Coefficient) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {m: c * v for m, v in self._terms.items()})

    def mul_monomial(self, m: Monomial, c: Coefficient = 1) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(t, m)): c * v for t, v in self._terms.items()},
        )

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- printing ------------------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        names = default_names(self.nvars) if names is None else names
        if not self._terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "*".join(
                names[j] if e == 1 else f"{names[j]}^{e}" for j, e in enumerate(m) if e
            )
            if not mono:
                body = format_scalar(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_scalar(a)}*{mono}"
            if i == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self.format()!r})"


def default_names(k: int, prefix: str = "x") -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(k)]


def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- operations -------------------------------------------------------------


def _check_len(p: Polynomial, a: Sequence) -> None:
    if len(a) != p.nvars:
        raise DimensionMismatch(f"point has {len(a)} coordinates, polynomial has {p.nvars} variables")


def evaluate(p: Polynomial, a: Sequence[Coefficient]) -> Fraction:
    """Exact substitution of the rational point ``a``."""
    _check_len(p, a)
    a = [Fraction(c) for c in a]
    total = Fraction(0)
    for m, c in p.terms.items():
        v = c
        for ai, e in zip(a, m):
            if e:
                v *= ai**e
        total += v
    return total


def divided_derivative(p: Polynomial, alpha: Monomial) -> Polynomial:
    """Divided-power derivative (1/alpha!) d^alpha p, so that D^a z^b = binom(b, a) z^(b-a)."""
    if len(alpha) != p.nvars:
        raise DimensionMismatch(f"multi-index {alpha} vs {p.nvars} variables")
    out: dict[Monomial, Fraction] = {}
    for beta, c in p.terms.items():
        b = multinomial_binom(beta, alpha)
        if b:
            out[tuple(x - y for x, y in zip(beta, alpha))] = c * b
    return Polynomial._raw(p.nvars, out)


def _shift_one(p: Polynomial, i: int, a: Fraction) -> Polynomial:
    """Substitute z_i -> a + z_i."""
    if not a:
        return p
    out: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        e = m[i]
        for j in range(e + 1):
            # z_i^e -> sum_j binom(e, j) a^(e-j) z_i^j
            coeff = c * comb(e, j) * a ** (e - j)
            mm = m[:i] + (j,) + m[i + 1 :]
            s = out.get(mm, 0) + coeff
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
    return Polynomial._raw(p.nvars, out)


def taylor_shift(p: Polynomial, a: Sequence[Coefficient]) -> Polynomial:
    """Return p(a + u) expressed in the shifted variables u (same variable count).

    The coefficient of u^alpha equals D^alpha p evaluated at a.
    """
    _check_len(p, a)
    for i, ai in enumerate(a):
        p = _shift_one(p, i, Fraction(ai))
    return p


def truncate(p: Polynomial, n: int) -> Polynomial:
    """Drop every term of total degree > n."""
    if n < 0:
        raise ValueError("truncation order must be non-negative")
    return Polynomial._raw(p.nvars, {m: c for m, c in p.terms.items() if sum(m) <= n})


def compose(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Substitute ``images[i]`` for the i-th variable of ``p``."""
    if len(images) != p.nvars:
        raise DimensionMismatch(f"{len(images)} images for {p.nvars} variables")
    if not images:
        # constant polynomial in zero variables
        raise ValueError("cannot compose a polynomial in zero variables without a target ring")
    target = images[0].nvars
    for q in images:
        if q.nvars != target:
            raise DimensionMismatch("images live in different rings")
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] ** e
        return powers[key]

    total = Polynomial.zero(target)
    for m, c in p.terms.items():
        term = Polynomial.constant(target, c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def embed(p: Polynomial, nvars: int, offset: int = 0) -> Polynomial:
    """View ``p`` inside a ring with ``nvars`` variables, its variables starting at ``offset``."""
    if offset + p.nvars > nvars:
        raise DimensionMismatch("target ring too small")
    pad_left = (0,) * offset
    pad_right = (0,) * (nvars - offset - p.nvars)
    return Polynomial._raw(nvars, {pad_left + m + pad_right: c for m, c in p.terms.items()})

