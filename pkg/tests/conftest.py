from fractions import Fraction

import pytest
import sympy

from jetcalc.parse import parse_polynomial
from jetcalc.poly import Polynomial, default_names


def P(text, k=2, names=None):
    return parse_polynomial(text, names or default_names(k))


def to_sympy(p: Polynomial, symbols):
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, m):
            term *= s**e
        expr += term
    return expr


def from_sympy(expr, symbols) -> Polynomial:
    poly = sympy.Poly(sympy.expand(expr), *symbols)
    return Polynomial(
        len(symbols),
        {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in zip(poly.monoms(), poly.coeffs())},
    )


@pytest.fixture
def xy():
    return Polynomial.variables(2)
