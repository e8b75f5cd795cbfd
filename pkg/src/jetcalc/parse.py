"""Parser for the polynomial text syntax, e.g. ``3/2*x1^2*x2 - x3 + 1``.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*' factor) | ('/' INT))*
    factor := atom (('^'|'**') INT)?
    atom   := INT | NAME | '(' expr ')' | '-' atom

Division is only allowed by integer literals, so every accepted string is a
polynomial with rational coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .poly import Polynomial, RationalPoint

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


class PolynomialSyntaxError(ValueError):
    """Malformed polynomial or point text.  ``position`` is a 0-based character offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        self.reason = message
        super().__init__(f"{message} at position {position}: {text!r}")

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        self.k = len(names)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return PolynomialSyntaxError(message, self.text, tok[2])

    def expect_op(self, op: str):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}")
        self.take()

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        p = self.term().scale(sign)
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in ("+", "-"):
                self.take()
                t = self.term()
                p = p + t if tok[1] == "+" else p - t
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                p = p * self.factor()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                d = self.peek()
                if d[0] != "int":
                    raise self.error("division only by integer literals", d)
                self.take()
                if int(d[1]) == 0:
                    raise self.error("division by zero", d)
                p = p.scale(Fraction(1, int(d[1])))
            else:
                return p

    def factor(self) -> Polynomial:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            e = self.peek()
            if e[0] != "int":
                raise self.error("exponent must be a non-negative integer literal", e)
            self.take()
            return base ** int(e[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, value, _ = tok
        if kind == "int":
            return Polynomial.constant(self.k, int(value))
        if kind == "name":
            if value not in self.names:
                allowed = ", ".join(self.names) or "none"
                raise self.error(f"unknown variable {value!r} (allowed: {allowed})", tok)
            return Polynomial.variable(self.k, self.names[value])
        if kind == "op" and value == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        if kind == "op" and value == "-":
            return -self.atom()
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {value!r}", tok)


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    """Parse ``text`` as a polynomial in the variables ``names``."""
    return _Parser(text, names).parse()


_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str, offset: int = 0, whole: str | None = None) -> Fraction:
    whole = text if whole is None else whole
    m = _RATIONAL.match(text)
    if not m:
        raise PolynomialSyntaxError("expected a rational number p or p/q", whole, offset)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise PolynomialSyntaxError("zero denominator", whole, offset + m.start(2))
    return Fraction(num, den)


def parse_point(text: str, k: int | None = None) -> RationalPoint:
    """Parse a comma-separated rational point such as ``"1/2,0,-3"``."""
    coords = []
    offset = 0
    for piece in text.split(","):
        coords.append(parse_rational(piece, offset, text))
        offset += len(piece) + 1
    if k is not None and len(coords) != k:
        raise PolynomialSyntaxError(f"expected {k} coordinates, got {len(coords)}", text, 0)
    return tuple(coords)
