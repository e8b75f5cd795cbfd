"""Named germs, maps and families used by the acceptance runner and the tests.

Every germ is paired with a rational point on it.  Reducedness/irreducibility of
fibers is an obligation on this list, not something the library checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ideal import Ideal, PolynomialMap
from .parse import parse_polynomial
from .poly import RationalPoint, as_point, default_names
from .separation import Family


@dataclass(frozen=True)
class Germ:
    name: str
    ideal: Ideal
    point: RationalPoint
    smooth: bool


def ideal_from_strings(k: int, gens: list[str]) -> Ideal:
    names = default_names(k)
    return Ideal(k, tuple(parse_polynomial(g, names) for g in gens))


def _germ(name, k, gens, point, smooth) -> Germ:
    return Germ(name, ideal_from_strings(k, gens), as_point(point), smooth)


GERMS: tuple[Germ, ...] = (
    _germ("plane", 2, ["0"], (0, 0), True),
    _germ("line", 2, ["x2"], (0, 0), True),
    _germ("parabola", 2, ["x2 - x1^2"], (0, 0), True),
    _germ("circle", 2, ["x1^2 + x2^2 - 1"], (1, 0), True),
    _germ("circle-3-4", 2, ["x1^2 + x2^2 - 1"], (Fraction(3, 5), Fraction(4, 5)), True),
    _germ("cusp-smooth-point", 2, ["x2^2 - x1^3"], (1, 1), True),
    _germ("node-smooth-point", 2, ["x1*x2"], (1, 0), True),
    _germ("twisted-cubic", 3, ["x2 - x1^2", "x3 - x1^3"], (1, 1, 1), True),
    _germ("node", 2, ["x1*x2"], (0, 0), False),
    _germ("cusp", 2, ["x2^2 - x1^3"], (0, 0), False),
    _germ("tacnode", 2, ["x2^2 - x1^4"], (0, 0), False),
    _germ("e6", 2, ["x2^3 - x1^4"], (0, 0), False),
    _germ("whitney-umbrella", 3, ["x1^2 - x2^2*x3"], (0, 0, 0), False),
    _germ("coordinate-axes-3d", 3, ["x1*x2", "x1*x3", "x2*x3"], (0, 0, 0), False),
    _germ("fat-point", 2, ["x1^2", "x2^2"], (0, 0), False),
)


def germ(name: str) -> Germ:
    for g in GERMS:
        if g.name == name:
            return g
    raise KeyError(name)


def smooth_germs() -> list[Germ]:
    return [g for g in GERMS if g.smooth]


def singular_germs() -> list[Germ]:
    return [g for g in GERMS if not g.smooth]


def _map(source: int, components: list[str]) -> PolynomialMap:
    names = default_names(source)
    return PolynomialMap(source, tuple(parse_polynomial(c, names) for c in components))


@dataclass(frozen=True)
class PullbackCase:
    name: str
    ideal: Ideal
    phi: PolynomialMap
    source_point: RationalPoint


PULLBACKS: tuple[PullbackCase, ...] = (
    PullbackCase("blowup-chart", ideal_from_strings(2, ["x1", "x2"]), _map(2, ["x1", "x1*x2"]), as_point((0, 0))),
    PullbackCase("cusp-blowup", ideal_from_strings(2, ["x2^2 - x1^3"]), _map(2, ["x1", "x1*x2"]), as_point((0, 0))),
    PullbackCase("parabola-param", ideal_from_strings(2, ["x2 - x1^2", "x1"]), _map(1, ["x1", "x1^2"]), as_point((0,))),
    PullbackCase("node-square", ideal_from_strings(2, ["x1*x2"]), _map(2, ["x1^2", "x2 + x1"]), as_point((0, 0))),
    PullbackCase("line-shear", ideal_from_strings(2, ["x2 - x1", "x1^2"]), _map(2, ["x1 + x2^2", "x2"]), as_point((0, 0))),
    PullbackCase("umbrella-slice", ideal_from_strings(3, ["x1^2 - x2^2*x3"]), _map(2, ["x1*x2", "x1", "x2^2"]), as_point((0, 0))),
    PullbackCase("translate", ideal_from_strings(2, ["x2^2 - x1^3", "x1*x2"]), _map(2, ["x1 + 1", "x2 - 1"]), as_point((-1, 1))),
)


def family_from_strings(params: int, k: int, gens: list[str]) -> Family:
    names = default_names(params, "s") + default_names(k, "x")
    return Family(params, k, tuple(parse_polynomial(g, names) for g in gens))


def tangency_family(m: int) -> Family:
    """{x2 - s1 * x1^m}: distinct parameters separate exactly at order m."""
    return family_from_strings(1, 2, [f"x2 - s1*x1^{m}"])


FAMILIES = {
    "lines": family_from_strings(1, 2, ["x2 - s1*x1"]),
    "parabolas": family_from_strings(1, 2, ["x2 - s1*x1^2"]),
    "circles": family_from_strings(1, 2, ["x1^2 + x2^2 - s1"]),
    "squared-slopes": family_from_strings(1, 2, ["x2 - s1^2*x1"]),
    "cubics-2param": family_from_strings(2, 2, ["x2 - s1*x1^2 - s2*x1^3"]),
}
