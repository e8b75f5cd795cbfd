import random
from fractions import Fraction

import pytest
import sympy

from jetcalc import corpus
from jetcalc.artinian import PointNotOnGerm, Subspace, annihilator, project
from jetcalc.ideal import Ideal, ResourceLimitExceeded
from jetcalc.linalg import matmul, rref
from jetcalc.poly import DimensionMismatch, Polynomial, monomials_up_to, taylor_shift
from jetcalc.separation import (
    AgreeUpTo,
    Family,
    NotOnBothFibers,
    Separated,
    canonical_family_check,
    fiber_ideal,
    grass_point,
    jet_subspace,
    jets_agree,
    plucker_coordinates,
    separating_order,
)

from .conftest import P, to_sympy


def I(*gens, k=2):
    return Ideal(k, tuple(P(g, k) for g in gens))


def oracle_agree(a: Ideal, b: Ideal, point, n: int) -> bool:
    """Compare reduced Groebner bases of I(a+u) + M^(n+1) computed by sympy."""
    k = a.nvars
    syms = sympy.symbols(f"u1:{k + 1}")
    power = [to_sympy(Polynomial.monomial(m), syms) for m in monomials_up_to(k, n + 1) if sum(m) == n + 1]

    def gb(ideal):
        gens = [to_sympy(taylor_shift(g, point), syms) for g in ideal.nonzero_generators] + power
        return set(sympy.groebner(gens, *syms, order="grevlex", domain="QQ").exprs)

    return gb(a) == gb(b)


def test_fiber_ideal_examples():
    lines = corpus.FAMILIES["lines"]
    assert fiber_ideal(lines, (2,)).generators == (P("x2 - 2*x1"),)
    assert fiber_ideal(corpus.FAMILIES["parabolas"], (0,)).generators == (P("x2"),)
    assert fiber_ideal(corpus.FAMILIES["circles"], (1,)).generators == (P("x1^2 + x2^2 - 1"),)
    with pytest.raises(DimensionMismatch):
        fiber_ideal(lines, (1, 2))


def test_jets_agree_examples():
    assert all(jets_agree(I("x2^2 - x1^3"), I("x2^2 - x1^3"), (0, 0), n) for n in range(5))
    assert not jets_agree(I("x2 - x1"), I("x2 - 2*x1"), (0, 0), 1)
    assert jets_agree(I("x2 - x1^2"), I("x2 - 2*x1^2"), (0, 0), 1)
    assert not jets_agree(I("x2 - x1^2"), I("x2 - 2*x1^2"), (0, 0), 2)


def test_jets_agree_off_fiber():
    with pytest.raises(PointNotOnGerm):
        jets_agree(I("x2 - 1"), I("x2"), (0, 0), 1)


def test_separating_order_examples():
    lines = corpus.FAMILIES["lines"]
    r = separating_order(lines, (1,), (2,), (0, 0), 4)
    assert r.verdict.order == 1 and isinstance(r.verdict, Separated)
    assert separating_order(corpus.FAMILIES["parabolas"], (1,), (2,), (0, 0), 4).verdict.order == 2
    assert separating_order(lines, (3,), (3,), (0, 0), 4).verdict == AgreeUpTo(4)
    assert "inconclusive" in AgreeUpTo(4).describe()


def test_separating_order_witness_differs():
    r = separating_order(corpus.FAMILIES["parabolas"], (1,), (2,), (0, 0), 4)
    x, y = r.verdict.witness
    assert x != y
    assert isinstance(x, Subspace)


def test_not_on_both_fibers():
    r = separating_order(corpus.FAMILIES["circles"], (1,), (4,), (1, 0), 3)
    assert isinstance(r.verdict, NotOnBothFibers)
    assert r.verdict.which == (1,)
    with pytest.raises(ValueError):
        separating_order(corpus.FAMILIES["lines"], (1,), (2,), (0, 0), -1)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_tangency_hierarchy(m):
    fam = corpus.tangency_family(m)
    for s, s2 in [((1,), (2,)), ((Fraction(-1, 2),), (3,)), ((0,), (Fraction(5, 7),))]:
        verdict = separating_order(fam, s, s2, (0, 0), 6).verdict
        assert verdict.order == m
        a, b = fiber_ideal(fam, s), fiber_ideal(fam, s2)
        for n in range(m + 1):
            assert oracle_agree(a, b, (0, 0), n) == (n < m)
    assert separating_order(fam, (2,), (2,), (0, 0), 6).verdict == AgreeUpTo(6)


def _corpus_pairs():
    fams = corpus.FAMILIES
    return [
        (fams["lines"], (1,), (2,), (0, 0)),
        (fams["parabolas"], (1,), (-1,), (0, 0)),
        (fams["circles"], (1,), (1,), (1, 0)),
        (fams["squared-slopes"], (-1,), (1,), (0, 0)),
        (fams["squared-slopes"], (2,), (3,), (0, 0)),
        (fams["cubics-2param"], (1, 0), (1, 1), (0, 0)),
        (fams["cubics-2param"], (0, 1), (0, 2), (0, 0)),
        (fams["cubics-2param"], (1, 2), (3, 2), (0, 0)),
    ]


@pytest.mark.parametrize("fam, s, s2, a", _corpus_pairs())
def test_symmetry_and_oracle(fam, s, s2, a):
    r1 = separating_order(fam, s, s2, a, 4).verdict
    r2 = separating_order(fam, s2, s, a, 4).verdict
    assert type(r1) is type(r2)
    if isinstance(r1, Separated):
        assert r1.order == r2.order
    else:
        assert r1 == r2
    f1, f2 = fiber_ideal(fam, s), fiber_ideal(fam, s2)
    for n in range(5):
        assert jets_agree(f1, f2, a, n) == oracle_agree(f1, f2, a, n)


@pytest.mark.parametrize("fam, s, s2, a", _corpus_pairs())
def test_duality_consistency(fam, s, s2, a):
    f1, f2 = fiber_ideal(fam, s), fiber_ideal(fam, s2)
    for n in range(5):
        same = grass_point(f1, a, n) == grass_point(f2, a, n)
        assert same == jets_agree(f1, f2, a, n)


@pytest.mark.parametrize("g", corpus.GERMS, ids=lambda g: g.name)
def test_agreement_descends_to_lower_orders(g):
    """Projecting the order-4 image to order m gives the directly computed order-m image."""
    top = jet_subspace(g.ideal, g.point, 4)
    for m in range(5):
        direct = jet_subspace(g.ideal, g.point, m)
        _, proj = project(top.algebra, m)
        rows = matmul([list(r) for r in top.matrix], proj) if top.matrix else []
        assert Subspace.from_rows(direct.algebra, rows) == direct


def test_parallel_matches_serial():
    fam = corpus.FAMILIES["cubics-2param"]
    for s, s2 in [((1, 0), (1, 1)), ((2, 2), (2, 2))]:
        assert separating_order(fam, s, s2, (0, 0), 5, jobs=4) == separating_order(fam, s, s2, (0, 0), 5)


# -- Grassmannian points -----------------------------------------------------------------


def test_grass_point_whole_ambient():
    gp = grass_point(Ideal.zero(2), (0, 0), 2)
    assert gp.codimension == 0
    assert len(gp.matrix) == gp.ambient_dimension == 6
    assert gp.plucker == (1,)


def test_grass_point_line():
    gp = grass_point(I("x2 - x1"), (0, 0), 1)
    assert gp.codimension == 1
    assert len(gp.matrix) == 2 and gp.ambient_dimension == 3
    assert len(gp.plucker) == 3 and gp.plucker[0] == 1
    # every annihilating functional kills u2 - u1 = (0, -1, 1) in the basis (1, u1, u2)
    for row in gp.matrix:
        assert -row[1] + row[2] == 0


def test_grass_point_parabola():
    gp = grass_point(I("x2 - x1^2"), (0, 0), 2)
    assert gp.codimension == 3 and gp.ambient_dimension == 6


def test_plucker_cap_fallback():
    gp = grass_point(I("x2 - x1^2"), (0, 0), 4, plucker_cap=10)
    assert gp.plucker is None and gp.matrix
    assert grass_point(I("x2 - x1^2"), (0, 0), 2, plucker=False).plucker is None


def test_plucker_invariant_under_row_operations():
    rng = random.Random(17)
    for _ in range(20):
        p, n = rng.randint(1, 3), rng.randint(4, 6)
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(p)]
        if len(rref(rows, n)[0]) < p:
            continue
        while True:
            change = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(p)] for _ in range(p)]
            if len(rref(change, p)[0]) == p:
                break
        assert plucker_coordinates(matmul(change, rows), n) == plucker_coordinates(rows, n)


def test_grass_points_from_annihilator_match():
    sp = jet_subspace(I("x2^2 - x1^3"), (0, 0), 3)
    gp = grass_point(I("x2^2 - x1^3"), (0, 0), 3)
    assert gp.matrix == annihilator(sp).matrix


# -- canonicity sampling -----------------------------------------------------------------


def test_canonical_family_check_examples():
    assert canonical_family_check(corpus.FAMILIES["lines"], [(0,), (1,), (2,)]).consistent
    check = canonical_family_check(corpus.FAMILIES["squared-slopes"], [(-1,), (1,)])
    assert check.collisions == (((Fraction(-1),), (Fraction(1),)),)
    assert canonical_family_check(corpus.FAMILIES["circles"], [(5,)]).consistent


def test_canonical_family_check_resource_limit():
    fam = Family(1, 3, (P("x1^3 - s1*x2", 4, ["s1", "x1", "x2", "x3"]),
                       P("x2^2 - x3*x1 + s1", 4, ["s1", "x1", "x2", "x3"]),
                       P("x1*x2*x3 - 1", 4, ["s1", "x1", "x2", "x3"])))
    with pytest.raises(ResourceLimitExceeded):
        canonical_family_check(fam, [(1,), (2,)], max_pairs=1)


def test_canonical_check_parallel():
    fam = corpus.FAMILIES["squared-slopes"]
    samples = [(s,) for s in (-2, -1, 0, 1, 2)]
    serial = canonical_family_check(fam, samples)
    assert canonical_family_check(fam, samples, jobs=3) == serial
    assert len(serial.collisions) == 2
