import random
from fractions import Fraction

import pytest
import sympy

from jetcalc import corpus
from jetcalc.ideal import (
    Ideal,
    PolynomialMap,
    ResourceLimitExceeded,
    groebner,
    ideal_equal,
    ideal_power,
    ideal_sum,
    normal_form,
    pullback,
)
from jetcalc.poly import DimensionMismatch, Polynomial, monomials_up_to

from .conftest import P, from_sympy, to_sympy


def I(*gens, k=2):
    return Ideal(k, tuple(P(g, k) for g in gens))


def test_groebner_monic_principal():
    assert groebner(I("2*x1")).basis == (P("x1"),)


def test_groebner_hand_s_polynomial():
    # x2 - x1^2 reduced by x1 leaves x2
    assert groebner(I("x2 - x1^2", "x1")).basis == (P("x1"), P("x2"))


def test_groebner_already_reduced():
    assert groebner(I("x1", "x2")).basis == (P("x1"), P("x2"))


def test_zero_ideal_basis_is_empty():
    gb = groebner(Ideal.zero(2))
    assert gb.basis == ()
    p = P("x1^2 + 3")
    assert normal_form(p, gb) == p


def test_normal_form_membership():
    assert normal_form(P("x1^2"), groebner(I("x1"))).is_zero()


def test_normal_form_grevlex_parabola():
    # under grevlex the leading monomial of x2 - x1^2 is x1^2, so x2^2 is already reduced
    gb = groebner(I("x2 - x1^2"))
    assert normal_form(P("x2^2"), gb) == P("x2^2")
    # x2^2 and x1^4 have the same class
    assert normal_form(P("x1^4"), gb) == P("x2^2")
    assert normal_form(P("x2^2 - x1^4"), gb).is_zero()


def _sympy_grevlex(gens, k):
    syms = sympy.symbols(f"x1:{k + 1}")
    exprs = [to_sympy(g, syms) for g in gens if g]
    if not exprs:
        return ()
    gb = sympy.groebner(exprs, *syms, order="grevlex", domain="QQ")
    polys = [from_sympy(e, syms) for e in gb.exprs]
    return polys


def test_groebner_matches_sympy_on_random_ideals():
    rng = random.Random(3)
    for trial in range(25):
        k = rng.randint(1, 3)
        gens = []
        for _ in range(rng.randint(1, 3)):
            terms = {m: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for m in monomials_up_to(k, 3) if rng.random() < 0.3}
            gens.append(Polynomial(k, terms))
        ours = groebner(Ideal(k, tuple(gens)))
        theirs = _sympy_grevlex(gens, k)
        assert set(ours.basis) == set(theirs), f"trial {trial}"


def test_groebner_deterministic_under_permutation():
    gens = [P("x1^2*x2 - x2^3 + 1", 3), P("x1*x3 - x2", 3), P("x3^2 - x1", 3)]
    ref = groebner(Ideal(3, tuple(gens)))
    for perm in ([2, 0, 1], [1, 2, 0], [0, 2, 1]):
        assert groebner(Ideal(3, tuple(gens[i] for i in perm))) == ref
    assert groebner(Ideal(3, tuple(gens))) == ref


def test_groebner_is_reduced():
    gb = groebner(I("x1^3 - x2", "x1*x2 - 1", "x2^2 + x1"))
    lms = gb.leading_monomials()
    for i, g in enumerate(gb.basis):
        assert g.terms[lms[i]] == 1
        for m in g.terms:
            for j, lm in enumerate(lms):
                if j != i:
                    assert not all(a <= b for a, b in zip(lm, m))


def test_resource_limit():
    gens = (P("x1^5 + x2^4 + x3^3 - 1", 3), P("x1^3 + x2^2 + x3^2 - 1", 3), P("x1*x2*x3 - x1 - 2", 3))
    with pytest.raises(ResourceLimitExceeded):
        groebner(Ideal(3, gens), max_pairs=2)
    with pytest.raises(ResourceLimitExceeded):
        groebner(Ideal(3, gens), max_degree=3)


def test_resource_limit_env(monkeypatch):
    monkeypatch.setenv("JETCALC_MAX_PAIRS", "1")
    with pytest.raises(ResourceLimitExceeded):
        groebner(I("x1^3 - x2", "x1*x2 - 1", "x2^2 + x1"))


def test_ideal_power_examples():
    assert set(ideal_power(I("x1", "x2"), 2).generators) == {P("x1^2"), P("x1*x2"), P("x2^2")}
    f = P("x1^2 + x2")
    assert ideal_power(Ideal(2, (f,)), 3).generators == (f**3,)
    sq = ideal_power(I("x1", "x2 - x1^2"), 2).generators
    assert set(sq) == {P("x1^2"), P("x1*(x2 - x1^2)"), P("(x2 - x1^2)^2")}


def test_ideal_power_generator_count():
    gens = I("x1", "x2", "x1 + x2 + 1")
    # binom(g + m - 1, m) with g = 3, m = 2, no coincidences here
    assert len(ideal_power(gens, 2).generators) == 6
    with pytest.raises(ValueError):
        ideal_power(gens, 0)


def test_ideal_sum_and_equal():
    assert ideal_equal(I("x1", "x2"), I("x2", "x1"))
    assert not ideal_equal(I("x1"), I("x1^2"))
    assert ideal_equal(I("x2 - x1^2", "x1 - 1"), I("x1 - 1", "x2 - 1"))
    assert ideal_equal(ideal_sum(I("x1"), I("x2")), I("x1", "x2"))
    with pytest.raises(DimensionMismatch):
        ideal_sum(I("x1"), I("x1", k=3))


def test_pullback_examples():
    phi = PolynomialMap(2, (P("x1"), P("x1*x2")))
    assert pullback(I("x2"), phi).generators == (P("x1*x2"),)
    ideal = I("x2^2 - x1^3", "x1*x2")
    assert ideal_equal(pullback(ideal, PolynomialMap.identity(2)), ideal)
    curve = PolynomialMap(1, (P("x1", 1), P("x1^2", 1)))
    assert pullback(I("x2 - x1^2"), curve).is_zero()
    with pytest.raises(DimensionMismatch):
        pullback(I("x1", k=3), phi)


@pytest.mark.parametrize("case", corpus.PULLBACKS, ids=lambda c: c.name)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_pullback_commutes_with_powers(case, m):
    assert ideal_equal(
        pullback(ideal_power(case.ideal, m), case.phi),
        ideal_power(pullback(case.ideal, case.phi), m),
    )


def test_normal_form_linear_and_idempotent():
    gb = groebner(I("x2^2 - x1^3", "x1*x2^2 - x2"))
    rng = random.Random(5)
    for _ in range(20):
        p = Polynomial(2, {m: rng.randint(-4, 4) for m in monomials_up_to(2, 5)})
        q = Polynomial(2, {m: rng.randint(-4, 4) for m in monomials_up_to(2, 5)})
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        nf = normal_form(p, gb)
        assert normal_form(nf, gb) == nf
        assert normal_form(p.scale(c) + q, gb) == nf.scale(c) + normal_form(q, gb)


def test_ideal_closure_random_members():
    ideal = I("x2^2 - x1^3", "x1^2*x2 + x1")
    gb = groebner(ideal)
    rng = random.Random(9)
    for _ in range(20):
        members = []
        for _ in range(2):
            combo = Polynomial.zero(2)
            for g in ideal.generators:
                combo = combo + g * Polynomial(2, {m: rng.randint(-3, 3) for m in monomials_up_to(2, 2)})
            members.append(combo)
        assert normal_form(members[0] + members[1], gb).is_zero()
