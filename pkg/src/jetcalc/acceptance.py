"""Acceptance corpus: each criterion is a function returning a :class:`CriterionResult`.

All checks are exact (zero tolerance).  Random instances come from fixed seeds.
"""

from __future__ import annotations

import io
import json
import os
import random
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from . import corpus
from .artinian import infinitesimal_algebra, omega_fiber_dimension
from .diffops import (
    DiffOperator,
    JetFunctional,
    JetPresentation,
    fiber_dimensions,
    functional_to_operator,
    induce_on_quotient,
    jet_map,
    lift_from_quotient,
    operator_to_functional,
    operators_preserving_ideal,
    order_witness,
    verify_order,
)
from .ideal import ideal_equal, ideal_power, pullback
from .poly import Polynomial, divided_derivative, monomials_up_to, multinomial_binom
from .separation import AgreeUpTo, Separated, grass_point, jets_agree, separating_order

SEED = 20261015


@dataclass(frozen=True)
class CriterionResult:
    ident: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.ident:2d} {self.name}: {self.detail}"


def random_rational(rng: random.Random, span: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_polynomial(rng: random.Random, k: int, degree: int, density: float = 0.5) -> Polynomial:
    terms = {}
    for m in monomials_up_to(k, degree):
        if rng.random() < density:
            terms[m] = random_rational(rng)
    return Polynomial(k, terms)


def random_operator(rng: random.Random, k: int, n: int, coeff_degree: int, top: bool = False) -> DiffOperator:
    """Random operator of order <= n; with ``top`` some |alpha| = n coefficient is nonzero."""
    coeffs = {alpha: random_polynomial(rng, k, coeff_degree) for alpha in monomials_up_to(k, n)}
    if top:
        tops = [a for a in coeffs if sum(a) == n]
        a = rng.choice(tops)
        if not coeffs[a]:
            coeffs[a] = Polynomial.constant(k, rng.randint(1, 5))
    return DiffOperator(k, n, coeffs)


# -- criteria --------------------------------------------------------------------------------


def dimension_law() -> CriterionResult:
    from .ideal import Ideal

    rng = random.Random(SEED + 1)
    checked = 0
    for k in range(1, 5):
        for n in range(7):
            for _ in range(3):
                a = tuple(random_rational(rng) for _ in range(k))
                dim = infinitesimal_algebra(Ideal.zero(k), a, n).dimension
                if dim != comb(n + k, k):
                    return CriterionResult(1, "dimension law", False, f"k={k} n={n} a={a}: dim {dim} != {comb(n + k, k)}")
                checked += 1
    return CriterionResult(1, "dimension law", True, f"{checked} algebras have dim binom(n+k,k)")


def fiber_dimension_sum() -> CriterionResult:
    checked = 0
    for g in corpus.GERMS:
        for n in range(5):
            A = infinitesimal_algebra(g.ideal, g.point, n)
            if A.dimension != 1 + omega_fiber_dimension(A):
                return CriterionResult(2, "fiber dimension sum", False, f"{g.name} n={n}")
            checked += 1
    return CriterionResult(2, "fiber dimension sum", True, f"dim A = 1 + dim Omega on {len(corpus.GERMS)} germs, {checked} algebras")


def representability_round_trip(instances: int = 120) -> CriterionResult:
    rng = random.Random(SEED + 3)
    for i in range(instances):
        k = rng.randint(1, 2)
        n = rng.randint(0, 3)
        op = random_operator(rng, k, n, 2)
        if functional_to_operator(operator_to_functional(op)) != op:
            return CriterionResult(3, "representability round trip", False, f"operator instance {i}: {op}")
        h = JetFunctional(k, n, {a: random_polynomial(rng, k, 2) for a in monomials_up_to(k, n)})
        if operator_to_functional(functional_to_operator(h)) != h:
            return CriterionResult(3, "representability round trip", False, f"functional instance {i}")
    return CriterionResult(3, "representability round trip", True, f"{instances} operators and {instances} functionals")


def order_characterization(per_order: int = 4) -> CriterionResult:
    rng = random.Random(SEED + 4)
    witnesses = []
    for n in (1, 2, 3):
        for i in range(per_order):
            k = 1 + (i % 2)
            op = random_operator(rng, k, n, 2, top=True)
            # (n+1)-fold brackets on monomials of degree <= 6
            if not verify_order(op, n, k, degree_bound=6 + n + 1):
                return CriterionResult(4, "order characterization", False, f"order-{n} operator failed verify_order({n})")
            w = order_witness(op, n - 1, k, degree_bound=6 + n)
            if w is None:
                return CriterionResult(4, "order characterization", False, f"no {n}-fold witness for {op}")
            if i == 0:
                word, m, value = w
                probe = Polynomial.monomial(m).format()
                witnesses.append(f"n={n}: bracket word {word} on {probe} -> {value}")
    return CriterionResult(4, "order characterization", True, "; ".join(witnesses))


def divided_power_law() -> CriterionResult:
    checked = 0
    for k in range(1, 4):
        idx = monomials_up_to(k, 5)
        for beta in idx:
            zb = Polynomial.monomial(beta)
            for alpha in idx:
                b = multinomial_binom(beta, alpha)
                expected = (
                    Polynomial.monomial(tuple(x - y for x, y in zip(beta, alpha)), b) if b else Polynomial.zero(k)
                )
                if divided_derivative(zb, alpha) != expected:
                    return CriterionResult(5, "divided-power law", False, f"alpha={alpha} beta={beta}")
                checked += 1
    return CriterionResult(5, "divided-power law", True, f"{checked} (alpha, beta) pairs for k <= 3")


def jet_nonlinearity() -> CriterionResult:
    from .ideal import Ideal

    P = JetPresentation(Ideal.zero(1), 1)
    z = Polynomial.variable(1, 0)
    z2 = Polynomial.monomial((1, 0), 1)  # z in the (z, u) ring
    diff = jet_map(z * z, P) - P.reduce(z2 * jet_map(z, P))
    zu = Polynomial.monomial((1, 1))
    ok = diff == zu
    return CriterionResult(6, "jet non-linearity witness", ok, f"d(z^2) - z d(z) = {diff.format(P.names('z'))}")


def lift_induce_coherence(N: int = 6) -> CriterionResult:
    count = 0
    for name in ("cusp", "node"):
        g = corpus.germ(name)
        for n in (1, 2):
            for op in operators_preserving_ideal(g.ideal, n, 2):
                E = induce_on_quotient(op, g.ideal, N, g.point)
                lifted = lift_from_quotient(E, n)
                again = induce_on_quotient(lifted, g.ideal, N, g.point)
                if not again.agrees_with(E, N - n):
                    return CriterionResult(7, "lift/induce coherence", False, f"{name} n={n}: {op}")
                count += 1
    return CriterionResult(7, "lift/induce coherence", True, f"{count} induced operators on cusp and node, N={N}")


def pullback_power_commutation() -> CriterionResult:
    checked = 0
    for case in corpus.PULLBACKS:
        for m in (1, 2, 3):
            lhs = pullback(ideal_power(case.ideal, m), case.phi)
            rhs = ideal_power(pullback(case.ideal, case.phi), m)
            if not ideal_equal(lhs, rhs):
                return CriterionResult(8, "pullback/power commutation", False, f"{case.name} m={m}")
            checked += 1
    return CriterionResult(8, "pullback/power commutation", True, f"{len(corpus.PULLBACKS)} (I, phi) instances, {checked} checks")


SEPARATION_PARAMS = [(1, 2), (-1, Fraction(1, 2)), (0, 3), (Fraction(2, 3), Fraction(-5, 7))]


def separation_corpus() -> CriterionResult:
    origin = (0, 0)
    pairs = 0
    for m in (1, 2, 3, 4):
        fam = corpus.tangency_family(m)
        for s, s2 in SEPARATION_PARAMS:
            v = separating_order(fam, (s,), (s2,), origin, 6).verdict
            if not (isinstance(v, Separated) and v.order == m):
                return CriterionResult(9, "separation corpus", False, f"m={m} s={s} s'={s2}: {v}")
            same = separating_order(fam, (s,), (s,), origin, 6).verdict
            if same != AgreeUpTo(6):
                return CriterionResult(9, "separation corpus", False, f"m={m} s=s'={s}: {same}")
    from .separation import fiber_ideal

    for fname in ("lines", "parabolas", "squared-slopes"):
        fam = corpus.FAMILIES[fname]
        params = [(-1,), (1,), (2,), (Fraction(1, 2),)]
        for i, s in enumerate(params):
            for s2 in params[i:]:
                a, b = fiber_ideal(fam, s), fiber_ideal(fam, s2)
                for n in range(5):
                    if (grass_point(a, origin, n) == grass_point(b, origin, n)) != jets_agree(a, b, origin, n):
                        return CriterionResult(9, "separation corpus", False, f"duality {fname} {s} {s2} n={n}")
                    pairs += 1
    return CriterionResult(9, "separation corpus", True, f"orders 1..4 exact; duality on {pairs} (pair, n) cases")


def smooth_jet_principal() -> CriterionResult:
    checked = 0
    for g in corpus.smooth_germs():
        for n in range(4):
            jet, principal = fiber_dimensions(g.ideal, g.point, n)
            if jet != principal:
                return CriterionResult(10, "smooth Jet = P fibers", False, f"{g.name} n={n}: {jet} vs {principal}")
            checked += 1
    return CriterionResult(10, "smooth Jet = P fibers", True, f"{len(corpus.smooth_germs())} smooth points, {checked} orders")


def singular_observations(max_order: int = 3) -> str:
    """Both fiber dimensions at the singular corpus points (an observation, never asserted)."""
    lines = ["# germ point n jet_fiber_dim principal_fiber_dim"]
    for g in corpus.singular_germs():
        pt = ",".join(str(c) for c in g.point)
        for n in range(max_order + 1):
            jet, principal = fiber_dimensions(g.ideal, g.point, n)
            lines.append(f"{g.name} ({pt}) {n} {jet} {principal}")
    return "\n".join(lines) + "\n"


# -- CLI determinism -------------------------------------------------------------------------


FIXTURE_FILES = {
    "cusp.json": {"vars": 2, "gens": ["x2^2 - x1^3"]},
    "node.json": {"vars": 2, "gens": ["x1*x2"]},
    "line.json": {"vars": 2, "gens": ["x2"]},
    "zero2.json": {"vars": 2, "gens": ["0"]},
    "umbrella.json": {"vars": 3, "gens": ["x1^2 - x2^2*x3"]},
    "lines.json": {"params": 1, "vars": 2, "gens": ["x2 - s1*x1"]},
    "parabolas.json": {"params": 1, "vars": 2, "gens": ["x2 - s1*x1^2"]},
    "squared.json": {"params": 1, "vars": 2, "gens": ["x2 - s1^2*x1"]},
}

CLI_FIXTURES: list[list[str]] = [
    ["neigh", "--ideal", "cusp.json", "--point", "0,0", "--order", "2"],
    ["neigh", "--ideal", "umbrella.json", "--point", "0,0,0", "--order", "3", "--json"],
    ["neigh", "--ideal", "cusp.json", "--point", "1,2", "--order", "1"],
    ["diffops", "--ideal", "line.json", "--order", "1", "--coeff-deg", "1"],
    ["diffops", "--ideal", "cusp.json", "--order", "1", "--coeff-deg", "2", "--json"],
    ["jetmod", "--ideal", "zero2.json", "--order", "2"],
    ["jetmod", "--ideal", "cusp.json", "--order", "2", "--point", "1,1"],
    ["separate", "--family", "parabolas.json", "--s", "1", "--s2", "2", "--point", "0,0", "--max-order", "6"],
    ["separate", "--family", "lines.json", "--s", "1", "--s2", "1", "--point", "0,0", "--max-order", "4", "--json"],
    ["separate", "--family", "lines.json", "--s", "1", "--s2", "2", "--point", "1,0", "--max-order", "4"],
    ["grass", "--family", "lines.json", "--s", "1", "--point", "0,0", "--order", "1", "--plucker"],
    ["grass", "--family", "parabolas.json", "--s", "1", "--point", "0,0", "--order", "2", "--plucker", "--json"],
    ["check-family", "--family", "squared.json", "--sample", "-1", "--sample", "1", "--sample", "2"],
    ["separate", "--family", "lines.json", "--s", "1", "--point", "0,0", "--max-order", "4"],
]


def write_fixture_files(directory: str) -> None:
    for name, data in FIXTURE_FILES.items():
        with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
            json.dump(data, fh)


def run_cli_capture(argv: list[str]) -> tuple[int, bytes]:
    """Run the CLI in-process and capture (exit code, stdout + stderr bytes)."""
    from .cli import main

    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code if isinstance(exc.code, int) else 2
    return code, (out.getvalue() + err.getvalue()).encode("utf-8")


def cli_determinism() -> CriterionResult:
    with tempfile.TemporaryDirectory() as d:
        write_fixture_files(d)
        cwd = os.getcwd()
        os.chdir(d)
        try:
            codes = set()
            for argv in CLI_FIXTURES:
                runs = [run_cli_capture(argv) for _ in range(3)]
                runs += [run_cli_capture(argv + ["--threads", "4"]) for _ in range(3)]
                if len(set(runs)) != 1:
                    return CriterionResult(11, "CLI determinism", False, f"output differs for {' '.join(argv)}")
                codes.add(runs[0][0])
        finally:
            os.chdir(cwd)
    return CriterionResult(11, "CLI determinism", True, f"{len(CLI_FIXTURES)} fixtures x 3 runs and 1 vs 4 threads; exit codes {sorted(codes)}")


CRITERIA: list[Callable[[], CriterionResult]] = [
    dimension_law,
    fiber_dimension_sum,
    representability_round_trip,
    order_characterization,
    divided_power_law,
    jet_nonlinearity,
    lift_induce_coherence,
    pullback_power_commutation,
    separation_corpus,
    smooth_jet_principal,
    cli_determinism,
]


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
