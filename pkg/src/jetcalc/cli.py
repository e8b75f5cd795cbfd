"""``jetcalc`` command-line front end.

Exit codes: 0 success (or Separated), 10 AgreeUpTo, 2 input error,
3 point not on the germ / fibers, 4 resource limit exceeded, 1 failed acceptance run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from math import comb
from typing import Sequence

from . import __version__
from .artinian import PointNotOnGerm, infinitesimal_algebra, omega_fiber_dimension
from .diffops import JetPresentation, fiber_dimensions, operators_preserving_ideal
from .ideal import Ideal, ResourceLimitExceeded
from .parse import PolynomialSyntaxError, parse_point, parse_polynomial
from .poly import Polynomial, default_names, format_scalar
from .separation import (
    DEFAULT_PLUCKER_CAP,
    AgreeUpTo,
    Family,
    NotOnBothFibers,
    Separated,
    canonical_family_check,
    fiber_ideal,
    grass_point,
    separating_order,
)

SCHEMA = "jetcalc/1"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NOT_ON_GERM = 3
EXIT_RESOURCE = 4
EXIT_AGREE = 10


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    ideal_path: str | None = None
    family_path: str | None = None
    point: str | None = None
    order: int | None = None
    coeff_degree: int | None = None
    max_order: int | None = None
    s: str | None = None
    s2: str | None = None
    samples: list[str] = field(default_factory=list)
    plucker: bool = False
    plucker_cap: int = DEFAULT_PLUCKER_CAP
    max_pairs: int | None = None
    json: bool = False
    threads: int = 1


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _formatter(prog: str) -> argparse.HelpFormatter:
    # a fixed width keeps usage messages byte-identical whatever the terminal size
    return argparse.HelpFormatter(prog, width=100)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit versioned JSON instead of text")
    common.add_argument("--threads", type=_positive, default=1, help="worker threads (output is identical)")
    common.add_argument("--max-pairs", type=_positive, default=None, help="Groebner S-pair cap")

    parser = argparse.ArgumentParser(
        prog="jetcalc", description="Exact jet-space computations.", formatter_class=_formatter
    )
    parser.add_argument("--version", action="version", version=f"jetcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    add_parser = partial(sub.add_parser, formatter_class=_formatter)

    p = add_parser("neigh", parents=[common], help="n-th infinitesimal neighbourhood of a point")
    p.add_argument("--ideal", required=True, dest="ideal_path")
    p.add_argument("--point", required=True)
    p.add_argument("--order", required=True, type=_nonneg)

    p = add_parser("diffops", parents=[common], help="differential operators preserving an ideal")
    p.add_argument("--ideal", required=True, dest="ideal_path")
    p.add_argument("--order", required=True, type=_nonneg)
    p.add_argument("--coeff-deg", required=True, type=_nonneg, dest="coeff_degree")

    p = add_parser("jetmod", parents=[common], help="jet module presentation and fiber dimensions")
    p.add_argument("--ideal", required=True, dest="ideal_path")
    p.add_argument("--order", required=True, type=_nonneg)
    p.add_argument("--point")

    p = add_parser("separate", parents=[common], help="minimal separating jet order of two fibers")
    p.add_argument("--family", required=True, dest="family_path")
    p.add_argument("--s", required=True)
    p.add_argument("--s2", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--max-order", required=True, type=_nonneg, dest="max_order")

    p = add_parser("grass", parents=[common], help="Grassmannian point of a fiber's dual jet space")
    p.add_argument("--family", required=True, dest="family_path")
    p.add_argument("--s", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--order", required=True, type=_nonneg)
    p.add_argument("--plucker", action="store_true")
    p.add_argument("--plucker-cap", type=_positive, default=DEFAULT_PLUCKER_CAP, dest="plucker_cap")

    p = add_parser("check-family", parents=[common], help="look for colliding fibers on a parameter sample")
    p.add_argument("--family", required=True, dest="family_path")
    p.add_argument("--sample", required=True, action="append", dest="samples")

    add_parser("acceptance", parents=[common], help="run the acceptance corpus")
    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Parse argv into a RunConfig.  Usage errors raise SystemExit(2) naming the flag."""
    ns = build_parser().parse_args(list(argv))
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields and v is not None})


# -- input files --------------------------------------------------------------------------


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})")


def _parse_gens(gens, names: list[str], path: str) -> list[Polynomial]:
    if not isinstance(gens, list) or not gens:
        raise InputError(f"{path}: 'gens' must be a nonempty list of strings")
    out = []
    for i, g in enumerate(gens):
        if not isinstance(g, str):
            raise InputError(f"{path}: gens[{i}] is not a string")
        try:
            out.append(parse_polynomial(g, names))
        except PolynomialSyntaxError as exc:
            raise InputError(f"{path}: gens[{i}]: {exc.reason} at position {exc.position}: {g!r}")
    return out


def _count(data: dict, key: str, path: str) -> int:
    v = data.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise InputError(f"{path}: {key!r} must be a non-negative integer")
    return v


def load_ideal(path: str) -> Ideal:
    """Read ``{"vars": k, "gens": [...]}``."""
    data = _read_json(path)
    k = _count(data, "vars", path)
    return Ideal(k, tuple(_parse_gens(data.get("gens"), default_names(k), path)))


def load_family(path: str) -> tuple[Family, Ideal | None]:
    """Read ``{"params": m, "vars": k, "gens": [...]}`` plus an optional ``"ambient"`` list in x."""
    data = _read_json(path)
    m = _count(data, "params", path)
    k = _count(data, "vars", path)
    names = default_names(m, "s") + default_names(k, "x")
    fam = Family(m, k, tuple(_parse_gens(data.get("gens"), names, path)))
    ambient = None
    if "ambient" in data:
        ambient = Ideal(k, tuple(_parse_gens(data["ambient"], default_names(k), path)))
    return fam, ambient


def _point(text: str, k: int, flag: str):
    try:
        return parse_point(text, k)
    except PolynomialSyntaxError as exc:
        raise InputError(f"{flag}: {exc.reason}: {text!r}")


# -- rendering -------------------------------------------------------------------------------


def q(x: Fraction) -> str:
    return format_scalar(Fraction(x))


def qvec(v) -> list[str]:
    return [q(x) for x in v]


def _tuple(p) -> str:
    return "(" + ",".join(q(c) for c in p) + ")"


def _poly(p: Polynomial, names=None) -> str:
    return p.format(names)


def _ideal_str(ideal: Ideal) -> str:
    return "<" + ", ".join(g.format() for g in ideal.generators) + ">"


def _emit(config: RunConfig, payload: dict, lines: list[str]) -> str:
    if config.json:
        return json.dumps({"schema": SCHEMA, "command": config.command, **payload}, sort_keys=True, indent=2) + "\n"
    return "\n".join(lines) + "\n"


def _cmd_neigh(config: RunConfig) -> tuple[int, str]:
    ideal = load_ideal(config.ideal_path)
    point = _point(config.point, ideal.nvars, "--point")
    A = infinitesimal_algebra(ideal, point, config.order)
    unames = default_names(ideal.nvars, "u")
    cols = [Polynomial.monomial(m).format(unames) for m in A.columns]
    basis = A.format_basis(unames)
    rels = [p.format(unames) for p in A.relation_polynomials()]
    payload = {
        "ideal": [g.format() for g in ideal.generators],
        "point": qvec(point),
        "order": config.order,
        "dimension": A.dimension,
        "omega_dimension": omega_fiber_dimension(A),
        "basis": basis,
        "columns": cols,
        "relations": [qvec(r) for r in A.relations],
    }
    lines = [
        f"ideal {_ideal_str(ideal)}",
        f"point {_tuple(point)}",
        f"order {config.order}",
        f"dim {A.dimension}",
        f"omega dim {omega_fiber_dimension(A)}",
        "basis " + " ".join(basis),
        "columns " + " ".join(cols),
        f"relations {len(A.relations)}",
    ]
    for row, text in zip(A.relations, rels):
        lines.append("  [" + ", ".join(qvec(row)) + "]  " + text)
    return EXIT_OK, _emit(config, payload, lines)


def _cmd_diffops(config: RunConfig) -> tuple[int, str]:
    ideal = load_ideal(config.ideal_path)
    basis = operators_preserving_ideal(ideal, config.order, config.coeff_degree, jobs=config.threads)
    ops = [op.format() for op in basis]
    payload = {
        "ideal": [g.format() for g in ideal.generators],
        "order": config.order,
        "coeff_degree": config.coeff_degree,
        "dimension": len(basis),
        "operators": [
            {",".join(map(str, alpha)): a.format() for alpha, a in op.coefficients.items()} for op in basis
        ],
    }
    lines = [
        f"ideal {_ideal_str(ideal)}",
        f"order {config.order}",
        f"coeff degree {config.coeff_degree}",
        f"basis {len(basis)}",
    ] + [f"  {s}" for s in ops]
    return EXIT_OK, _emit(config, payload, lines)


def _cmd_jetmod(config: RunConfig) -> tuple[int, str]:
    ideal = load_ideal(config.ideal_path)
    k, n = ideal.nvars, config.order
    P = JetPresentation(ideal, n)
    names = P.names()
    rels = [r.format(names) for r in P.relations]
    payload = {
        "ideal": [g.format() for g in ideal.generators],
        "order": n,
        "relations": rels,
    }
    lines = [f"ideal {_ideal_str(ideal)}", f"order {n}", f"relations {len(rels)}"]
    lines += [f"  {r}" for r in rels]
    if ideal.is_zero():
        rank = comb(n + k, k)
        payload["free_rank"] = rank
        lines.append(f"free module rank {rank}")
    if config.point is not None:
        point = _point(config.point, k, "--point")
        jet, principal = fiber_dimensions(ideal, point, n)
        payload.update(point=qvec(point), jet_fiber_dimension=jet, principal_fiber_dimension=principal)
        lines += [
            f"point {_tuple(point)}",
            f"jet fiber dim {jet}",
            f"principal parts fiber dim {principal}",
        ]
    return EXIT_OK, _emit(config, payload, lines)


def _subspace_lines(label: str, space) -> list[str]:
    unames = default_names(space.algebra.nvars, "u")
    polys = [p.format(unames) for p in space.polynomials()]
    return [f"{label} span {{{', '.join(polys)}}}"]


def _cmd_separate(config: RunConfig) -> tuple[int, str]:
    fam, ambient = load_family(config.family_path)
    s = _point(config.s, fam.param_count, "--s")
    s2 = _point(config.s2, fam.param_count, "--s2")
    point = _point(config.point, fam.space_count, "--point")
    report = separating_order(fam, s, s2, point, config.max_order, ambient=ambient, jobs=config.threads)
    v = report.verdict
    payload = {
        "s": qvec(s),
        "s2": qvec(s2),
        "point": qvec(point),
        "max_order": config.max_order,
    }
    lines = [
        f"fiber1 {_ideal_str(fiber_ideal(fam, s))}",
        f"fiber2 {_ideal_str(fiber_ideal(fam, s2))}",
        f"point {_tuple(point)}",
    ]
    if isinstance(v, Separated):
        unames = default_names(fam.space_count, "u")
        payload["verdict"] = {
            "kind": "Separated",
            "order": v.order,
            "witness": [[p.format(unames) for p in w.polynomials()] for w in v.witness],
        }
        lines.append(f"Separated at order {v.order}")
        lines += _subspace_lines("fiber1", v.witness[0]) + _subspace_lines("fiber2", v.witness[1])
        code = EXIT_OK
    elif isinstance(v, AgreeUpTo):
        payload["verdict"] = {"kind": "AgreeUpTo", "max_order": v.max_order}
        lines.append(f"AgreeUpTo {v.max_order} (inconclusive: jets agree through this order)")
        code = EXIT_AGREE
    else:
        assert isinstance(v, NotOnBothFibers)
        payload["verdict"] = {"kind": "NotOnBothFibers", "fibers": [i + 1 for i in v.which]}
        lines.append("NotOnBothFibers " + ",".join(str(i + 1) for i in v.which))
        code = EXIT_NOT_ON_GERM
    return code, _emit(config, payload, lines)


def _cmd_grass(config: RunConfig) -> tuple[int, str]:
    fam, ambient = load_family(config.family_path)
    s = _point(config.s, fam.param_count, "--s")
    point = _point(config.point, fam.space_count, "--point")
    ideal = fiber_ideal(fam, s)
    gp = grass_point(ideal, point, config.order, ambient=ambient, plucker=config.plucker, plucker_cap=config.plucker_cap)
    payload = {
        "s": qvec(s),
        "point": qvec(point),
        "order": gp.order,
        "codimension": gp.codimension,
        "ambient_dimension": gp.ambient_dimension,
        "annihilator": [qvec(r) for r in gp.matrix],
    }
    lines = [
        f"fiber {_ideal_str(ideal)}",
        f"point {_tuple(point)}",
        f"order {gp.order}",
        f"ambient dim {gp.ambient_dimension}",
        f"codimension r_n {gp.codimension}",
        f"annihilator rows {len(gp.matrix)}",
    ] + ["  [" + ", ".join(qvec(r)) + "]" for r in gp.matrix]
    if config.plucker:
        if gp.plucker is None:
            payload["plucker"] = None
            lines.append("plucker omitted (cap exceeded)")
        else:
            payload["plucker"] = qvec(gp.plucker)
            lines.append("plucker [" + ", ".join(qvec(gp.plucker)) + "]")
    return EXIT_OK, _emit(config, payload, lines)


def _cmd_check_family(config: RunConfig) -> tuple[int, str]:
    fam, _ = load_family(config.family_path)
    samples = [_point(t, fam.param_count, "--sample") for t in config.samples]
    result = canonical_family_check(fam, samples, max_pairs=config.max_pairs, jobs=config.threads)
    payload = {
        "samples": [qvec(s) for s in result.samples],
        "collisions": [[qvec(a), qvec(b)] for a, b in result.collisions],
    }
    lines = [f"samples {len(result.samples)}", f"collisions {len(result.collisions)}"]
    lines += [f"  {_tuple(a)} ~ {_tuple(b)}" for a, b in result.collisions]
    if result.consistent:
        lines.append("sample consistent with a canonical family (not a proof)")
    return EXIT_OK, _emit(config, payload, lines)


def _cmd_acceptance(config: RunConfig) -> tuple[int, str]:
    from .acceptance import run_all

    results = run_all()
    ok = all(r.passed for r in results)
    payload = {"criteria": [{"id": r.ident, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results]}
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return (EXIT_OK if ok else EXIT_FAILED), _emit(config, payload, lines)


COMMANDS = {
    "neigh": _cmd_neigh,
    "diffops": _cmd_diffops,
    "jetmod": _cmd_jetmod,
    "separate": _cmd_separate,
    "grass": _cmd_grass,
    "check-family": _cmd_check_family,
    "acceptance": _cmd_acceptance,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Execute a command; returns (exit code, output).  Diagnostics go in the output on failure."""
    saved = os.environ.get("JETCALC_MAX_PAIRS")
    if config.max_pairs is not None:
        os.environ["JETCALC_MAX_PAIRS"] = str(config.max_pairs)
    try:
        return COMMANDS[config.command](config)
    except InputError as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    except PointNotOnGerm as exc:
        return EXIT_NOT_ON_GERM, f"error: {exc}\n"
    except ResourceLimitExceeded as exc:
        return EXIT_RESOURCE, f"error: resource limit exceeded: {exc}\n"
    except ValueError as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    finally:
        if saved is None:
            os.environ.pop("JETCALC_MAX_PAIRS", None)
        else:
            os.environ["JETCALC_MAX_PAIRS"] = saved


def main(argv: Sequence[str] | None = None) -> int:
    config = parse_args(sys.argv[1:] if argv is None else argv)
    code, out = run(config)
    stream = sys.stderr if out.startswith("error:") else sys.stdout
    stream.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
