"""Command-line front end.

State sources are colon-separated specs::

    bell                 Bell pair on C^2 (x) C^2
    bell:2x4             Bell pair embedded in C^2 (x) C^4
    mixed:2x2x2          maximally mixed state
    horodecki:0.9        2x4 bound entangled state with parameter b
    ghz:0.1              perturbed GHZ pure state with epsilon
    sep:3x3[:k]          random separable mixture of k product terms (uses --seed)
    mix:W:A:B            W*A + (1-W)*B; W may be the literal x for `threshold`
    file:PATH            JSON density-matrix file (must come last)

Subsystem numbers on the command line (``--partition``, ``--subsystem``)
are 1-based.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Callable

import numpy as np

from . import detect
from .bloch import bipartite_decomposition
from .criteria import CRITERIA, CriterionParams, CriterionReport, evaluate
from .numerics import ContractViolation, NumericalFailure
from .states import (
    DensityMatrix,
    InvalidState,
    bell_pair,
    density_from_pure,
    from_json_dict,
    ghz_perturbed,
    horodecki_2x4,
    load,
    maximally_mixed,
    mix,
    random_separable,
    validate,
)

_DIMS = re.compile(r"^\d+(x\d+)+$")


class UsageError(Exception):
    pass


def _dims(tok: str) -> tuple[int, ...]:
    if not _DIMS.match(tok):
        raise UsageError(f"bad dimension spec {tok!r} (expected e.g. 2x4)")
    return tuple(int(t) for t in tok.split("x"))


def _float(tok: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise UsageError(f"expected a number, got {tok!r}") from None


def _parse(tokens: list[str], seed, checked: bool):
    """Consume one source from ``tokens``; return (builder(x), uses_x, rest)."""
    if not tokens:
        raise UsageError("incomplete state source")
    head, rest = tokens[0], tokens[1:]
    if head == "bell":
        dims = (2, 2)
        if rest and _DIMS.match(rest[0]):
            dims, rest = _dims(rest[0]), rest[1:]
        rho = density_from_pure(bell_pair(dims))
        return (lambda x: rho), False, rest
    if head == "mixed":
        if not rest:
            raise UsageError("mixed needs dimensions, e.g. mixed:2x2")
        rho = maximally_mixed(_dims(rest[0]))
        return (lambda x: rho), False, rest[1:]
    if head == "horodecki":
        if not rest:
            raise UsageError("horodecki needs b, e.g. horodecki:0.9")
        rho = horodecki_2x4(_float(rest[0]))
        return (lambda x: rho), False, rest[1:]
    if head == "ghz":
        if not rest:
            raise UsageError("ghz needs epsilon, e.g. ghz:0.1")
        rho = density_from_pure(ghz_perturbed(_float(rest[0])))
        return (lambda x: rho), False, rest[1:]
    if head == "sep":
        if not rest:
            raise UsageError("sep needs dimensions, e.g. sep:3x3:4")
        dims, rest = _dims(rest[0]), rest[1:]
        k = 4
        if rest and rest[0].isdigit():
            k, rest = int(rest[0]), rest[1:]
        rho = random_separable(dims, k, seed)
        return (lambda x: rho), False, rest
    if head == "file":
        if not rest:
            raise UsageError("file needs a path")
        path = ":".join(rest)
        rho = load(path) if checked else from_json_dict(json.loads(open(path).read()))
        return (lambda x: rho), False, []
    if head == "mix":
        if not rest:
            raise UsageError("mix needs a weight")
        wtok, rest = rest[0], rest[1:]
        a, ua, rest = _parse(rest, seed, checked)
        b, ub, rest = _parse(rest, seed, checked)
        if wtok == "x":
            return (lambda x: mix(x, a(x), b(x))), True, rest
        w = _float(wtok)
        return (lambda x: mix(w, a(x), b(x))), ua or ub, rest
    raise UsageError(f"unknown state source {head!r}")


def parse_source(spec: str, seed=None, checked: bool = True) -> tuple[Callable[[float], DensityMatrix], bool]:
    builder, uses_x, rest = _parse(spec.split(":"), seed, checked)
    if rest:
        raise UsageError(f"trailing tokens in state source: {':'.join(rest)!r}")
    return builder, uses_x


def fixed_state(spec: str, seed=None, checked: bool = True) -> DensityMatrix:
    builder, uses_x = parse_source(spec, seed, checked)
    if uses_x:
        raise UsageError("state source contains the free weight x; use `threshold`")
    return builder(0.0)


def _params_from_args(args, nparties: int) -> CriterionParams:
    alphas = None
    if args.alphas:
        alphas = tuple(_float(t) for t in args.alphas.split(","))
    partition = None
    if args.partition:
        partition = tuple(int(t) - 1 for t in args.partition.split(","))
    subsystem = None if args.subsystem is None else args.subsystem - 1
    alpha = args.alpha if args.alpha is not None else 0.0
    beta = args.beta if args.beta is not None else 0.0
    if args.criterion == "thm2" and alphas is None:
        alphas = (alpha,) * nparties
    return CriterionParams(
        args.criterion,
        m=args.m,
        alpha=alpha,
        beta=beta,
        alphas=alphas,
        partition=partition,
        subsystem=subsystem,
    )


def _emit_report(rep: CriterionReport, fmt: str) -> str:
    d = rep.to_dict()
    if fmt == "json":
        return json.dumps(d, indent=2)
    if fmt == "csv":
        return "criterion,value,bound,margin,detected\n" + (
            f"{d['criterion']},{d['value']!r},{d['bound']!r},{d['margin']!r},{str(d['detected']).lower()}"
        )
    lines = [f"criterion: {d['criterion']}"]
    p = rep.params
    if d["criterion"] in ("thm1", "vb", "lb"):
        lines.append(f"alpha: {p.alpha:.12g}  beta: {p.beta:.12g}  m: {p.m}")
    elif p.alphas is not None:
        lines.append("alphas: " + ",".join(f"{a:.12g}" for a in p.alphas) + f"  m: {p.m}")
    if p.partition is not None:
        lines.append("partition: " + ",".join(str(i + 1) for i in p.partition))
    if p.subsystem is not None:
        lines.append(f"subsystem: {p.subsystem + 1}")
    lines += [
        f"value: {d['value']:.12g}",
        f"bound: {d['bound']:.12g}",
        f"margin: {d['margin']:.12g}",
        f"detected: {str(d['detected']).lower()}",
    ]
    return "\n".join(lines)


def _emit_thresholds(results, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in results], indent=2)
    if fmt == "csv":
        return detect.thresholds_csv(results).rstrip("\n")
    lines = []
    for r in results:
        side = " ".join(f"{k}={v:g}" for k, v in r.side.items())
        if r.x_star is None:
            what = "never detects"
        else:
            what = f"x* = {r.x_star:.6f} +/- {r.bracket:.1e}"
        flag = "  (multiple crossings)" if r.multi_crossing else ""
        lines.append(f"{r.family} {side} {r.params.criterion}: {what}{flag}".replace("  ", " "))
    return "\n".join(lines)


# -- verbs -----------------------------------------------------------------

def cmd_decompose(args) -> int:
    dec = bipartite_decomposition(fixed_state(args.state, args.seed))
    if args.format == "json":
        print(json.dumps(dec.to_dict(), indent=2))
        return 0
    with np.printoptions(precision=12, suppress=True, linewidth=120):
        print(f"dims: {dec.d1} {dec.d2}")
        print(f"r: {dec.r}")
        print(f"s: {dec.s}")
        print(f"T:\n{dec.T}")
    return 0


def cmd_check(args) -> int:
    rho = fixed_state(args.state, args.seed)
    rep = evaluate(rho, _params_from_args(args, rho.nparties))
    print(_emit_report(rep, args.format))
    return 0


def cmd_validate(args) -> int:
    rho = fixed_state(args.state, args.seed, checked=False)
    rep = validate(rho)
    if args.format == "json":
        print(json.dumps({
            "passed": rep.passed,
            "hermiticity_deviation": rep.hermiticity_deviation,
            "trace_deviation": rep.trace_deviation,
            "min_eigenvalue": rep.min_eigenvalue,
        }, indent=2))
    else:
        print(f"hermiticity deviation: {rep.hermiticity_deviation:.3e}")
        print(f"trace deviation: {rep.trace_deviation:.3e}")
        print(f"min eigenvalue: {rep.min_eigenvalue:.12g}")
        print("valid: " + ("yes" if rep.passed else "no"))
        for p in rep.problems():
            print(f"  {p}")
    return 0 if rep.passed else 1


def cmd_threshold(args) -> int:
    builder, uses_x = parse_source(args.state, args.seed)
    if not uses_x:
        raise UsageError("threshold needs a state source with a free weight, e.g. mix:x:bell:mixed:2x2")
    nparties = builder(0.0).nparties
    fam = detect.StateFamily(args.state, builder)
    res = detect.detection_threshold(fam, _params_from_args(args, nparties), args.tol_x, args.grid)
    print(_emit_thresholds([res], args.format))
    return 0


def cmd_table1(args) -> int:
    results = detect.table1_reproduce(args.tol_x)
    if args.format == "text":
        print(detect.format_table1(results))
    else:
        print(_emit_thresholds(results, args.format))
    return 0


def cmd_bipartite_example(args) -> int:
    if args.b is not None:
        results = detect.bipartite_example_thresholds(args.b, args.tol_x)
        print(_emit_thresholds(results, args.format))
        return 0
    rows = detect.bipartite_b_scan(detect.default_b_grid(), args.tol_x)
    if args.format == "json":
        print(json.dumps([{"b": r.b, "thresholds": list(r.thresholds), "ordered": r.ordered} for r in rows], indent=2))
        return 0
    sep = "," if args.format == "csv" else "  "
    print(sep.join(["b", "thm1", "vb", "lb", "ordered"]))
    for r in rows:
        cells = [f"{r.b:.2f}"] + [detect._fmt(t) for t in r.thresholds] + [str(r.ordered).lower()]
        print(sep.join(cells))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blochsep", description="Bloch-representation separability criteria")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, state=True, fmt=("text", "json", "csv")):
        if state:
            sp.add_argument("--state", required=True, help="state source spec (see module help)")
        sp.add_argument("--format", choices=fmt, default="text")
        sp.add_argument("--seed", type=int, default=None)

    def crit(sp):
        sp.add_argument("--criterion", choices=CRITERIA, required=True)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta", type=float)
        sp.add_argument("--alphas", help="comma-separated per-subsystem alphas")
        sp.add_argument("-m", type=int, default=0, help="border width")
        sp.add_argument("--partition", help="comma-separated 1-based modes forming A")
        sp.add_argument("--subsystem", type=int, help="1-based factor to transpose (ppt)")

    sp = sub.add_parser("decompose", help="Bloch coefficients r, s, T")
    common(sp, fmt=("text", "json"))
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("check", help="evaluate one criterion")
    common(sp)
    crit(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("validate", help="check Hermiticity, trace and positivity")
    common(sp, fmt=("text", "json"))
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("threshold", help="detection threshold over the free weight x")
    common(sp)
    crit(sp)
    sp.add_argument("--grid", type=int, default=detect.DEFAULT_SCAN, help="coarse scan points")
    sp.add_argument("--tol-x", type=float, default=detect.DEFAULT_TOL_X)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("table1", help="GHZ-perturbation threshold table")
    common(sp, state=False)
    sp.add_argument("--tol-x", type=float, default=detect.DEFAULT_TOL_X)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("bipartite-example", help="thresholds for the 2x4 bound entangled family")
    common(sp, state=False)
    sp.add_argument("--b", type=float, help="single b; omit to scan b = 0.05..0.95")
    sp.add_argument("--tol-x", type=float, default=detect.DEFAULT_TOL_X)
    sp.set_defaults(func=cmd_bipartite_example)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except InvalidState as exc:
        rep = exc.report
        print(f"invalid state: {exc}", file=sys.stderr)
        print(f"min eigenvalue: {rep.min_eigenvalue:.12g}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot read {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1
    except (NumericalFailure, ContractViolation, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
