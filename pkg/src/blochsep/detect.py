"""Detection thresholds over one-parameter state families.

A family maps a weight ``x`` in [0, 1] to a state; the threshold is the
smallest ``x`` at which a criterion certifies entanglement. Margins are
scanned on a grid first and the first crossing is refined by bisection,
so non-monotone margins are reported rather than silently mis-bracketed.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .criteria import DETECTION_TOL, CriterionParams, evaluate, preset
from .numerics import ContractViolation
from .states import (
    DensityMatrix,
    bell_pair,
    density_from_pure,
    ghz_perturbed,
    horodecki_2x4,
    maximally_mixed,
    mix,
)

DEFAULT_SCAN = 200
DEFAULT_TOL_X = 1e-5

TABLE1_EPSILONS = (0.0, 1e-5, 1e-1, 1.0)
TABLE1_ALPHA = 0.1


@dataclass(frozen=True)
class StateFamily:
    name: str
    generator: Callable[[float], DensityMatrix]
    side: dict = field(default_factory=dict)
    symbol: str = "x"

    def __call__(self, x: float) -> DensityMatrix:
        return self.generator(x)


def ghz_family(eps: float) -> StateFamily:
    """Perturbed GHZ state mixed with white noise, weight x on the GHZ part."""
    ghz = density_from_pure(ghz_perturbed(eps))
    noise = maximally_mixed((2, 2, 2))
    return StateFamily("ghz", lambda x: mix(x, ghz, noise), {"epsilon": eps})


def horodecki_family(b: float) -> StateFamily:
    """Bell pair (embedded in C^2 (x) C^4) mixed into the 2x4 bound entangled state."""
    xi = density_from_pure(bell_pair((2, 4)))
    rho = horodecki_2x4(b)
    return StateFamily("horodecki", lambda x: mix(x, xi, rho), {"b": b})


def margin_curve(family: StateFamily, params: CriterionParams, grid: int) -> list[tuple[float, float]]:
    if grid < 2:
        raise ContractViolation("grid must have at least 2 points")
    xs = np.linspace(0.0, 1.0, grid)
    return [(float(x), evaluate(family(float(x)), params).margin) for x in xs]


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of a threshold search.

    For an interior crossing, ``lower`` does not detect and ``upper`` does;
    ``x_star`` is their midpoint and ``bracket`` the half-width.
    ``x_star is None`` means the criterion never detects on [0, 1].
    """

    family: str
    side: dict
    params: CriterionParams
    x_star: float | None
    bracket: float
    lower: float | None = None
    upper: float | None = None
    multi_crossing: bool = False

    @property
    def detects(self) -> bool:
        return self.x_star is not None

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "side": dict(self.side),
            "params": self.params.to_dict(),
            "x_star": self.x_star,
            "bracket": self.bracket,
            "lower": self.lower,
            "upper": self.upper,
            "multi_crossing": self.multi_crossing,
        }


def detection_threshold(
    family: StateFamily,
    params: CriterionParams,
    tol_x: float = DEFAULT_TOL_X,
    scan: int = DEFAULT_SCAN,
) -> ThresholdResult:
    """Smallest detecting weight, to within ``tol_x``."""
    if tol_x <= 0:
        raise ContractViolation("tol_x must be positive")

    curve = margin_curve(family, params, scan)
    detected = [mg > DETECTION_TOL for _, mg in curve]
    mk = lambda **kw: ThresholdResult(family.name, dict(family.side), params, **kw)

    if not any(detected):
        return mk(x_star=None, bracket=0.0)
    first = detected.index(True)
    multi = not all(detected[first:])
    if first == 0:
        return mk(x_star=0.0, bracket=0.0, lower=None, upper=0.0, multi_crossing=multi)

    lo, hi = curve[first - 1][0], curve[first][0]
    while hi - lo > tol_x:
        mid = 0.5 * (lo + hi)
        if evaluate(family(mid), params).detected:
            hi = mid
        else:
            lo = mid
    return mk(
        x_star=0.5 * (lo + hi),
        bracket=0.5 * (hi - lo),
        lower=lo,
        upper=hi,
        multi_crossing=multi,
    )


# -- paper experiments ----------------------------------------------------

def table1_criteria() -> list[tuple[str, CriterionParams]]:
    return [
        ("vm", preset("vm", 3)),
        ("lm", preset("lm", 3)),
        ("thm2", CriterionParams("thm2", m=1, alphas=(TABLE1_ALPHA,) * 3)),
    ]


def table1_reproduce(tol_x: float = DEFAULT_TOL_X, epsilons=TABLE1_EPSILONS) -> list[ThresholdResult]:
    """Thresholds for the GHZ-perturbation family, row-major over epsilon."""
    out = []
    for eps in epsilons:
        fam = ghz_family(eps)
        for _, params in table1_criteria():
            out.append(detection_threshold(fam, params, tol_x))
    return out


def bipartite_params(d1: int = 2, d2: int = 4) -> list[CriterionParams]:
    """Balanced thm1 parameters (m=1), then the vb and lb presets."""
    alpha = math.sqrt(2 / (d1 * (d1 - 1)))
    beta = math.sqrt(2 / (d2 * (d2 - 1)))
    return [CriterionParams("thm1", m=1, alpha=alpha, beta=beta), preset("vb"), preset("lb")]


def bipartite_example_thresholds(b: float, tol_x: float = DEFAULT_TOL_X) -> list[ThresholdResult]:
    fam = horodecki_family(b)
    return [detection_threshold(fam, p, tol_x) for p in bipartite_params()]


@dataclass(frozen=True)
class BScanRow:
    b: float
    thresholds: tuple[float | None, float | None, float | None]

    @property
    def ordered(self) -> bool:
        """thm1 threshold no larger than the vb and lb ones."""
        t1, tvb, tlb = (math.inf if t is None else t for t in self.thresholds)
        return t1 <= tvb and t1 <= tlb

    def distance(self, target) -> float:
        return max(abs((math.inf if t is None else t) - g) for t, g in zip(self.thresholds, target))


def bipartite_b_scan(bs, tol_x: float = DEFAULT_TOL_X) -> list[BScanRow]:
    rows = []
    for b in bs:
        res = bipartite_example_thresholds(float(b), tol_x)
        rows.append(BScanRow(float(b), tuple(r.x_star for r in res)))
    return rows


def default_b_grid() -> np.ndarray:
    return np.round(np.arange(5, 96) / 100, 2)


# -- output ----------------------------------------------------------------

def _fmt(x: float | None) -> str:
    return "never" if x is None else f"{x:.4f}"


def format_table1(results: list[ThresholdResult]) -> str:
    names = [n for n, _ in table1_criteria()]
    lines = [f"{'epsilon':>10}  " + "  ".join(f"{n:>8}" for n in names)]
    for i in range(0, len(results), len(names)):
        row = results[i : i + len(names)]
        eps = row[0].side["epsilon"]
        lines.append(f"{eps:>10g}  " + "  ".join(f"{_fmt(r.x_star):>8}" for r in row))
    return "\n".join(lines)


def thresholds_csv(results: list[ThresholdResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["epsilon", "criterion", "x_star", "bracket"])
    for r in results:
        w.writerow([
            repr(r.side.get("epsilon", "")),
            r.params.criterion,
            "" if r.x_star is None else repr(r.x_star),
            repr(r.bracket),
        ])
    return buf.getvalue()
