"""Exit criteria for the package, one test per criterion.

Each test records a single PASS/FAIL line that is printed in the pytest
terminal summary.
"""
import itertools
import math
import time

import numpy as np
import pytest

from blochsep import detect, states
from blochsep.bloch import bipartite_decomposition
from blochsep.criteria import (
    DETECTION_TOL,
    CriterionParams,
    build_s_matrix,
    evaluate,
    ppt_check,
    proposition1_condition,
    theorem1_check,
    theorem2_check,
)
from blochsep.numerics import trace_norm
from blochsep.states import maximally_mixed, random_density, random_separable

from conftest import bell_rho

TABLE1 = {
    0.0: (0.3536, 0.4118, 0.3307),
    1e-5: (0.3536, 0.4118, 0.3307),
    0.1: (0.3424, 0.4118, 0.3281),
    1.0: (0.3274, 0.4256, 0.3243),
}
PAPER_TRIPLE = (0.2235, 0.2293, 0.2841)
GRID = (0.0, 0.5, 1.0)
BORDERS = (0, 1, 3)


def test_ac1_table1(verdict):
    t0 = time.perf_counter()
    results = detect.table1_reproduce(tol_x=1e-5)
    elapsed = time.perf_counter() - t0
    got = np.array([r.x_star for r in results]).reshape(4, 3)
    want = np.array([TABLE1[e] for e in detect.TABLE1_EPSILONS])
    err = np.max(np.abs(got - want))
    ok = err <= 5e-4 and elapsed < 60
    verdict("AC1 Table 1 thresholds within 5e-4, under 60 s", ok, f"max err {err:.1e}, {elapsed:.1f} s")
    assert err <= 5e-4, f"\n{got}\nvs\n{want}"
    assert elapsed < 60


def test_ac2_bipartite_example(verdict):
    rows = detect.bipartite_b_scan(detect.default_b_grid(), tol_x=1e-5)
    assert len(rows) == 91
    bad = [r.b for r in rows if not r.ordered]
    best = min(rows, key=lambda r: r.distance(PAPER_TRIPLE))
    dist = best.distance(PAPER_TRIPLE)
    finding = (
        f"closest b={best.b:.2f} gives "
        + "/".join(f"{t:.4f}" for t in best.thresholds)
        + f", max deviation {dist:.1e}, triple {'matched' if dist <= 2e-3 else 'not matched'}"
    )
    verdict("AC2 thm1 <= vb and thm1 <= lb on b = 0.05..0.95", not bad, finding)
    assert not bad, f"ordering fails at b = {bad}"


def _soundness_params(nparties):
    out = [CriterionParams(c) for c in ("ppt",)]
    if nparties == 2:
        out += [CriterionParams(c) for c in ("vb", "lb", "ccnr")]
        for a, b, m in itertools.product(GRID, GRID, BORDERS):
            out.append(CriterionParams("thm1", m=m, alpha=a, beta=b))
            out.append(CriterionParams("thm2", m=m, alphas=(b, a)))
    else:
        for alphas in itertools.product(GRID, repeat=nparties):
            for m in BORDERS:
                out.append(CriterionParams("thm2", m=m, alphas=alphas))
    out += [CriterionParams(c) for c in ("vm", "hm", "lm")]
    return out


@pytest.mark.parametrize(
    "dims,count", [((2, 2), 1000), ((2, 4), 1000), ((3, 3), 1000), ((2, 2, 2), 500)],
    ids=["2x2", "2x4", "3x3", "2x2x2"],
)
def test_ac3_soundness(dims, count, verdict):
    params = _soundness_params(len(dims))
    rng = np.random.default_rng(sum(dims) * 1000 + len(dims))
    D = math.prod(dims)
    worst = -math.inf
    detections = []
    for i in range(count):
        k = int(rng.integers(1, 2 * D + 1))
        rho = random_separable(dims, k, seed=int(rng.integers(2**32)))
        for p in params:
            rep = evaluate(rho, p)
            worst = max(worst, rep.margin)
            if rep.margin > DETECTION_TOL:
                detections.append((i, p))
    dims_s = "x".join(map(str, dims))
    verdict(
        f"AC3 soundness {dims_s}: {count} separable states x {len(params)} checks, zero detections",
        not detections,
        f"largest margin {worst:.2e}",
    )
    assert not detections, detections[:5]
    assert worst <= 1e-9


def _prop1_states(dims, n, rng):
    D = math.prod(dims)
    for i in range(n):
        pure = random_density(dims, rank=1, seed=int(rng.integers(2**32)))
        noise = random_density(dims, rank=int(rng.integers(1, D + 1)), seed=int(rng.integers(2**32)))
        yield states.mix(float(rng.uniform(0, 1)), pure, noise)


@pytest.mark.parametrize("dims", [(2, 2), (2, 4)], ids=["2x2", "2x4"])
def test_ac4_proposition1(dims, verdict):
    d1, d2 = dims
    rng = np.random.default_rng(4 + d2)
    failures = []
    growth_worst = math.inf
    detections = 0
    for rho in _prop1_states(dims, 200, rng):
        alpha = float(rng.uniform(0.05, 2.0))
        beta = alpha * math.sqrt(d1 * (d1 - 1)) / math.sqrt(d2 * (d2 - 1))
        assert proposition1_condition(alpha, beta, d1, d2)
        dec = bipartite_decomposition(rho)
        norms = [trace_norm(build_s_matrix(dec, alpha, beta, m)) for m in range(6)]
        found = [theorem1_check(rho, alpha, beta, m).detected for m in range(6)]
        detections += found[0]
        for m in range(5):
            if found[m] and not found[m + 1]:
                failures.append(("monotone", m))
            slack = norms[m + 1] - alpha * beta - norms[m]
            growth_worst = min(growth_worst, slack)
            if slack < -1e-9:
                failures.append(("growth", m, slack))
    verdict(
        f"AC4 Proposition 1 on 200 states {d1}x{d2}: detection monotone in m, border growth holds",
        not failures,
        f"{detections} detected at m=0, min growth slack {growth_worst:.1e}",
    )
    assert not failures, failures[:5]
    assert detections > 0


def test_ac5_analytic_fixtures(verdict):
    bell = bell_rho()
    vb = evaluate(bell, CriterionParams("vb"))
    ccnr = evaluate(bell, CriterionParams("ccnr"))
    ppt = evaluate(bell, CriterionParams("ppt"))
    checks = [
        abs(vb.value - 3) <= 1e-10,
        abs(vb.bound - 1) <= 1e-10,
        abs(ccnr.value - 2) <= 1e-10,
        abs(ppt.value - 0.5) <= 1e-10,
    ]
    worst = 0.0
    for dims in [(2, 2), (2, 4), (3, 3)]:
        dec = bipartite_decomposition(maximally_mixed(dims))
        for a, b, m in itertools.product((0.0, 0.3, 1.0, 2.5), (0.0, 0.7, 1.0), range(5)):
            worst = max(worst, abs(trace_norm(build_s_matrix(dec, a, b, m)) - m * a * b))
    checks.append(worst <= 1e-10)
    verdict("AC5 Bell vb 3 vs 1, ccnr 2, ppt 1/2; mixed S-norm = m*alpha*beta", all(checks))
    assert all(checks), checks


def test_ac6_round_trips(tmp_path, verdict):
    rng = np.random.default_rng(6)
    worst = 0.0
    for i in range(100):
        dims = [(2, 2), (2, 3), (3, 2), (3, 3)][i % 4]
        rho = random_density(dims, rank=int(rng.integers(1, math.prod(dims) + 1)), seed=i)
        back = bipartite_decomposition(rho).to_density()
        worst = max(worst, float(np.max(np.abs(back.matrix - rho.matrix))))
    file_worst = 0.0
    for i in range(20):
        rho = random_density((2, 4), seed=100 + i)
        p = tmp_path / f"rho{i}.json"
        states.save(rho, p)
        file_worst = max(file_worst, float(np.max(np.abs(states.load(p).matrix - rho.matrix))))
    ok = worst <= 1e-10 and file_worst <= 1e-15
    verdict("AC6 Bloch reconstruction 1e-10, file round trip 1e-15", ok,
            f"reconstruction {worst:.1e}, file {file_worst:.1e}")
    assert worst <= 1e-10
    assert file_worst <= 1e-15


def test_ac7_bipartite_multipartite_consistency(verdict):
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(100):
        rho = random_density((2, 4), rank=int(rng.integers(1, 9)), seed=700 + i)
        alpha, beta = rng.uniform(0, 2, 2)
        m = int(rng.integers(0, 5))
        t1 = theorem1_check(rho, alpha, beta, m)
        t2 = theorem2_check(rho, m, (beta, alpha), [0])
        worst = max(worst, abs(t1.value - t2.value), abs(t1.bound - t2.bound))
    verdict("AC7 thm2 at A={1} with (beta, alpha) equals thm1 on 100 2x4 states", worst <= 1e-10,
            f"max diff {worst:.1e}")
    assert worst <= 1e-10


def test_ac8_bound_entangled_is_ppt(verdict):
    worst = math.inf
    for b in detect.default_b_grid():
        rho = states.horodecki_2x4(float(b))
        for k in (0, 1):
            worst = min(worst, states.min_pt_eigenvalue(rho, k))
        assert not ppt_check(rho).detected
    verdict("AC8 horodecki_2x4(b) is PPT on b = 0.05..0.95", worst >= -1e-10, f"min PT eigenvalue {worst:.1e}")
    assert worst >= -1e-10
