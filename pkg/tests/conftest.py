import itertools

import numpy as np
import pytest

from blochsep.states import DensityMatrix

PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def bell_rho():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return DensityMatrix((2, 2), np.outer(v, v))


def pt_by_loops(m, dims, k):
    """Partial transpose of factor k by explicit index relabelling."""
    D = m.shape[0]
    out = np.zeros_like(m)
    idx = list(itertools.product(*[range(d) for d in dims]))
    flat = {t: n for n, t in enumerate(idx)}
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            ja, jb = list(ia), list(ib)
            ja[k], jb[k] = ib[k], ia[k]
            out[flat[tuple(ja)], flat[tuple(jb)]] = m[a, b]
    assert out.shape == (D, D)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one pass/fail line for the acceptance summary."""

    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
