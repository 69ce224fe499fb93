"""Density matrices, the named test states, and the PPT/CCNR transforms.

Composite bases are ordered lexicographically with the first subsystem
slowest (plain Kronecker order). Subsystem indices are 0-based.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .numerics import (
    HERMITIAN_TOL,
    ContractViolation,
    as_matrix,
    hermiticity_deviation,
    hermitian_eigenvalues,
)

TRACE_TOL = 1e-10
PSD_TOL = -1e-9
NORM_TOL = 1e-12


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ContractViolation(f"invalid subsystem dimensions {dims}")
    return dims


@dataclass(frozen=True)
class DensityMatrix:
    """A state operator on ``C^d1 (x) ... (x) C^dN``.

    Construction only checks shape and finiteness; physical validity is
    the job of :func:`validate`.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        m = np.array(as_matrix(self.matrix), dtype=complex)
        D = math.prod(dims)
        if m.shape != (D, D):
            raise ContractViolation(f"matrix shape {m.shape} does not match dims {dims}")
        m.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def nparties(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        v = np.array(self.amplitudes, dtype=complex).ravel()
        if v.size != math.prod(dims):
            raise ContractViolation(f"{v.size} amplitudes do not match dims {dims}")
        if not np.all(np.isfinite(v)):
            raise ContractViolation("amplitudes must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", v)


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_deviation: float
    trace_deviation: float
    min_eigenvalue: float

    @property
    def passed(self) -> bool:
        return (
            self.hermiticity_deviation <= HERMITIAN_TOL
            and self.trace_deviation <= TRACE_TOL
            and self.min_eigenvalue >= PSD_TOL
        )

    def problems(self) -> list[str]:
        out = []
        if self.hermiticity_deviation > HERMITIAN_TOL:
            out.append(f"not Hermitian (deviation {self.hermiticity_deviation:.3e})")
        if self.trace_deviation > TRACE_TOL:
            out.append(f"trace differs from 1 by {self.trace_deviation:.3e}")
        if self.min_eigenvalue < PSD_TOL:
            out.append(f"negative eigenvalue (min eigenvalue {self.min_eigenvalue:.6g})")
        return out


def validate(rho: DensityMatrix) -> ValidationReport:
    m = rho.matrix
    herm = hermiticity_deviation(m)
    tr = abs(np.trace(m) - 1.0)
    # eigenvalues of the Hermitian part, so a report is produced even for bad input
    evals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return ValidationReport(herm, float(tr), float(evals[0]))


def density_from_pure(psi: PureState) -> DensityMatrix:
    v = psi.amplitudes
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise ContractViolation(f"state is not normalized (norm {norm!r})")
    return DensityMatrix(psi.dims, np.outer(v, v.conj()))


def maximally_mixed(dims) -> DensityMatrix:
    dims = _check_dims(dims)
    D = math.prod(dims)
    return DensityMatrix(dims, np.eye(D) / D)


def mix(x: float, a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """``x a + (1 - x) b``."""
    if a.dims != b.dims:
        raise ContractViolation(f"cannot mix states with dims {a.dims} and {b.dims}")
    if not 0.0 <= x <= 1.0:
        raise ContractViolation(f"mixing weight must lie in [0, 1], got {x}")
    return DensityMatrix(a.dims, x * a.matrix + (1.0 - x) * b.matrix)


def bell_pair(dims=(2, 2)) -> PureState:
    """``(|00> + |11>)/sqrt(2)``, optionally embedded in larger local spaces."""
    dims = _check_dims(dims)
    if len(dims) != 2 or min(dims) < 2:
        raise ContractViolation(f"Bell pair needs two subsystems of dim >= 2, got {dims}")
    v = np.zeros(math.prod(dims), dtype=complex)
    v[0] = v[dims[1] + 1] = 1 / np.sqrt(2)
    return PureState(dims, v)


def horodecki_2x4(b: float) -> DensityMatrix:
    """Horodecki's PPT entangled state on C^2 (x) C^4, 0 < b < 1."""
    if not 0.0 < b < 1.0:
        raise ContractViolation(f"b must lie in (0, 1), got {b}")
    m = np.zeros((8, 8))
    for i in range(3):
        m[i, i] = m[i, i + 5] = m[i + 5, i] = m[i + 5, i + 5] = b
    m[3, 3] = b
    m[4, 4] = m[7, 7] = (1 + b) / 2
    m[4, 7] = m[7, 4] = np.sqrt(1 - b * b) / 2
    return DensityMatrix((2, 4), m / (7 * b + 1))


def ghz_perturbed(eps: float) -> PureState:
    """``(|000> + eps|110> + |111>) / sqrt(2 + eps**2)``."""
    g = np.sqrt(2.0 + eps * eps)
    v = np.zeros(8, dtype=complex)
    v[0b000] = 1 / g
    v[0b110] = eps / g
    v[0b111] = 1 / g
    return PureState((2, 2, 2), v)


def _haar_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_separable(dims, k_terms: int, seed=None) -> DensityMatrix:
    """Mixture of ``k_terms`` Haar-random pure product states.

    Weights are drawn uniformly from the probability simplex.
    """
    dims = _check_dims(dims)
    if k_terms < 1:
        raise ContractViolation("k_terms must be >= 1")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(k_terms))
    D = math.prod(dims)
    m = np.zeros((D, D), dtype=complex)
    for p in weights:
        v = reduce(np.kron, [_haar_vector(d, rng) for d in dims])
        m += p * np.outer(v, v.conj())
    return DensityMatrix(dims, m)


def random_density(dims, rank: int | None = None, seed=None) -> DensityMatrix:
    """Random state from the induced (Ginibre) measure; rank defaults to full."""
    dims = _check_dims(dims)
    D = math.prod(dims)
    rank = D if rank is None else int(rank)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((D, rank)) + 1j * rng.standard_normal((D, rank))
    m = g @ g.conj().T
    return DensityMatrix(dims, m / np.trace(m).real)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep``."""
    keep = sorted(set(int(k) for k in keep))
    n = rho.nparties
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ContractViolation(f"bad subsystem selection {keep} for {n} parties")
    t = rho.matrix.reshape(rho.dims * 2)
    traced = [i for i in range(n) if i not in keep]
    # trace out from the highest index so axis numbers stay valid
    for count, i in enumerate(sorted(traced, reverse=True)):
        cur = n - count
        t = np.trace(t, axis1=i, axis2=i + cur)
    kd = tuple(rho.dims[k] for k in keep)
    D = math.prod(kd)
    return DensityMatrix(kd, t.reshape(D, D))


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose the indices of one tensor factor only."""
    n = rho.nparties
    if not 0 <= subsystem < n:
        raise ContractViolation(f"subsystem {subsystem} out of range for {n} parties")
    t = rho.matrix.reshape(rho.dims * 2)
    axes = list(range(2 * n))
    axes[subsystem], axes[subsystem + n] = axes[subsystem + n], axes[subsystem]
    return t.transpose(axes).reshape(rho.size, rho.size)


def realign(rho: DensityMatrix) -> np.ndarray:
    """Realigned matrix: entry ``[(i,j), (k,l)] = <i|<k| rho |j>|l>``."""
    if rho.nparties != 2:
        raise ContractViolation(f"realignment needs a bipartite state, got dims {rho.dims}")
    d1, d2 = rho.dims
    t = rho.matrix.reshape(d1, d2, d1, d2)  # [i, k, j, l]
    return t.transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)


def min_pt_eigenvalue(rho: DensityMatrix, subsystem: int) -> float:
    return float(hermitian_eigenvalues(partial_transpose(rho, subsystem))[0])


# -- file format ---------------------------------------------------------

def to_json_dict(rho: DensityMatrix) -> dict:
    m = rho.matrix
    return {
        "dims": list(rho.dims),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def from_json_dict(obj: dict) -> DensityMatrix:
    try:
        dims = obj["dims"]
        arr = np.asarray(obj["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractViolation(f"malformed density-matrix document: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ContractViolation("matrix entries must be [re, im] pairs")
    return DensityMatrix(dims, arr[..., 0] + 1j * arr[..., 1])


def save(rho: DensityMatrix, path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(rho)))


def load(path) -> DensityMatrix:
    """Read a state file and reject it unless it passes :func:`validate`."""
    rho = from_json_dict(json.loads(Path(path).read_text()))
    report = validate(rho)
    if not report.passed:
        raise InvalidState(report, str(path))
    return rho


class InvalidState(ContractViolation):
    def __init__(self, report: ValidationReport, source: str = ""):
        self.report = report
        where = f"{source}: " if source else ""
        super().__init__(where + "; ".join(report.problems()))
