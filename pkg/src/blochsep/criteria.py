"""Trace-norm separability checks on Bloch data, with PPT and CCNR baselines.

Every check returns a :class:`CriterionReport`; a state is certified
entangled when the computed value exceeds the separable bound by more than
``DETECTION_TOL``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from .bloch import BlochDecomposition, CorrelationTensor, bipartite_decomposition, generalized_tensor
from .numerics import ContractViolation, NumericalFailure, trace_norm
from .states import DensityMatrix, min_pt_eigenvalue, realign

DETECTION_TOL = 1e-9

BIPARTITE = ("thm1", "vb", "lb", "ccnr")
MULTIPARTITE = ("thm2", "vm", "hm", "lm")
CRITERIA = ("thm1", "thm2", "vb", "lb", "vm", "hm", "lm", "ppt", "ccnr")


@dataclass(frozen=True)
class CriterionParams:
    """Which criterion to run and with what parameters.

    ``alpha``/``beta`` feed the bipartite check, ``alphas`` the multipartite
    one. ``partition`` is a tuple of 0-based modes forming the row side A;
    ``None`` means "try every bipartition and keep the strongest".
    ``subsystem`` selects the transposed factor for PPT (``None``: all).
    """

    criterion: str
    m: int = 0
    alpha: float = 0.0
    beta: float = 0.0
    alphas: tuple[float, ...] | None = None
    partition: tuple[int, ...] | None = None
    subsystem: int | None = None

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ContractViolation(f"unknown criterion {self.criterion!r}")
        if int(self.m) != self.m or self.m < 0:
            raise ContractViolation(f"m must be a nonnegative integer, got {self.m}")
        if self.alpha < 0 or self.beta < 0:
            raise ContractViolation("alpha and beta must be nonnegative")
        if self.alphas is not None:
            a = tuple(float(x) for x in self.alphas)
            if any(x < 0 for x in a):
                raise ContractViolation("alphas must be nonnegative")
            object.__setattr__(self, "alphas", a)
        if self.partition is not None:
            object.__setattr__(self, "partition", tuple(sorted(int(p) for p in self.partition)))
        object.__setattr__(self, "m", int(self.m))

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("alphas", "partition"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CriterionParams":
        d = dict(d)
        for key in ("alphas", "partition"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        return cls(**d)


def preset(name: str, nparties: int = 2) -> CriterionParams:
    """Parameters pinned by the named prior criteria."""
    if name == "vb":
        return CriterionParams("vb", m=0, alpha=0.0, beta=0.0)
    if name == "lb":
        return CriterionParams("lb", m=1, alpha=1.0, beta=1.0)
    if name in ("vm", "hm"):
        return CriterionParams(name, m=0, alphas=(0.0,) * nparties)
    if name == "lm":
        return CriterionParams("lm", m=1, alphas=(1.0,) * nparties)
    raise ContractViolation(f"{name!r} is not a preset")


@dataclass(frozen=True)
class CriterionReport:
    params: CriterionParams
    value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.value - self.bound

    @property
    def detected(self) -> bool:
        return self.margin > DETECTION_TOL

    def to_dict(self) -> dict:
        def sig(x):
            return float(f"{x:.12g}")

        return {
            "criterion": self.params.criterion,
            "params": self.params.to_dict(),
            "value": sig(self.value),
            "bound": sig(self.bound),
            "margin": sig(self.margin),
            "detected": self.detected,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CriterionReport":
        return cls(CriterionParams.from_dict(d["params"]), d["value"], d["bound"])


# -- bipartite ------------------------------------------------------------

def build_s_matrix(dec: BlochDecomposition, alpha: float, beta: float, m: int) -> np.ndarray:
    """Bordered matrix ``[[ab E_mm, b [s..s]^t], [a [r..r], T]]``; ``m=0`` gives T."""
    if alpha < 0 or beta < 0 or m < 0:
        raise ContractViolation("alpha, beta and m must be nonnegative")
    m = int(m)
    top = np.hstack([np.full((m, m), alpha * beta), beta * np.tile(dec.s, (m, 1))])
    bottom = np.hstack([alpha * np.tile(dec.r[:, None], (1, m)), dec.T])
    return np.vstack([top, bottom])


def theorem1_bound(d1: int, d2: int, alpha: float, beta: float, m: int) -> float:
    return 0.5 * math.sqrt((2 * m * beta**2 + d1 * d1 - d1) * (2 * m * alpha**2 + d2 * d2 - d2))


def theorem1_check(
    rho: DensityMatrix, alpha: float, beta: float, m: int, criterion: str = "thm1"
) -> CriterionReport:
    dec = bipartite_decomposition(rho)
    value = trace_norm(build_s_matrix(dec, alpha, beta, m))
    bound = theorem1_bound(dec.d1, dec.d2, alpha, beta, m)
    return CriterionReport(CriterionParams(criterion, m=m, alpha=alpha, beta=beta), value, bound)


def proposition1_condition(alpha: float, beta: float, d1: int, d2: int) -> bool:
    """Whether (alpha, beta) are balanced so that larger m only strengthens the check."""
    return abs(alpha * math.sqrt(d1 * (d1 - 1)) - beta * math.sqrt(d2 * (d2 - 1))) <= 1e-12


# -- multipartite ---------------------------------------------------------

def _check_partition(n: int, A) -> tuple[int, ...]:
    A = tuple(sorted(set(int(a) for a in A)))
    if not A or len(A) >= n or A[0] < 0 or A[-1] >= n:
        raise ContractViolation(f"partition {A} must be a nonempty proper subset of 0..{n - 1}")
    return A


def matricize(W, A) -> np.ndarray:
    """Flatten a tensor with rows over modes ``A`` and columns over the rest.

    Both sides keep ascending mode order with the leftmost mode slowest.
    Accepts a :class:`CorrelationTensor` or a bare ndarray.
    """
    data = W.data if isinstance(W, CorrelationTensor) else np.asarray(W)
    n = data.ndim
    A = _check_partition(n, A)
    rest = tuple(i for i in range(n) if i not in A)
    rows = math.prod(data.shape[i] for i in A)
    return data.transpose(A + rest).reshape(rows, -1)


def theorem2_bound(dims, alphas, m: int) -> float:
    return math.prod(math.sqrt((2 * m * a * a + d * d - d) / 2) for d, a in zip(dims, alphas))


def all_partitions(n: int) -> list[tuple[int, ...]]:
    """One representative A per {A, complement} pair: 2**(n-1) - 1 of them."""
    out = []
    for size in range(1, n // 2 + 1):
        for A in itertools.combinations(range(n), size):
            if 2 * size == n and 0 not in A:
                continue
            out.append(A)
    return out


def mode_partitions(n: int) -> list[tuple[int, ...]]:
    if n == 2:
        return [(0,)]
    return [(i,) for i in range(n)]


def _thm2_report(W: CorrelationTensor, A, criterion: str) -> CriterionReport:
    value = trace_norm(matricize(W, A))
    bound = theorem2_bound(W.dims, W.alphas, W.m)
    params = CriterionParams(criterion, m=W.m, alphas=W.alphas, partition=tuple(A))
    return CriterionReport(params, value, bound)


def theorem2_check(rho: DensityMatrix, m: int, alphas, A, criterion: str = "thm2") -> CriterionReport:
    A = _check_partition(rho.nparties, A)
    return _thm2_report(generalized_tensor(rho, m, alphas), A, criterion)


def theorem2_best(
    rho: DensityMatrix, m: int, alphas, criterion: str = "thm2", partitions=None
) -> CriterionReport:
    """Evaluate every bipartition and return the report with the largest margin."""
    if rho.nparties < 2:
        raise ContractViolation("need at least two subsystems")
    W = generalized_tensor(rho, m, alphas)
    if partitions is None:
        partitions = all_partitions(rho.nparties)
    reports = [_thm2_report(W, A, criterion) for A in partitions]
    return max(reports, key=lambda r: r.margin)


# -- baselines ------------------------------------------------------------

def ppt_check(rho: DensityMatrix, subsystem: int | None = None) -> CriterionReport:
    """Negative partial-transpose eigenvalue test.

    ``value`` is minus the smallest eigenvalue; with ``subsystem=None`` the
    strongest single-factor transpose is reported.
    """
    subs = range(rho.nparties) if subsystem is None else [subsystem]
    best = None
    for k in subs:
        rep = CriterionReport(CriterionParams("ppt", subsystem=k), -min_pt_eigenvalue(rho, k), 0.0)
        if best is None or rep.margin > best.margin:
            best = rep
    return best


def ccnr_check(rho: DensityMatrix) -> CriterionReport:
    # realigned matrices are complex in general, so this bypasses the real-only numerics helpers
    R = realign(rho)
    try:
        value = float(np.sum(np.linalg.svd(R, compute_uv=False)))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return CriterionReport(CriterionParams("ccnr"), value, 1.0)


# -- dispatch -------------------------------------------------------------

def evaluate(rho: DensityMatrix, params: CriterionParams) -> CriterionReport:
    """Run the criterion described by ``params`` on ``rho``.

    Presets override whatever numeric parameters ``params`` carries.
    """
    c = params.criterion
    n = rho.nparties
    if c in BIPARTITE and n != 2:
        raise ContractViolation(f"criterion {c} needs a bipartite state, got dims {rho.dims}")
    if c == "ppt":
        return ppt_check(rho, params.subsystem)
    if c == "ccnr":
        return ccnr_check(rho)
    if c in ("vb", "lb"):
        p = preset(c)
        return theorem1_check(rho, p.alpha, p.beta, p.m, criterion=c)
    if c == "thm1":
        return theorem1_check(rho, params.alpha, params.beta, params.m)

    if c in ("vm", "hm", "lm"):
        p = preset(c, n)
        partitions = mode_partitions(n) if c == "hm" else None
        if params.partition is not None:
            partitions = [params.partition]
        return theorem2_best(rho, p.m, p.alphas, criterion=c, partitions=partitions)
    alphas = params.alphas if params.alphas is not None else (params.alpha,) * n
    if params.partition is not None:
        return theorem2_check(rho, params.m, alphas, params.partition)
    return theorem2_best(rho, params.m, alphas)
