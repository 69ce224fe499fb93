"""Bloch decomposition (r, s, T) and the bordered correlation tensor W."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import ContractViolation
from .states import DensityMatrix
from .su_basis import gell_mann_generators

IMAG_TOL = 1e-10


def expectation_tensor(rho: DensityMatrix, operators) -> np.ndarray:
    """``Tr(rho  A1[k1] (x) ... (x) AN[kN])`` for every multi-index.

    ``operators[i]`` is a stack of shape ``(K_i, d_i, d_i)``. The result is
    real; an imaginary residue above ``IMAG_TOL`` means the input or the
    operators were not Hermitian.
    """
    n = rho.nparties
    if len(operators) != n:
        raise ContractViolation(f"need {n} operator stacks, got {len(operators)}")
    e = rho.matrix.reshape(rho.dims * 2)
    for k, ops in enumerate(operators):
        ops = np.asarray(ops)
        if ops.ndim != 3 or ops.shape[1:] != (rho.dims[k],) * 2:
            raise ContractViolation(f"operator stack {k} has shape {ops.shape}")
        # remaining row axes lead, column axes follow them; finished modes are appended
        e = np.tensordot(e, ops, axes=([0, n - k], [2, 1]))
    resid = np.max(np.abs(e.imag)) if e.size else 0.0
    if resid > IMAG_TOL:
        raise ContractViolation(f"expectation values not real (residue {resid:.3e})")
    return np.ascontiguousarray(e.real)


@dataclass(frozen=True)
class BlochDecomposition:
    d1: int
    d2: int
    r: np.ndarray
    s: np.ndarray
    T: np.ndarray

    def to_density(self) -> DensityMatrix:
        """Rebuild rho from its Bloch coefficients."""
        g1 = gell_mann_generators(self.d1).generators
        g2 = gell_mann_generators(self.d2).generators
        i1, i2 = np.eye(self.d1), np.eye(self.d2)
        m = np.kron(i1, i2).astype(complex)
        m += np.kron(np.tensordot(self.r, g1, axes=1), i2)
        m += np.kron(i1, np.tensordot(self.s, g2, axes=1))
        # sum_ij t_ij g1[i] (x) g2[j]
        a, b = self.d1, self.d2
        corr = np.einsum("ij,ipq,jrs->prqs", self.T, g1, g2).reshape(a * b, a * b)
        m += corr
        return DensityMatrix((a, b), m / (a * b))

    def to_dict(self) -> dict:
        return {
            "dims": [self.d1, self.d2],
            "r": self.r.tolist(),
            "s": self.s.tolist(),
            "T": self.T.tolist(),
        }


def bipartite_decomposition(rho: DensityMatrix) -> BlochDecomposition:
    if rho.nparties != 2:
        raise ContractViolation(f"bipartite decomposition needs N=2, got dims {rho.dims}")
    d1, d2 = rho.dims
    stacks = [
        np.concatenate([np.eye(d)[None].astype(complex), gell_mann_generators(d).generators])
        for d in (d1, d2)
    ]
    e = expectation_tensor(rho, stacks)
    return BlochDecomposition(
        d1,
        d2,
        r=d1 / 2 * e[1:, 0],
        s=d2 / 2 * e[0, 1:],
        T=d1 * d2 / 4 * e[1:, 1:],
    )


def delta_operator(d: int, k: int, m: int, alpha: float) -> np.ndarray:
    """Operator at 1-based position ``k`` of the bordered list for one mode.

    The first ``m`` positions hold ``(2 alpha / d) I``; the rest are the
    Gell-Mann generators in order.
    """
    if not 1 <= k <= d * d + m - 1:
        raise ContractViolation(f"index {k} outside 1..{d * d + m - 1}")
    if k <= m:
        return (2.0 * alpha / d) * np.eye(d, dtype=complex)
    return np.array(gell_mann_generators(d).generators[k - m - 1])


def bordered_stack(d: int, m: int, alpha: float) -> np.ndarray:
    border = np.broadcast_to((2.0 * alpha / d) * np.eye(d, dtype=complex), (m, d, d))
    return np.concatenate([border, gell_mann_generators(d).generators])


@dataclass(frozen=True)
class CorrelationTensor:
    """Bordered correlation tensor; mode ``i`` has ``d_i**2 + m - 1`` entries."""

    dims: tuple[int, ...]
    m: int
    alphas: tuple[float, ...]
    data: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape


def generalized_tensor(rho: DensityMatrix, m: int, alphas) -> CorrelationTensor:
    alphas = tuple(float(a) for a in alphas)
    if len(alphas) != rho.nparties:
        raise ContractViolation(f"need {rho.nparties} alphas, got {len(alphas)}")
    if any(a < 0 for a in alphas):
        raise ContractViolation("alphas must be nonnegative")
    if int(m) != m or m < 0:
        raise ContractViolation(f"border width must be a nonnegative integer, got {m}")
    m = int(m)
    stacks = [bordered_stack(d, m, a) for d, a in zip(rho.dims, alphas)]
    scale = math.prod(rho.dims) / 2 ** rho.nparties
    data = scale * expectation_tensor(rho, stacks)
    data.flags.writeable = False
    return CorrelationTensor(rho.dims, m, alphas, data)
