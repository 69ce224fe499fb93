"""Dense matrix primitives shared by the Bloch-side computations.

Complex arithmetic stays with density matrices and operators; every norm
target downstream is a real matrix.
"""
from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10


class ContractViolation(ValueError):
    """An input broke an operation's precondition."""


class NumericalFailure(ArithmeticError):
    """A decomposition failed to converge or produced non-finite output."""


def as_matrix(a, dtype=None) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D array, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=dtype)
    if m.ndim != 2:
        raise ContractViolation(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def singular_values(m) -> np.ndarray:
    """Singular values of a real matrix, descending.

    Nothing is truncated: tiny values are returned as computed so that
    trace norms include them.
    """
    m = as_matrix(m, dtype=float)
    if m.size == 0:
        return np.zeros(0)
    try:
        sv = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return sv


def trace_norm(m) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(m)))


def spectral_norm(m) -> float:
    """Largest singular value (0 for an empty matrix)."""
    sv = singular_values(m)
    return float(sv[0]) if sv.size else 0.0


def hermiticity_deviation(m) -> float:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return float("inf")
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix.

    Raises ContractViolation when ``m`` is not square or deviates from its
    conjugate transpose by more than ``tol`` in any entry.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ContractViolation(f"matrix is not square: {m.shape}")
    dev = hermiticity_deviation(m)
    if dev > tol:
        raise ContractViolation(f"matrix is not Hermitian (deviation {dev:.3e})")
    try:
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver did not converge: {exc}") from exc
