"""Generalized Gell-Mann matrices: a traceless Hermitian basis of su(d)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import ContractViolation


@dataclass(frozen=True)
class GeneratorSet:
    """The d**2 - 1 generators for dimension ``dim``, stacked as ``(d*d-1, d, d)``.

    Normalized so that ``Tr(g_i g_j) = 2 delta_ij``.
    """

    dim: int
    generators: np.ndarray

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def __iter__(self):
        return iter(self.generators)


@lru_cache(maxsize=None)
def _build(d: int) -> np.ndarray:
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    out = np.zeros((d * d - 1, d, d), dtype=complex)
    n = 0
    for j, k in pairs:
        out[n, j, k] = out[n, k, j] = 1.0
        n += 1
    for j, k in pairs:
        out[n, j, k] = -1j
        out[n, k, j] = 1j
        n += 1
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out[n] = np.diag(diag) * np.sqrt(2.0 / (l * (l + 1)))
        n += 1
    out.flags.writeable = False
    return out


def gell_mann_generators(d: int) -> GeneratorSet:
    """Generators ordered as symmetric pairs, antisymmetric pairs, then diagonals.

    Pairs ``(j, k)`` with ``j < k`` run lexicographically; the diagonal
    generators are ``sqrt(2/(l(l+1))) diag(1,..,1,-l,0,..)`` for ``l = 1..d-1``.
    For ``d = 2`` this gives the Pauli matrices in x, y, z order.
    """
    if int(d) != d or d < 2:
        raise ContractViolation(f"dimension must be an integer >= 2, got {d}")
    return GeneratorSet(int(d), _build(int(d)))
