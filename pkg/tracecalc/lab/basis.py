"""Orthonormal bases of u(N) and gl(N; C) for <X, Y>_N = N Re Trace(X* Y)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from tracecalc.lab.types import GROUPS


def un_inner(X: np.ndarray, Y: np.ndarray) -> float:
    """<X, Y>_N = N Re Trace(X* Y)."""
    N = X.shape[-1]
    return float(N * np.real(np.trace(X.conj().T @ Y)))


@dataclass(frozen=True)
class OrthonormalBasis:
    group: str
    N: int
    matrices: np.ndarray  # (dim, N, N)

    def __len__(self) -> int:
        return self.matrices.shape[0]

    def gram(self) -> np.ndarray:
        flat = self.matrices.reshape(len(self), -1)
        return self.N * np.real(flat.conj() @ flat.T)


def _un_basis(N: int) -> np.ndarray:
    mats = []
    for j in range(N):
        X = np.zeros((N, N), dtype=complex)
        X[j, j] = 1j / np.sqrt(N)
        mats.append(X)
    scale = 1 / np.sqrt(2 * N)
    for j in range(N):
        for k in range(j + 1, N):
            A = np.zeros((N, N), dtype=complex)
            A[j, k], A[k, j] = scale, -scale
            S = np.zeros((N, N), dtype=complex)
            S[j, k] = S[k, j] = 1j * scale
            mats.extend([A, S])
    return np.array(mats)


@lru_cache(maxsize=64)
def onb(group: str, N: int) -> OrthonormalBasis:
    """u(N): N^2 skew-Hermitian matrices; gl(N; C) adds i times each of them."""
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    mats = _un_basis(N)
    if group == "gl":
        mats = np.concatenate([mats, 1j * mats])
    mats.setflags(write=False)
    return OrthonormalBasis(group, N, mats)
