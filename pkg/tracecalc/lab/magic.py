"""Residuals of the four orthonormal-basis summation identities on u(N)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tracecalc.algebra.evaluate import normalized_trace
from tracecalc.errors import DimensionMismatchError
from tracecalc.lab.basis import onb


@dataclass(frozen=True)
class MagicResiduals:
    square_sum: float  # |sum X_j^2 + I|
    sandwich: float  # |sum X_j A X_j + tr(A) I|
    trace_weighted: float  # |sum tr(X_j A) X_j + A/N^2|
    trace_pair: float  # |sum tr(X_j A) tr(X_j B) + tr(AB)/N^2|

    def as_dict(self) -> dict[str, float]:
        return {
            "square_sum": self.square_sum,
            "sandwich": self.sandwich,
            "trace_weighted": self.trace_weighted,
            "trace_pair": self.trace_pair,
        }

    @property
    def worst(self) -> float:
        return max(self.as_dict().values())


def verify_magic(N: int, A: np.ndarray, B: np.ndarray) -> MagicResiduals:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != (N, N) or B.shape != (N, N):
        raise DimensionMismatchError(f"A and B must be {N}x{N}, got {A.shape} and {B.shape}")
    X = onb("u", N).matrices
    eye = np.eye(N, dtype=complex)
    trA = normalized_trace(X @ A)
    trB = normalized_trace(X @ B)
    return MagicResiduals(
        square_sum=float(np.linalg.norm(np.sum(X @ X, axis=0) + eye)),
        sandwich=float(np.linalg.norm(np.sum(X @ A @ X, axis=0) + normalized_trace(A) * eye)),
        trace_weighted=float(
            np.linalg.norm(np.tensordot(trA, X, axes=(0, 0)) + A / N**2)
        ),
        trace_pair=float(abs(np.sum(trA * trB) + normalized_trace(A @ B) / N**2)),
    )
