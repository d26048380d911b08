"""Finite-difference Laplacian on U(N), the numerical check of D_N."""

from __future__ import annotations

from typing import Any

import numpy as np
from scipy.linalg import expm

from tracecalc.algebra.evaluate import evaluate_matrix
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.errors import DimensionMismatchError
from tracecalc.lab.basis import onb
from tracecalc.operators.intertwining import apply_DN

MIN_STEP = 1e-5
MAX_STEP = 1e-2
ROUNDING_FLOOR = 1e-9


def laplacian_fd(p: TracePolynomial[Any], U: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """sum_j [p_N(U e^{hX_j}) - 2 p_N(U) + p_N(U e^{-hX_j})] / h^2."""
    if not MIN_STEP <= h <= MAX_STEP:
        raise ValueError(f"step must lie in [{MIN_STEP}, {MAX_STEP}], got {h}")
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionMismatchError(f"square matrix expected, got shape {U.shape}")
    X = onb("u", U.shape[0]).matrices
    forward = expm(h * X)
    # e^{-hX} is the adjoint of e^{hX} for skew-Hermitian X.
    backward = np.conj(np.swapaxes(forward, -1, -2))
    plus = evaluate_matrix(p, U @ forward)
    minus = evaluate_matrix(p, U @ backward)
    center = evaluate_matrix(p, U)
    return np.sum(plus + minus, axis=0) / h**2 - 2 * len(X) * center / h**2


def laplacian_exact(p: TracePolynomial[Any], U: np.ndarray) -> np.ndarray:
    """(D_N p)_N evaluated at U."""
    return evaluate_matrix(apply_DN(p, U.shape[-1]), U)


def richardson(fd_h: np.ndarray, fd_h2: np.ndarray) -> np.ndarray:
    """Extrapolate a second-order difference from steps h and h/2."""
    return (4 * fd_h2 - fd_h) / 3


def relative_error(approx: np.ndarray, exact: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(exact)), 1.0)
    return float(np.linalg.norm(approx - exact)) / scale


def convergence_ratio(p: TracePolynomial[Any], U: np.ndarray, h: float) -> float | None:
    """err(h) / err(h/2) against (D_N p)_N, about 4 for the centered difference.

    None when err(h/2) is already at the rounding floor.
    """
    exact = laplacian_exact(p, U)
    coarse = relative_error(laplacian_fd(p, U, h), exact)
    fine = relative_error(laplacian_fd(p, U, h / 2), exact)
    if fine < ROUNDING_FLOOR:
        return None
    return coarse / fine
