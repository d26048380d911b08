"""Finite-N heat operator e^{t D_N/2} by block matrix exponentials."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Any

import numpy as np
from loguru import logger
from scipy.linalg import expm

from tracecalc.algebra.monomial import grade_basis, v
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import COMPLEX, RATIONAL
from tracecalc.errors import BlockSizeError, NonScalarError, RingMismatchError
from tracecalc.operators.matrix import coordinates, from_coordinates, operator_matrix

DEFAULT_BLOCK_CAP = 300


@lru_cache(maxsize=128)
def dn_block(k: int, N: int) -> np.ndarray:
    """Float matrix of D_N on grade k (read-only, shared)."""
    arr = operator_matrix("D_N", k, N).to_numpy()
    arr.setflags(write=False)
    return arr


def check_block(k: int, block_cap: int = DEFAULT_BLOCK_CAP) -> int:
    size = len(grade_basis(k))
    if size > block_cap:
        raise BlockSizeError(
            f"grade {k} block has dimension {size}, above the cap of {block_cap}"
        )
    return size


def heat_finite_N(
    p: TracePolynomial[Any], t: float, N: int, block_cap: int = DEFAULT_BLOCK_CAP
) -> TracePolynomial[complex]:
    """e^{t D_N/2} p with double-precision coefficients.

    Each grade is exponentiated on its own block with scipy's Pade
    scaling-and-squaring expm.
    """
    if p.ring not in (RATIONAL, COMPLEX):
        raise RingMismatchError(f"numeric coefficients required, got ring {p.ring.name}")
    t = float(t)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    out = TracePolynomial.zero(COMPLEX)
    for k, component in p.components().items():
        size = check_block(k, block_cap)
        coords = np.array(
            [p.ring.to_complex(c) for c in coordinates(component, k)], dtype=complex
        )
        if t == 0:
            image = coords
        else:
            image = expm((t / 2) * dn_block(k, N)) @ coords
        logger.debug(f"heat_finite_N: grade {k} block {size}x{size}, N={N}, t={t}")
        out = out + from_coordinates(list(image), k, COMPLEX)
    return out


def expect_finite(p: TracePolynomial[Any], t: float, N: int, block_cap: int = DEFAULT_BLOCK_CAP) -> complex:
    """E[p_N] under the heat kernel measure at time t: the transform evaluated at u = v = 1."""
    if not p.is_scalar:
        raise NonScalarError(f"expectation needs a scalar trace polynomial, got {p}")
    value = heat_finite_N(p, t, N, block_cap)
    return complex(sum(c for _, c in value))


def variance_finite(k: int, t: float, N: int, block_cap: int = DEFAULT_BLOCK_CAP) -> float:
    """E[tr(U^k)^2] - E[tr(U^k)]^2, exact up to rounding.

    Every D_N matrix is real, so the holomorphic variance is real.
    """
    square = TracePolynomial.monomial(v(k, 2), 1)
    single = TracePolynomial.monomial(v(k), 1)
    mean = expect_finite(single, t, N, block_cap)
    return (expect_finite(square, t, N, block_cap) - mean * mean).real


def u_squared_closed_form(t: float, N: int) -> tuple[float, float]:
    """Coefficients of u^2 and u*v1 in e^{t D_N/2} u^2: e^{-t} cosh(t/N) and -e^{-t} N sinh(t/N)."""
    decay = math.exp(-t)
    return decay * math.cosh(t / N), -decay * N * math.sinh(t / N)
