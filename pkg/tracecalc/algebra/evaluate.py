"""Evaluation maps: p -> p_N on matrices, and v_j := c_j substitution."""

from __future__ import annotations

from typing import Any, Mapping, Sequence, TypeVar

import numpy as np

from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import ScalarRing
from tracecalc.algebra.univariate import SingleVarPoly
from tracecalc.errors import DimensionMismatchError, MissingSubstitutionError

C = TypeVar("C")


def normalized_trace(a: np.ndarray) -> np.ndarray:
    """tr(A) = Trace(A)/N over the last two axes."""
    return np.trace(a, axis1=-2, axis2=-1) / a.shape[-1]


def _check_square(U: np.ndarray) -> None:
    if U.ndim < 2 or U.shape[-1] != U.shape[-2]:
        raise DimensionMismatchError(f"square matrix expected, got shape {U.shape}")


def matrix_powers(U: np.ndarray, top: int) -> list[np.ndarray]:
    """[I, U, U^2, ..., U^top], batched over leading axes."""
    _check_square(U)
    eye = np.broadcast_to(np.eye(U.shape[-1], dtype=complex), U.shape)
    powers = [np.array(eye)]
    for _ in range(top):
        powers.append(powers[-1] @ U)
    return powers


def evaluate_matrix(
    p: TracePolynomial[Any], U: np.ndarray, t: Any = None
) -> np.ndarray:
    """p(U, tr U, tr U^2, ...) with the normalized trace.

    ``U`` may carry leading batch axes (..., N, N). Coefficients are converted
    with the ring's ``to_complex``, so t-dependent rings need ``t``.
    """
    U = np.asarray(U, dtype=complex)
    top = max(max((m.u_power for m in p.terms), default=0), p.max_trace_power())
    powers = matrix_powers(U, top)
    traces = {j: normalized_trace(powers[j]) for j in range(1, top + 1)}
    out = np.zeros(U.shape, dtype=complex)
    for m, c in p:
        scalar = np.full(U.shape[:-2], p.ring.to_complex(c, t), dtype=complex)
        for power, mult in m.traces:
            scalar = scalar * traces[power] ** mult
        out += scalar[..., None, None] * powers[m.u_power]
    return out


def evaluate_scalar(p: TracePolynomial[Any], U: np.ndarray, t: Any = None) -> np.ndarray:
    """Value of a scalar trace polynomial as a (batched) complex number."""
    return normalized_trace(evaluate_matrix(p, U, t))


def trace_eval(
    p: TracePolynomial[Any],
    c: Mapping[int, Any] | Sequence[Any],
    ring: ScalarRing[C] | None = None,
) -> SingleVarPoly[C]:
    """Substitute v_j := c_j and leave u free.

    ``c`` is either a mapping ``{j: value}`` or a sequence ``(c_1, c_2, ...)``.
    Coefficients of ``p`` and the substituted values are coerced into
    ``ring`` (default: p's ring).
    """
    target: ScalarRing[Any] = ring or p.ring
    values = c if isinstance(c, Mapping) else {j + 1: x for j, x in enumerate(c)}
    coeffs: dict[int, Any] = {}
    for m, coeff in p:
        acc = target.coerce(coeff)
        for power, mult in m.traces:
            if power not in values:
                raise MissingSubstitutionError(f"no value supplied for v{power}")
            value = target.coerce(values[power])
            for _ in range(mult):
                acc = acc * value
        coeffs[m.u_power] = coeffs[m.u_power] + acc if m.u_power in coeffs else acc
    top = max(coeffs, default=-1)
    return SingleVarPoly((coeffs.get(j, target.zero) for j in range(top + 1)), target, "u")


def pi_zero(p: TracePolynomial[C], ring: ScalarRing[Any] | None = None) -> SingleVarPoly[Any]:
    """pi_0: every v_j evaluated to 1."""
    target: ScalarRing[Any] = ring or p.ring
    return trace_eval(p, {j: target.one for j in range(1, p.max_trace_power() + 1)}, target)

