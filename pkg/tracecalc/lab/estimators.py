"""Monte Carlo estimators over Brownian endpoints."""

from __future__ import annotations

from typing import Any, Callable

import numpy as np
from loguru import logger

from tracecalc.algebra.evaluate import evaluate_matrix, evaluate_scalar, normalized_trace
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.lab.brownian import sample_bm
from tracecalc.lab.types import BrownianConfig, SampleStats

Observable = TracePolynomial[Any] | Callable[[np.ndarray], np.ndarray]


def trace_power(k: int) -> Callable[[np.ndarray], np.ndarray]:
    """Z -> tr(Z^k) on a batch."""

    def observable(Z: np.ndarray) -> np.ndarray:
        return normalized_trace(np.linalg.matrix_power(Z, k))

    observable.__name__ = f"tr(Z^{k})"
    return observable


def trace_deviation(k: int, target: complex = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Z -> |tr(Z^k) - target|^2."""
    power = trace_power(k)

    def observable(Z: np.ndarray) -> np.ndarray:
        return np.abs(power(Z) - target) ** 2

    observable.__name__ = f"|tr(Z^{k}) - {target}|^2"
    return observable


def _values(observable: Observable, Z: np.ndarray, t: float) -> np.ndarray:
    if isinstance(observable, TracePolynomial):
        return evaluate_scalar(observable, Z, t)
    return np.asarray(observable(Z))


def mc_estimate(cfg: BrownianConfig, observable: Observable, name: str | None = None) -> SampleStats:
    """Sample mean and variance of an observable at the endpoints.

    A trace polynomial is reduced to a number with the normalized trace.
    """
    label = name or (str(observable) if isinstance(observable, TracePolynomial)
                     else getattr(observable, "__name__", "observable"))
    values = np.concatenate([_values(observable, Z, cfg.t) for Z in sample_bm(cfg)])
    stats = SampleStats.from_samples(label, values)
    logger.info(
        f"mc {label}: group={cfg.group} N={cfg.N} t={cfg.t} n={stats.n} "
        f"mean={stats.mean:.6g} stderr={stats.stderr:.3g}"
    )
    return stats


def mc_l2_distance(
    f: TracePolynomial[Any], g: TracePolynomial[Any], cfg: BrownianConfig, name: str = "l2_distance"
) -> SampleStats:
    """Estimate int tr((f - g)(Z)* (f - g)(Z)) over the heat kernel measure of cfg.

    On gl this is the squared norm of L^2(mu_t^N; M_N(C)); on u it is the
    unitary-side counterpart.
    """

    def squared(Z: np.ndarray) -> np.ndarray:
        D = evaluate_matrix(f, Z, cfg.t) - evaluate_matrix(g, Z, cfg.t)
        return np.real(normalized_trace(np.conj(np.swapaxes(D, -1, -2)) @ D))

    return mc_estimate(cfg, squared, name)
