"""Generating functions of the inverse transform polynomials p_k^{s,t}.

    phi^{s,u}(t, z) = sum_k p_k^{s,t}(u) z^k
    psi^s(t, z)     = sum_k tr(p_k^{s,t}(u)) z^k
    rho(s, z)       = sum_k nu_k(s) z^k

With w(z) = z e^{(s-t)/2 (1+z)/(1-z)}, phi is determined by

    phi^{s,u}(t, w(z)) = (1 - u z e^{(s/2)(1+z)/(1-z)})^{-1} - 1,

which at s = t is explicit. All series here are double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from loguru import logger

from tracecalc.algebra.univariate import SingleVarPoly
from tracecalc.heat.moments import biane_moment, biane_moment_closed_form
from tracecalc.series.formal import FormalSeries

DEFAULT_ORDER = 16
DEFAULT_FD_STEP = 1e-4
DEFAULT_RESIDUAL_FLAG = 1e-6
# Above this order the moments come from the closed form instead of the recursion.
RECURSION_MOMENT_LIMIT = 12

PDEKind = Literal["rho", "psi", "phi"]


def cayley_exponent(a: float, K: int) -> FormalSeries:
    """exp(a (1+z)/(1-z)) = e^a * exp(2a (z + z^2 + ...))."""
    inner = FormalSeries([0.0] + [2 * a] * K, K)
    return inner.exp() * math.exp(a)


def _geometric_in_u(x: FormalSeries) -> FormalSeries:
    """sum_{n=1}^K u^n x^n for x(0) = 0, as a u-polynomial-valued series."""
    K = x.order
    out = np.zeros((K + 1, K + 1), dtype=complex)
    power = FormalSeries.constant(1, K)
    for n in range(1, K + 1):
        power = power * x
        out[:, n] = power.coeffs
    return FormalSeries(out, K)


def _to_polys(series: FormalSeries) -> list[SingleVarPoly[complex]]:
    return [series.coefficient(k) for k in range(1, series.order + 1)]


def _check_domain(s: float, t: float) -> None:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if not (s == t or s > t / 2):
        raise ValueError(f"need s > t/2 or s = t, got s={s}, t={t}")


def phi_tt_series(t: float, K: int = DEFAULT_ORDER) -> FormalSeries:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    x = cayley_exponent(t / 2, K).shift(1)
    return _geometric_in_u(x)


def expand_phi_tt(t: float, K: int = DEFAULT_ORDER) -> list[SingleVarPoly[complex]]:
    """p_1^{t,t}, ..., p_K^{t,t} from the explicit formula."""
    return _to_polys(phi_tt_series(t, K))


def _phi_st(s: float, t: float, K: int) -> FormalSeries:
    rhs = _geometric_in_u(cayley_exponent(s / 2, K).shift(1))
    w = cayley_exponent((s - t) / 2, K).shift(1)
    return rhs.compose(w.revert())


def phi_st_series(s: float, t: float, K: int = DEFAULT_ORDER) -> FormalSeries:
    _check_domain(s, t)
    return _phi_st(s, t, K)


def expand_phi_st(s: float, t: float, K: int = DEFAULT_ORDER) -> list[SingleVarPoly[complex]]:
    """p_1^{s,t}, ..., p_K^{s,t} by reverting w(z)."""
    return _to_polys(phi_st_series(s, t, K))


def moments_at(s: float, K: int) -> np.ndarray:
    """[1, nu_1(s), ..., nu_K(s)]."""
    values = [1.0]
    for k in range(1, K + 1):
        nu = biane_moment(k) if k <= RECURSION_MOMENT_LIMIT else biane_moment_closed_form(k)
        values.append(nu.at(s))
    return np.array(values, dtype=complex)


def rho_series(s: float, K: int = DEFAULT_ORDER) -> FormalSeries:
    if s < 0:
        raise ValueError(f"s must be non-negative, got {s}")
    nu = moments_at(s, K)
    nu[0] = 0
    return FormalSeries(nu, K)


def _trace_series(phi: FormalSeries, s: float) -> FormalSeries:
    nu = moments_at(s, phi.coeffs.shape[1] - 1)
    return FormalSeries(phi.coeffs @ nu, phi.order)


def psi_series(s: float, t: float, K: int = DEFAULT_ORDER) -> FormalSeries:
    """Coefficient k is sum_j c_kj nu_j(s) for p_k^{s,t}(u) = sum_j c_kj u^j."""
    return _trace_series(phi_st_series(s, t, K), s)


@dataclass
class ResidualReport:
    """PDE residual through order K-1; reported, never asserted."""

    kind: str
    s: float
    t: float
    order: int
    residual: FormalSeries
    initial_residual: FormalSeries
    flag: float = DEFAULT_RESIDUAL_FLAG
    flagged_orders: list[int] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return self.residual.max_abs()

    @property
    def max_initial_residual(self) -> float:
        return self.initial_residual.max_abs()

    def rows(self) -> list[dict[str, float | int | str]]:
        res = self.residual.order_norms()
        init = self.initial_residual.order_norms()
        return [
            {
                "kind": self.kind,
                "order": n,
                "residual": res[n],
                "initial_residual": init[n],
                "flagged": n in self.flagged_orders,
            }
            for n in range(self.order)
        ]


def _time_derivative(f: Callable[[float], FormalSeries], x: float, h: float) -> FormalSeries:
    """Centered difference, one-sided when x - h < 0."""
    if x - h < 0:
        return (f(x + h) - f(x)) / h
    return (f(x + h) - f(x - h)) / (2 * h)


def pde_residual(
    kind: PDEKind,
    s: float,
    t: float,
    K: int = DEFAULT_ORDER,
    fd_step: float = DEFAULT_FD_STEP,
    flag: float = DEFAULT_RESIDUAL_FLAG,
) -> ResidualReport:
    """Substitute the computed series into their PDEs.

    rho:  d rho/ds + s rho d rho/dz,     rho(0, z) = z/(1-z)
    psi:  d psi/dt - z psi d psi/dz,     psi^s(0, z) = rho(s, e^{-s/2} z)
    phi:  d phi/dt - z psi d phi/dz,     phi^{s,u}(0, z) = uz/(1-uz)
    """
    if kind == "rho":
        rho = rho_series(s, K)
        residual = _time_derivative(lambda x: rho_series(x, K), s, fd_step) + rho * rho.derivative() * s
        initial = rho_series(0.0, K) - (FormalSeries.geometric(K) - 1)
    elif kind == "psi":
        _check_domain(s, t)
        psi = psi_series(s, t, K)
        dt = _time_derivative(lambda x: _trace_series(_phi_st(s, x, K), s), t, fd_step)
        residual = dt - (psi * psi.derivative()).shift(1)
        initial = _trace_series(_phi_st(s, 0.0, K), s) - rho_series(s, K).scale_variable(
            math.exp(-s / 2)
        )
    elif kind == "phi":
        _check_domain(s, t)
        phi = _phi_st(s, t, K)
        psi = _trace_series(phi, s)
        dt = _time_derivative(lambda x: _phi_st(s, x, K), t, fd_step)
        residual = dt - (phi.derivative() * psi).shift(1)
        initial = _phi_st(s, 0.0, K) - _geometric_in_u(FormalSeries.z(K))
    else:
        raise ValueError(f"unknown PDE {kind!r}; expected rho, psi or phi")

    residual = residual.truncate(K - 1)
    initial = initial.truncate(K - 1)
    norms = residual.order_norms()
    flagged = [n for n, r in enumerate(norms) if r > flag]
    if flagged:
        logger.warning(
            f"{kind} PDE residual above {flag:g} at orders {flagged} "
            f"(max {max(norms):.3e}, s={s}, t={t})"
        )
    return ResidualReport(kind, s, t, K, residual, initial, flag, flagged)
