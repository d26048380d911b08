"""Formal power series and the generating functions of the two-parameter transform."""

from tracecalc.series.formal import FormalSeries, series_revert
from tracecalc.series.generating import (
    ResidualReport,
    expand_phi_st,
    expand_phi_tt,
    pde_residual,
    psi_series,
    rho_series,
)

__all__ = [
    "FormalSeries",
    "ResidualReport",
    "expand_phi_st",
    "expand_phi_tt",
    "pde_residual",
    "psi_series",
    "rho_series",
    "series_revert",
]
