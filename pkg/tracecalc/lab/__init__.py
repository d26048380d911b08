"""Matrix-group numerics: bases, magic formulas, Laplacian checks and Monte Carlo."""

from tracecalc.lab.basis import OrthonormalBasis, onb, un_inner
from tracecalc.lab.brownian import random_unitary, sample_bm, sample_endpoints
from tracecalc.lab.estimators import mc_estimate, mc_l2_distance, trace_deviation, trace_power
from tracecalc.lab.laplacian import convergence_ratio, laplacian_exact, laplacian_fd, richardson
from tracecalc.lab.magic import MagicResiduals, verify_magic
from tracecalc.lab.types import BrownianConfig, SampleStats

__all__ = [
    "BrownianConfig",
    "MagicResiduals",
    "OrthonormalBasis",
    "SampleStats",
    "convergence_ratio",
    "laplacian_exact",
    "laplacian_fd",
    "mc_estimate",
    "mc_l2_distance",
    "onb",
    "random_unitary",
    "richardson",
    "sample_bm",
    "sample_endpoints",
    "trace_deviation",
    "trace_power",
    "un_inner",
    "verify_magic",
]
