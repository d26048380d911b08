"""Heat semigroups: exact large-N, numeric finite-N, free Hall transform and moments."""

from tracecalc.heat.finite import expect_finite, heat_finite_N, u_squared_closed_form, variance_finite
from tracecalc.heat.hall import free_hall_transform, inverse_free_hall
from tracecalc.heat.moments import (
    biane_moment,
    biane_moment_closed_form,
    concentration_target,
    moment_table,
)
from tracecalc.heat.oracle import nilpotent_exp_oracle
from tracecalc.heat.semigroup import HeatSemigroup, default_semigroup, heat_limit
from tracecalc.heat.types import MomentTable, SemigroupValue

__all__ = [
    "HeatSemigroup",
    "MomentTable",
    "SemigroupValue",
    "biane_moment",
    "biane_moment_closed_form",
    "concentration_target",
    "default_semigroup",
    "expect_finite",
    "free_hall_transform",
    "heat_finite_N",
    "heat_limit",
    "inverse_free_hall",
    "moment_table",
    "nilpotent_exp_oracle",
    "u_squared_closed_form",
    "variance_finite",
]
