"""Intertwining operators D, L, D_N, D_tilde, T and their graded matrices."""

from tracecalc.operators.intertwining import (
    OPERATOR_TAGS,
    apply_D,
    apply_D_tilde,
    apply_DN,
    apply_L,
    apply_operator,
    apply_T,
)
from tracecalc.operators.matrix import (
    GradedOperatorMatrix,
    coordinates,
    from_coordinates,
    operator_matrix,
)

__all__ = [
    "OPERATOR_TAGS",
    "GradedOperatorMatrix",
    "apply_D",
    "apply_D_tilde",
    "apply_DN",
    "apply_L",
    "apply_T",
    "apply_operator",
    "coordinates",
    "from_coordinates",
    "operator_matrix",
]
