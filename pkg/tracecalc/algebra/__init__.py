"""Trace polynomials, their coefficient rings and evaluation maps."""

from tracecalc.algebra.codec import parse_polynomial, polynomial_from_json, polynomial_to_json
from tracecalc.algebra.evaluate import evaluate_matrix, normalized_trace, pi_zero, trace_eval
from tracecalc.algebra.monomial import ONE, U, TraceMonomial, grade_basis, trace_degree, u, v
from tracecalc.algebra.polynomial import (
    TracePolynomial,
    cayley_hamilton_polynomial,
    poly_add,
    poly_mul,
    poly_scale,
    trace_of,
)
from tracecalc.algebra.rings import (
    COMPLEX,
    EXPTPOLY,
    RATIONAL,
    TPOLY,
    ExpTPoly,
    ScalarRing,
    TPoly,
)
from tracecalc.algebra.univariate import SingleVarPoly

__all__ = [
    "COMPLEX",
    "EXPTPOLY",
    "ONE",
    "RATIONAL",
    "TPOLY",
    "U",
    "ExpTPoly",
    "ScalarRing",
    "SingleVarPoly",
    "TPoly",
    "TraceMonomial",
    "TracePolynomial",
    "cayley_hamilton_polynomial",
    "evaluate_matrix",
    "grade_basis",
    "normalized_trace",
    "parse_polynomial",
    "pi_zero",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "polynomial_from_json",
    "polynomial_to_json",
    "trace_degree",
    "trace_eval",
    "trace_of",
    "u",
    "v",
]
