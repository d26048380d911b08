"""Independent check of the heat recursion: the nilpotent exponential on one grade."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from loguru import logger

from tracecalc.algebra.monomial import grade_basis
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import RATIONAL, TPOLY, TPoly
from tracecalc.errors import NilpotencyError
from tracecalc.operators.intertwining import apply_D_tilde
from tracecalc.operators.matrix import GradedOperatorMatrix, coordinates


@lru_cache(maxsize=32)
def nilpotent_exp_oracle(k: int) -> GradedOperatorMatrix:
    """e^{t D_tilde/2} on grade k as the finite sum sum_{n<=k} (t/2)^n D_tilde^n / n!.

    Column j is built by iterating D_tilde on basis monomial j; after k+1
    steps the iterate must vanish.
    """
    if k < 0:
        raise ValueError(f"grade must be non-negative, got {k}")
    basis = grade_basis(k)
    columns = []
    for b in basis:
        iterate = TracePolynomial.monomial(b, 1, RATIONAL)
        acc = TracePolynomial.zero(TPOLY)
        for n in range(k + 1):
            acc = acc + iterate.change_ring(TPOLY).scale(_weight(n))
            iterate = apply_D_tilde(iterate)
        if not iterate.is_zero:
            raise NilpotencyError(f"D_tilde^{k + 1}({b}) = {iterate} is not zero")
        columns.append(coordinates(acc, k))
    n = len(basis)
    rows = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
    logger.debug(f"nilpotent oracle built for grade {k} ({n}x{n})")
    return GradedOperatorMatrix(k, basis, rows, "exp(t*D_tilde/2)", TPOLY)


def _weight(n: int) -> TPoly:
    """(t/2)^n / n!."""
    return TPoly([0] * n + [Fraction(1, 2**n * factorial(n))])
