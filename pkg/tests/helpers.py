"""Random trace polynomials for the property tests."""

from fractions import Fraction

import numpy as np

from tracecalc.algebra.monomial import grade_basis
from tracecalc.algebra.polynomial import TracePolynomial


def random_polynomial(
    rng: np.random.Generator, grades: range | list[int], density: float = 0.5, span: int = 5
) -> TracePolynomial:
    """Rational coefficients num/den with |num| <= span and 1 <= den <= 3 on a random subset of each grade."""
    terms = []
    for k in grades:
        for m in grade_basis(k):
            if rng.random() < density:
                num = int(rng.integers(-span, span + 1))
                den = int(rng.integers(1, 4))
                terms.append((m, Fraction(num, den)))
    return TracePolynomial(terms)
