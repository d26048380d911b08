"""The free Hall transform q_t = pi_0(e^{tD/2} p) and its inverse.

Symbolic results have ExpTPoly coefficients (sums of e^{r t} * body(t));
passing a numeric ``t`` evaluates them to complex numbers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any

from tracecalc.algebra.evaluate import pi_zero
from tracecalc.algebra.monomial import u
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import COMPLEX, EXPTPOLY, ExpTPoly
from tracecalc.algebra.univariate import SingleVarPoly
from tracecalc.heat.semigroup import heat_limit


@lru_cache(maxsize=None)
def transform_power(k: int) -> SingleVarPoly[ExpTPoly]:
    """q_t for p(u) = u^k, symbolic in t."""
    value = heat_limit(TracePolynomial.monomial(u(k), 1)).to_exp_polynomial()
    return pi_zero(value, EXPTPOLY).with_variable("z")


@lru_cache(maxsize=None)
def inverse_power(k: int) -> SingleVarPoly[ExpTPoly]:
    """The polynomial in u whose transform is z^k.

    With forward(u^k) = e^{-kt/2} z^k + sum_{j<k} a_kj z^j this is
    P_k = e^{kt/2} (u^k - sum_{j<k} a_kj P_j).
    """
    forward = transform_power(k)
    residual = SingleVarPoly.monomial(k, 1, EXPTPOLY, "u")
    for j in range(k):
        a = forward.coefficient(j)
        if a:
            residual = residual - inverse_power(j).scale(a)
    return residual.scale(ExpTPoly.exp(Fraction(k, 2)))


def _as_exact(p: SingleVarPoly[Any]) -> SingleVarPoly[ExpTPoly] | None:
    if p.ring is COMPLEX:
        return None
    return p.change_ring(EXPTPOLY)


def _combine(
    p: SingleVarPoly[Any], image: Any, variable: str, t: Any
) -> SingleVarPoly[Any]:
    exact = _as_exact(p)
    if exact is not None:
        acc = SingleVarPoly((), EXPTPOLY, variable)
        for j, c in enumerate(exact.coeffs):
            if c:
                acc = acc + image(j).scale(c)
        return acc if t is None else acc.change_ring(COMPLEX, float(t))
    if t is None:
        raise ValueError("complex coefficients need a numeric t")
    acc_c = SingleVarPoly((), COMPLEX, variable)
    for j, c in enumerate(p.coeffs):
        acc_c = acc_c + image(j).change_ring(COMPLEX, float(t)).scale(c)
    return acc_c


def free_hall_transform(p: SingleVarPoly[Any], t: Any = None) -> SingleVarPoly[Any]:
    """q_t in z. ``t=None`` keeps t symbolic (ExpTPoly coefficients)."""
    return _combine(p, transform_power, "z", t)


def inverse_free_hall(q: SingleVarPoly[Any], t: Any = None) -> SingleVarPoly[Any]:
    """The p in u with free_hall_transform(p) = q, by back-substitution."""
    if t is not None and float(t) < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return _combine(q, inverse_power, "u", t)
