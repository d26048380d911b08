"""Large-N moments nu_k(t) = lim E[tr U^k] and the matching concentration targets."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Any

from tracecalc.algebra.evaluate import trace_eval
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import COMPLEX, EXPTPOLY, ExpTPoly, TPoly
from tracecalc.algebra.univariate import SingleVarPoly
from tracecalc.heat.semigroup import HeatSemigroup, default_semigroup
from tracecalc.heat.types import MomentTable


def moment_body(k: int, semigroup: HeatSemigroup | None = None) -> TPoly:
    """e^{kt/2} nu_k(t): E_t(v_k) with every v_j set to 1."""
    if k < 1:
        raise ValueError(f"moments start at k = 1, got {k}")
    body = TPoly()
    for _, c in (semigroup or default_semigroup()).trace_power(k):
        body = body + c
    return body


def biane_moment(k: int, semigroup: HeatSemigroup | None = None) -> ExpTPoly:
    """nu_k(t) = e^{-kt/2} * body(t), exact."""
    return ExpTPoly.exp(Fraction(-k, 2), moment_body(k, semigroup))


def moment_table(kmax: int, semigroup: HeatSemigroup | None = None) -> MomentTable:
    return MomentTable({k: moment_body(k, semigroup) for k in range(1, kmax + 1)})


def biane_moment_closed_form(k: int) -> ExpTPoly:
    """nu_k(t) = e^{-kt/2} sum_{j<k} (-t)^j / j! * k^{j-1} * C(k, j+1)."""
    if k < 1:
        raise ValueError(f"moments start at k = 1, got {k}")
    coeffs = [
        Fraction((-1) ** j * k**j * comb(k, j + 1), factorial(j) * k) for j in range(k)
    ]
    return ExpTPoly.exp(Fraction(-k, 2), TPoly(coeffs))


def concentration_target(p: TracePolynomial[Any], t: Any = None) -> SingleVarPoly[Any]:
    """pi_t(p): substitute v_j := nu_j(t).

    The large-N limit of p_N in L^2 of the heat kernel measure on U(N).
    Symbolic for ``t=None``, complex otherwise.
    """
    top = p.max_trace_power()
    values = {j: biane_moment(j) for j in range(1, top + 1)}
    target = trace_eval(p, values, EXPTPOLY)
    return target if t is None else target.change_ring(COMPLEX, float(t))
