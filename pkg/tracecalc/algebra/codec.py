"""Canonical JSON form of trace polynomials.

    {"terms": [{"u": 2, "traces": {"1": 1}, "coeff": "-1/1"}, ...]}

Rational coefficients are "p/q" strings, TPoly coefficients
``{"tpoly": ["c0", "c1", ...]}``; the models below validate the shape before
the ring decodes coefficients.
"""

from __future__ import annotations

import json
from typing import Any

from pydantic import BaseModel, Field, ValidationError, field_validator

from tracecalc.algebra.monomial import TraceMonomial
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import RATIONAL, ScalarRing
from tracecalc.errors import PolynomialParseError


class TermModel(BaseModel):
    """One monomial with its coefficient."""

    u: int = Field(default=0, ge=0)
    traces: dict[int, int] = Field(default_factory=dict)
    coeff: Any = "1/1"

    @field_validator("traces")
    @classmethod
    def positive_traces(cls, v: dict[int, int]) -> dict[int, int]:
        for power, mult in v.items():
            if power < 1 or mult < 0:
                raise ValueError(f"invalid trace factor v{power}^{mult}")
        return v


class PolynomialModel(BaseModel):
    terms: list[TermModel] = Field(default_factory=list)


def polynomial_to_json(p: TracePolynomial[Any]) -> dict[str, Any]:
    return {
        "terms": [
            {
                "u": m.u_power,
                "traces": {str(power): mult for power, mult in m.traces},
                "coeff": p.ring.encode(c),
            }
            for m, c in p
        ]
    }


def polynomial_from_json(data: Any, ring: ScalarRing[Any] = RATIONAL) -> TracePolynomial[Any]:
    """Decode the canonical form; raises PolynomialParseError on malformed input."""
    try:
        model = PolynomialModel.model_validate(data)
        return TracePolynomial(
            ((TraceMonomial.create(t.u, t.traces), ring.decode(t.coeff)) for t in model.terms),
            ring,
        )
    except (ValidationError, TypeError, ValueError) as e:
        raise PolynomialParseError(f"invalid polynomial JSON: {e}") from e


def parse_polynomial(text: str, ring: ScalarRing[Any] = RATIONAL) -> TracePolynomial[Any]:
    """Parse a JSON string, accepting the canonical form or ``{"u^2*v1": "3/2", ...}`` labels."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise PolynomialParseError(f"not valid JSON: {e}") from e
    if isinstance(data, dict) and "terms" not in data:
        try:
            return TracePolynomial.parse_terms(
                {k: ring.decode(v) for k, v in data.items()}, ring
            )
        except (TypeError, ValueError) as e:
            raise PolynomialParseError(f"invalid polynomial labels: {e}") from e
    return polynomial_from_json(data, ring)
