"""Value types produced by the heat semigroup."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from tracecalc.algebra.codec import polynomial_from_json, polynomial_to_json
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import (
    COMPLEX,
    EXPTPOLY,
    RATIONAL,
    TPOLY,
    ExpTPoly,
    TPoly,
    as_fraction,
    format_rate,
    fraction_to_str,
)


@dataclass(frozen=True)
class SemigroupValue:
    """sum_k e^{-k t/2} * r_k(t, u, v), each r_k homogeneous of trace degree k."""

    components: tuple[tuple[int, TracePolynomial[TPoly]], ...] = ()

    def __post_init__(self) -> None:
        grades = [k for k, _ in self.components]
        if grades != sorted(set(grades)):
            raise ValueError(f"grades must be distinct and sorted, got {grades}")
        for k, body in self.components:
            if body.ring is not TPOLY:
                raise ValueError("semigroup bodies must have TPoly coefficients")
            for m, _ in body:
                if m.trace_degree != k:
                    raise ValueError(f"{m} has trace degree {m.trace_degree} in grade {k}")

    @classmethod
    def from_bodies(cls, bodies: dict[int, TracePolynomial[TPoly]]) -> SemigroupValue:
        return cls(tuple((k, bodies[k]) for k in sorted(bodies) if not bodies[k].is_zero))

    @property
    def grades(self) -> list[int]:
        return [k for k, _ in self.components]

    def body(self, k: int) -> TracePolynomial[TPoly]:
        for grade, body in self.components:
            if grade == k:
                return body
        return TracePolynomial.zero(TPOLY)

    def __add__(self, other: SemigroupValue) -> SemigroupValue:
        bodies = dict(self.components)
        for k, body in other.components:
            bodies[k] = bodies[k] + body if k in bodies else body
        return SemigroupValue.from_bodies(bodies)

    def scale(self, c: Any) -> SemigroupValue:
        return SemigroupValue.from_bodies({k: b.scale(c) for k, b in self.components})

    def body_at(self, k: int, t: Any) -> TracePolynomial[Fraction]:
        """r_k evaluated at a rational t, exactly; the prefactor is not applied."""
        tt = as_fraction(t)
        return self.body(k).map_coefficients(lambda c: c(tt), RATIONAL)

    def at(self, t: float) -> TracePolynomial[complex]:
        """Numeric value at t with the e^{-kt/2} prefactors folded in."""
        tf = float(t)
        out = TracePolynomial.zero(COMPLEX)
        for k, body in self.components:
            decay = math.exp(-k * tf / 2)
            out = out + body.map_coefficients(lambda c, d=decay: complex(d * c(tf)), COMPLEX)
        return out

    def initial(self) -> TracePolynomial[Fraction]:
        """Value at t = 0."""
        out = TracePolynomial.zero(RATIONAL)
        for k, _ in self.components:
            out = out + self.body_at(k, 0)
        return out

    def to_exp_polynomial(self) -> TracePolynomial[ExpTPoly]:
        """Fold the prefactors into ExpTPoly coefficients e^{-k t/2} * body."""
        out = TracePolynomial.zero(EXPTPOLY)
        for k, body in self.components:
            rate = Fraction(-k, 2)
            out = out + body.map_coefficients(lambda c, r=rate: ExpTPoly.exp(r, c), EXPTPOLY)
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "grades": [
                {"k": k, "decay": fraction_to_str(Fraction(k, 2)), "body": polynomial_to_json(body)}
                for k, body in self.components
            ]
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> SemigroupValue:
        bodies = {}
        for entry in data["grades"]:
            k = int(entry["k"])
            if as_fraction(entry["decay"]) != Fraction(k, 2):
                raise ValueError(f"decay {entry['decay']} does not match grade {k}")
            bodies[k] = polynomial_from_json(entry["body"], TPOLY)
        return cls.from_bodies(bodies)

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for k, body in self.components:
            prefix = format_rate(Fraction(-k, 2))
            parts.append(str(body) if k == 0 else f"{prefix}·({body})")
        return " + ".join(parts)


@dataclass
class MomentTable:
    """nu_k(t) = e^{-k t/2} * body_k(t) for k = 1..kmax."""

    bodies: dict[int, TPoly] = field(default_factory=dict)

    def value(self, k: int) -> ExpTPoly:
        return ExpTPoly.exp(Fraction(-k, 2), self.bodies[k])

    def at(self, k: int, t: float) -> float:
        return self.value(k).at(t)

    def numeric(self, t: float) -> dict[int, float]:
        return {k: self.at(k, t) for k in sorted(self.bodies)}

    def rows(self, t: float | None = None) -> list[dict[str, Any]]:
        out = []
        for k in sorted(self.bodies):
            row: dict[str, Any] = {
                "k": k,
                "decay": fraction_to_str(Fraction(k, 2)),
                "body": str(self.bodies[k]),
            }
            if t is not None:
                row["value"] = self.at(k, t)
            out.append(row)
        return out
