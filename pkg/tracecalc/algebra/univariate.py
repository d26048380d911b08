"""Single-variable polynomials c0 + c1 x + ... + cd x^d in u or z."""

from __future__ import annotations

from typing import Any, Callable, Generic, Iterable, TypeVar

import numpy as np

from tracecalc.algebra.monomial import TraceMonomial
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import RATIONAL, ScalarRing
from tracecalc.errors import RingMismatchError

C = TypeVar("C")
D = TypeVar("D")

VARIABLES = ("u", "z")


class SingleVarPoly(Generic[C]):
    """Dense polynomial in one variable; the leading coefficient is nonzero unless zero."""

    __slots__ = ("_c", "_ring", "_var")

    def __init__(
        self,
        coeffs: Iterable[Any] = (),
        ring: ScalarRing[C] = RATIONAL,  # type: ignore[assignment]
        variable: str = "u",
    ):
        if variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}, got {variable!r}")
        c = [ring.coerce(x) for x in coeffs]
        while c and ring.is_zero(c[-1]):
            c.pop()
        self._c: tuple[C, ...] = tuple(c)
        self._ring = ring
        self._var = variable

    @classmethod
    def monomial(
        cls, power: int, coeff: Any = 1, ring: ScalarRing[C] = RATIONAL, variable: str = "u"  # type: ignore[assignment]
    ) -> SingleVarPoly[C]:
        return cls([ring.zero] * power + [ring.coerce(coeff)], ring, variable)

    @property
    def coeffs(self) -> tuple[C, ...]:
        return self._c

    @property
    def ring(self) -> ScalarRing[C]:
        return self._ring

    @property
    def variable(self) -> str:
        return self._var

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def is_zero(self) -> bool:
        return not self._c

    def coefficient(self, j: int) -> C:
        return self._c[j] if 0 <= j < len(self._c) else self._ring.zero

    def _check(self, other: SingleVarPoly[Any]) -> None:
        if other._ring is not self._ring:
            raise RingMismatchError(f"cannot combine {self._ring.name} and {other._ring.name}")
        if other._var != self._var:
            raise ValueError(f"variable mismatch: {self._var} vs {other._var}")

    def __add__(self, other: SingleVarPoly[C]) -> SingleVarPoly[C]:
        self._check(other)
        n = max(len(self._c), len(other._c))
        return SingleVarPoly(
            (self.coefficient(i) + other.coefficient(i) for i in range(n)), self._ring, self._var
        )

    def __neg__(self) -> SingleVarPoly[C]:
        return SingleVarPoly((-x for x in self._c), self._ring, self._var)

    def __sub__(self, other: SingleVarPoly[C]) -> SingleVarPoly[C]:
        return self + (-other)

    def __mul__(self, other: Any) -> SingleVarPoly[C]:
        if not isinstance(other, SingleVarPoly):
            return self.scale(other)
        self._check(other)
        if not self._c or not other._c:
            return SingleVarPoly((), self._ring, self._var)
        out = [self._ring.zero] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            for j, b in enumerate(other._c):
                out[i + j] = out[i + j] + a * b
        return SingleVarPoly(out, self._ring, self._var)

    def __rmul__(self, other: Any) -> SingleVarPoly[C]:
        return self.scale(other)

    def scale(self, c: Any) -> SingleVarPoly[C]:
        value = self._ring.coerce(c)
        return SingleVarPoly((value * x for x in self._c), self._ring, self._var)

    def evaluate(self, x: Any) -> Any:
        """Horner evaluation; ``x`` may be a number or a square numpy array."""
        if isinstance(x, np.ndarray) and x.ndim >= 2:
            eye = np.broadcast_to(np.eye(x.shape[-1], dtype=complex), x.shape)
            acc = np.zeros_like(x, dtype=complex)
            for c in reversed(self._c):
                acc = acc @ x + self._ring.to_complex(c) * eye
            return acc
        acc_s: Any = self._ring.zero
        for c in reversed(self._c):
            acc_s = acc_s * x + c
        return acc_s

    def with_variable(self, variable: str) -> SingleVarPoly[C]:
        return SingleVarPoly(self._c, self._ring, variable)

    def map_coefficients(
        self, fn: Callable[[C], Any], ring: ScalarRing[D] | None = None
    ) -> SingleVarPoly[D]:
        return SingleVarPoly((fn(c) for c in self._c), ring or self._ring, self._var)  # type: ignore[arg-type]

    def change_ring(self, ring: ScalarRing[D], t: Any = None) -> SingleVarPoly[D]:
        if ring is self._ring:
            return self  # type: ignore[return-value]
        if ring.exact:
            return self.map_coefficients(ring.coerce, ring)
        return self.map_coefficients(lambda c: self._ring.to_complex(c, t), ring)

    def to_trace_polynomial(self) -> TracePolynomial[C]:
        """Embed as a trace polynomial in u (the variable tag is dropped)."""
        return TracePolynomial(
            ((TraceMonomial(j), c) for j, c in enumerate(self._c)), self._ring
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SingleVarPoly):
            return NotImplemented
        return self._ring is other._ring and self._var == other._var and self._c == other._c

    def __hash__(self) -> int:
        return hash((self._ring.name, self._var, self._c))

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for j in range(len(self._c) - 1, -1, -1):
            c = self._c[j]
            if self._ring.is_zero(c):
                continue
            coeff = self._ring.format(c)
            if " " in coeff:
                coeff = f"({coeff})"
            xpow = "" if j == 0 else (self._var if j == 1 else f"{self._var}^{j}")
            if not xpow:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(xpow)
            elif coeff == "-1":
                parts.append(f"-{xpow}")
            else:
                parts.append(f"{coeff}*{xpow}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"SingleVarPoly[{self._ring.name}]({str(self)!r})"


def from_trace_polynomial(p: TracePolynomial[C], variable: str = "u") -> SingleVarPoly[C]:
    """Inverse of :meth:`SingleVarPoly.to_trace_polynomial`; p must contain only powers of u."""
    coeffs: dict[int, C] = {}
    for m, c in p:
        if m.traces:
            raise ValueError(f"{m} has trace factors; substitute them first")
        coeffs[m.u_power] = c
    top = max(coeffs, default=-1)
    return SingleVarPoly(
        (coeffs.get(j, p.ring.zero) for j in range(top + 1)), p.ring, variable
    )
