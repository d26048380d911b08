"""Trace polynomials: finitely supported maps monomial -> coefficient over a ScalarRing."""

from __future__ import annotations

from types import MappingProxyType
from typing import Any, Callable, Generic, Iterable, Iterator, Mapping, TypeVar

from tracecalc.algebra.monomial import ONE, TraceMonomial
from tracecalc.algebra.rings import RATIONAL, ScalarRing
from tracecalc.errors import RingMismatchError

C = TypeVar("C")
D = TypeVar("D")


class TracePolynomial(Generic[C]):
    """An element of R[u, v1, v2, ...]; immutable, zero coefficients never stored."""

    __slots__ = ("_terms", "_ring")

    def __init__(
        self,
        terms: Mapping[TraceMonomial, C] | Iterable[tuple[TraceMonomial, C]] = (),
        ring: ScalarRing[C] = RATIONAL,  # type: ignore[assignment]
    ):
        self._ring = ring
        acc: dict[TraceMonomial, C] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            value = ring.coerce(c)
            acc[m] = acc[m] + value if m in acc else value
        self._terms: dict[TraceMonomial, C] = {
            m: acc[m] for m in sorted(acc) if not ring.is_zero(acc[m])
        }

    # ── constructors ────────────────────────────────────────────────

    @classmethod
    def zero(cls, ring: ScalarRing[C] = RATIONAL) -> TracePolynomial[C]:  # type: ignore[assignment]
        return cls((), ring)

    @classmethod
    def constant(cls, value: Any, ring: ScalarRing[C] = RATIONAL) -> TracePolynomial[C]:  # type: ignore[assignment]
        return cls({ONE: value}, ring)

    @classmethod
    def one(cls, ring: ScalarRing[C] = RATIONAL) -> TracePolynomial[C]:  # type: ignore[assignment]
        return cls({ONE: ring.one}, ring)

    @classmethod
    def monomial(
        cls, m: TraceMonomial, coeff: Any = 1, ring: ScalarRing[C] = RATIONAL  # type: ignore[assignment]
    ) -> TracePolynomial[C]:
        return cls({m: coeff}, ring)

    @classmethod
    def parse_terms(
        cls, terms: Mapping[str, Any], ring: ScalarRing[C] = RATIONAL  # type: ignore[assignment]
    ) -> TracePolynomial[C]:
        """Build from ``{"u^2*v1": coeff, ...}`` labels."""
        return cls(((TraceMonomial.parse(k), c) for k, c in terms.items()), ring)

    # ── accessors ───────────────────────────────────────────────────

    @property
    def ring(self) -> ScalarRing[C]:
        return self._ring

    @property
    def terms(self) -> Mapping[TraceMonomial, C]:
        return MappingProxyType(self._terms)

    def __iter__(self) -> Iterator[tuple[TraceMonomial, C]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, m: object) -> bool:
        return m in self._terms

    def coefficient(self, m: TraceMonomial) -> C:
        return self._terms.get(m, self._ring.zero)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_scalar(self) -> bool:
        """True when independent of u."""
        return all(m.is_scalar for m in self._terms)

    def grades(self) -> list[int]:
        return sorted({m.trace_degree for m in self._terms})

    @property
    def max_grade(self) -> int:
        return max((m.trace_degree for m in self._terms), default=0)

    def homogeneous_component(self, k: int) -> TracePolynomial[C]:
        return TracePolynomial(
            ((m, c) for m, c in self._terms.items() if m.trace_degree == k), self._ring
        )

    def components(self) -> dict[int, TracePolynomial[C]]:
        return {k: self.homogeneous_component(k) for k in self.grades()}

    def max_trace_power(self) -> int:
        return max((p for m in self._terms for p, _ in m.traces), default=0)

    # ── arithmetic ──────────────────────────────────────────────────

    def _check(self, other: TracePolynomial[Any]) -> None:
        if other._ring is not self._ring:
            raise RingMismatchError(
                f"cannot combine polynomials over {self._ring.name} and {other._ring.name}"
            )

    def __add__(self, other: Any) -> TracePolynomial[C]:
        if not isinstance(other, TracePolynomial):
            return self + TracePolynomial.constant(other, self._ring)
        self._check(other)
        return TracePolynomial(list(self._terms.items()) + list(other._terms.items()), self._ring)

    __radd__ = __add__

    def __neg__(self) -> TracePolynomial[C]:
        return TracePolynomial(((m, -c) for m, c in self._terms.items()), self._ring)

    def __sub__(self, other: Any) -> TracePolynomial[C]:
        if not isinstance(other, TracePolynomial):
            other = TracePolynomial.constant(other, self._ring)
        return self + (-other)

    def __rsub__(self, other: Any) -> TracePolynomial[C]:
        return (-self) + other

    def __mul__(self, other: Any) -> TracePolynomial[C]:
        if not isinstance(other, TracePolynomial):
            return self.scale(other)
        self._check(other)
        out: dict[TraceMonomial, C] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return TracePolynomial(out, self._ring)

    def __rmul__(self, other: Any) -> TracePolynomial[C]:
        return self.scale(other)

    def __pow__(self, n: int) -> TracePolynomial[C]:
        if n < 0:
            raise ValueError("negative powers are not trace polynomials")
        result = TracePolynomial.one(self._ring)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c: Any) -> TracePolynomial[C]:
        value = self._ring.coerce(c)
        return TracePolynomial(((m, value * x) for m, x in self._terms.items()), self._ring)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TracePolynomial):
            return NotImplemented
        return self._ring is other._ring and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._ring.name, frozenset(self._terms.items())))

    # ── transformations ─────────────────────────────────────────────

    def map_coefficients(
        self, fn: Callable[[C], Any], ring: ScalarRing[D] | None = None
    ) -> TracePolynomial[D]:
        target = ring or self._ring
        return TracePolynomial(((m, fn(c)) for m, c in self._terms.items()), target)  # type: ignore[arg-type]

    def change_ring(self, ring: ScalarRing[D], t: Any = None) -> TracePolynomial[D]:
        """Re-express the coefficients in another ring.

        Moving to COMPLEX from a t-dependent ring requires ``t``.
        """
        if ring is self._ring:
            return self  # type: ignore[return-value]
        if ring.exact:
            return self.map_coefficients(ring.coerce, ring)
        return self.map_coefficients(lambda c: self._ring.to_complex(c, t), ring)

    def map_monomials(self, fn: Callable[[TraceMonomial], TraceMonomial]) -> TracePolynomial[C]:
        return TracePolynomial(((fn(m), c) for m, c in self._terms.items()), self._ring)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self._terms.items():
            coeff = self._ring.format(c)
            if m.is_one:
                parts.append(coeff if " " not in coeff else f"({coeff})")
            elif coeff == "1":
                parts.append(str(m))
            elif coeff == "-1":
                parts.append(f"-{m}")
            else:
                shown = coeff if " " not in coeff else f"({coeff})"
                parts.append(f"{shown}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TracePolynomial[{self._ring.name}]({str(self)!r})"


# ── functional forms ────────────────────────────────────────────────


def poly_add(p: TracePolynomial[C], q: TracePolynomial[C]) -> TracePolynomial[C]:
    return p + q


def poly_mul(p: TracePolynomial[C], q: TracePolynomial[C]) -> TracePolynomial[C]:
    return p * q


def poly_scale(p: TracePolynomial[C], c: Any) -> TracePolynomial[C]:
    return p.scale(c)


def trace_of(p: TracePolynomial[C]) -> TracePolynomial[C]:
    """Apply the normalized trace: u^k * s -> v_k * s for k >= 1; scalars unchanged."""

    def traced(m: TraceMonomial) -> TraceMonomial:
        if m.u_power == 0:
            return m
        return m.adjust(u_power=0, delta={m.u_power: 1})

    return p.map_monomials(traced)


def cayley_hamilton_polynomial(ring: ScalarRing[C] = RATIONAL) -> TracePolynomial[C]:  # type: ignore[assignment]
    """u^2 - 2 u v1 + 2 v1^2 - v2, which vanishes identically on U(2)."""
    return TracePolynomial.parse_terms({"u^2": 1, "u*v1": -2, "v1^2": 2, "v2": -1}, ring)
