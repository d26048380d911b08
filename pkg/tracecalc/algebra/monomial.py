"""Trace monomials u^k * v_{l1}^{m1} * v_{l2}^{m2} ... and the trace-degree grading."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from tracecalc.errors import PolynomialParseError

_FACTOR_RE = re.compile(r"^(u|v(\d+))(?:\^(\d+))?$")


@dataclass(frozen=True)
class TraceMonomial:
    """A basis element of C[u, v]: the untraced power of u plus trace factors.

    ``traces`` is a tuple of ``(power, multiplicity)`` pairs sorted by power,
    with every multiplicity at least 1; build instances with :meth:`create`
    to get the canonical form.
    """

    u_power: int = 0
    traces: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.u_power < 0:
            raise ValueError(f"negative u power: {self.u_power}")
        last = 0
        for power, mult in self.traces:
            if power <= last or mult < 1:
                raise ValueError(f"non-canonical trace factors: {self.traces}")
            last = power

    @classmethod
    def create(
        cls,
        u_power: int = 0,
        traces: Mapping[int, int] | Iterable[tuple[int, int]] | None = None,
    ) -> TraceMonomial:
        """Canonicalize: merge repeated powers, drop zero multiplicities."""
        merged: dict[int, int] = {}
        items = traces.items() if isinstance(traces, Mapping) else (traces or ())
        for power, mult in items:
            if power < 1:
                raise ValueError(f"trace powers must be >= 1, got {power}")
            if mult < 0:
                raise ValueError(f"negative multiplicity for v{power}")
            merged[power] = merged.get(power, 0) + mult
        canon = tuple(sorted((p, m) for p, m in merged.items() if m > 0))
        return cls(u_power, canon)

    @classmethod
    def from_powers(cls, u_power: int, powers: Iterable[int]) -> TraceMonomial:
        """Build from an unordered list of trace powers l1, ..., lM (repeats allowed)."""
        counts: dict[int, int] = {}
        for p in powers:
            counts[p] = counts.get(p, 0) + 1
        return cls.create(u_power, counts)

    @property
    def trace_degree(self) -> int:
        return self.u_power + sum(p * m for p, m in self.traces)

    @property
    def factor_count(self) -> int:
        """Number of trace factors counted with multiplicity."""
        return sum(m for _, m in self.traces)

    @property
    def is_scalar(self) -> bool:
        return self.u_power == 0

    @property
    def is_one(self) -> bool:
        return self.u_power == 0 and not self.traces

    def trace_dict(self) -> dict[int, int]:
        return dict(self.traces)

    def trace_powers(self) -> list[int]:
        """Trace powers with repetition, ascending."""
        return [p for p, m in self.traces for _ in range(m)]

    def scalar_part(self) -> TraceMonomial:
        return TraceMonomial(0, self.traces)

    def with_u(self, u_power: int) -> TraceMonomial:
        return TraceMonomial(u_power, self.traces)

    def multiplicity(self, power: int) -> int:
        return self.trace_dict().get(power, 0)

    def adjust(self, u_power: int | None = None, delta: Mapping[int, int] | None = None) -> TraceMonomial:
        """Return a copy with a new u power and trace multiplicities shifted by ``delta``."""
        counts = self.trace_dict()
        for power, d in (delta or {}).items():
            counts[power] = counts.get(power, 0) + d
            if counts[power] < 0:
                raise ValueError(f"v{power} removed more often than present in {self}")
        return TraceMonomial.create(self.u_power if u_power is None else u_power, counts)

    def __mul__(self, other: TraceMonomial) -> TraceMonomial:
        if not isinstance(other, TraceMonomial):
            return NotImplemented
        counts = self.trace_dict()
        for p, m in other.traces:
            counts[p] = counts.get(p, 0) + m
        return TraceMonomial.create(self.u_power + other.u_power, counts)

    def sort_key(self) -> tuple:
        """Deterministic basis order: u power descending, then trace partitions
        in reverse-lexicographic order of their parts (v2 before v1^2)."""
        parts = tuple(sorted(self.trace_powers(), reverse=True))
        return (-self.u_power, tuple(-p for p in parts), -len(parts))

    def __lt__(self, other: TraceMonomial) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        factors: list[str] = []
        if self.u_power == 1:
            factors.append("u")
        elif self.u_power > 1:
            factors.append(f"u^{self.u_power}")
        for p, m in self.traces:
            factors.append(f"v{p}" if m == 1 else f"v{p}^{m}")
        return "*".join(factors) if factors else "1"

    @classmethod
    def parse(cls, text: str) -> TraceMonomial:
        """Parse the canonical label form, e.g. ``"u^2*v1*v3^2"`` or ``"1"``."""
        text = text.strip().replace(" ", "")
        if text in ("", "1"):
            return cls()
        u_power = 0
        counts: dict[int, int] = {}
        for factor in text.split("*"):
            match = _FACTOR_RE.match(factor)
            if not match:
                raise PolynomialParseError(f"bad monomial factor {factor!r} in {text!r}")
            exp = int(match.group(3)) if match.group(3) else 1
            if match.group(1) == "u":
                u_power += exp
            else:
                power = int(match.group(2))
                if power < 1:
                    raise PolynomialParseError(f"trace power must be >= 1 in {text!r}")
                counts[power] = counts.get(power, 0) + exp
        return cls.create(u_power, counts)


ONE = TraceMonomial()
U = TraceMonomial(1)


def trace_degree(m: TraceMonomial) -> int:
    """Total number of factors of U: k + sum l * m_l."""
    return m.trace_degree


def v(power: int, multiplicity: int = 1) -> TraceMonomial:
    """The monomial v_power^multiplicity."""
    return TraceMonomial.create(0, {power: multiplicity})


def u(power: int = 1) -> TraceMonomial:
    return TraceMonomial(power)


@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Integer partitions of n with parts in descending order, in reverse-lex order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out: list[tuple[int, ...]] = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def grade_basis(k: int) -> tuple[TraceMonomial, ...]:
    """Every monomial of trace degree exactly k, in the fixed basis order."""
    if k < 0:
        raise ValueError(f"grade must be non-negative, got {k}")
    basis = [
        TraceMonomial.from_powers(k0, parts)
        for k0 in range(k, -1, -1)
        for parts in partitions(k - k0)
    ]
    return tuple(sorted(basis))


@lru_cache(maxsize=None)
def basis_index(k: int) -> dict[TraceMonomial, int]:
    return {m: i for i, m in enumerate(grade_basis(k))}
