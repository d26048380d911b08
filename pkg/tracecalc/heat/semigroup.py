"""Exact large-N heat semigroup e^{tD/2} on trace polynomials.

e^{tD/2} m = e^{-k t/2} * E_t(m) on a monomial of trace degree k, where
E_t = e^{t D_tilde/2} is computed from

    E_t(u^k) = u^k - sum_{m=1}^{k-1} m * int_0^t E_s(u^m) E_s(v_{k-m}) ds
    E_t(v_k) = v_k - sum_{m=1}^{k-1} m * int_0^t E_s(v_m) E_s(v_{k-m}) ds

and is multiplicative across scalar factors.
"""

from __future__ import annotations

import threading
from typing import Any, Iterable

from loguru import logger

from tracecalc.algebra.monomial import TraceMonomial, u, v
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import RATIONAL, TPOLY, TPoly
from tracecalc.errors import RingMismatchError
from tracecalc.heat.types import SemigroupValue

MemoKey = tuple[str, int]


def _integrate(p: TracePolynomial[TPoly]) -> TracePolynomial[TPoly]:
    return p.map_coefficients(TPoly.integrate)


class HeatSemigroup:
    """Memoized E_t on powers u^k and traces v_k.

    The memo is the only shared state. Each key is written once under the
    lock and never changed afterwards, so readers need no lock.
    """

    def __init__(self, entries: dict[MemoKey, TracePolynomial[TPoly]] | None = None):
        self._memo: dict[MemoKey, TracePolynomial[TPoly]] = {}
        self._lock = threading.Lock()
        if entries:
            self.load(entries)

    def __len__(self) -> int:
        return len(self._memo)

    def keys(self) -> list[MemoKey]:
        return sorted(self._memo)

    def _store(self, key: MemoKey, value: TracePolynomial[TPoly]) -> TracePolynomial[TPoly]:
        with self._lock:
            return self._memo.setdefault(key, value)

    def u_power(self, k: int) -> TracePolynomial[TPoly]:
        """E_t(u^k)."""
        return self._power("u", k)

    def trace_power(self, k: int) -> TracePolynomial[TPoly]:
        """E_t(v_k)."""
        return self._power("v", k)

    def _power(self, kind: str, k: int) -> TracePolynomial[TPoly]:
        key = (kind, k)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if k < 1:
            raise ValueError(f"power must be >= 1, got {k}")
        lead = TracePolynomial.monomial(u(k) if kind == "u" else v(k), 1, TPOLY)
        # Compute lower keys first so the recursion depth stays bounded.
        for j in range(1, k):
            self._power(kind, j)
            self._power("v", j)
        integrand = TracePolynomial.zero(TPOLY)
        for m in range(1, k):
            integrand = integrand + (self._power(kind, m) * self._power("v", k - m)).scale(m)
        value = lead - _integrate(integrand)
        logger.debug(f"heat recursion: {kind}^{k} has {len(value)} terms")
        return self._store(key, value)

    def monomial(self, m: TraceMonomial) -> TracePolynomial[TPoly]:
        """E_t(m) as a product of factor values."""
        value = TracePolynomial.one(TPOLY)
        if m.u_power:
            value = self.u_power(m.u_power)
        for power, mult in m.traces:
            factor = self.trace_power(power)
            for _ in range(mult):
                value = value * factor
        return value

    def apply(self, p: TracePolynomial[Any]) -> SemigroupValue:
        """e^{tD/2} p as a SemigroupValue; p must have rational or TPoly coefficients."""
        if p.ring is RATIONAL:
            p = p.change_ring(TPOLY)
        elif p.ring is not TPOLY:
            raise RingMismatchError(f"exact coefficients required, got ring {p.ring.name}")
        bodies: dict[int, TracePolynomial[TPoly]] = {}
        for m, c in p:
            k = m.trace_degree
            term = self.monomial(m).scale(c)
            bodies[k] = bodies[k] + term if k in bodies else term
        return SemigroupValue.from_bodies(bodies)

    # ── persistence ─────────────────────────────────────────────────

    def export(self) -> dict[MemoKey, SemigroupValue]:
        """Memo entries as single-grade SemigroupValues e^{-kt/2} E_t(x^k)."""
        return {
            key: SemigroupValue(((key[1], value),)) for key, value in sorted(self._memo.items())
        }

    def load(self, entries: dict[MemoKey, Any]) -> int:
        """Seed the memo; entries may be bodies or SemigroupValues. Returns the count loaded."""
        count = 0
        for (kind, k), value in entries.items():
            if kind not in ("u", "v"):
                raise ValueError(f"unknown memo kind {kind!r}")
            body = value.body(k) if isinstance(value, SemigroupValue) else value
            self._store((kind, int(k)), body)
            count += 1
        return count

    def warm(self, kmax: int, kinds: Iterable[str] = ("u", "v")) -> None:
        for kind in kinds:
            self._power(kind, kmax)


_default = HeatSemigroup()


def default_semigroup() -> HeatSemigroup:
    return _default


def heat_limit(p: TracePolynomial[Any], semigroup: HeatSemigroup | None = None) -> SemigroupValue:
    """e^{tD/2} p, exact and symbolic in t."""
    return (semigroup or _default).apply(p)
