"""The intertwining operators on trace polynomials.

On a monomial u^k * v_{l1}^{m1} * ... the large-N operator splits as
D = -T + D_tilde, where T multiplies by the trace degree and D_tilde
splits one factor into two:

    D_tilde(u^k) = -2 sum_{j=1}^{k-1} j u^j v_{k-j}
    D_tilde(v_l) = -2 sum_{j=1}^{l-1} j v_j v_{l-j}

extended as a derivation across scalar factors. L merges two factors:

    v_a, v_b   -> 2ab v_{a+b}        (every unordered pair of trace factors)
    u^k, v_l   -> 2kl u^{k+l}        (k >= 1)

and D_N = D - L/N^2. Images of single monomials have integer coefficients
and are cached; the operators are linear over any ScalarRing.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Any, Literal, TypeVar

from tracecalc.algebra.monomial import TraceMonomial
from tracecalc.algebra.polynomial import TracePolynomial

C = TypeVar("C")

OperatorTag = Literal["D", "L", "D_N", "D_tilde", "T"]
OPERATOR_TAGS: tuple[str, ...] = ("D", "L", "D_N", "D_tilde", "T")

Image = tuple[tuple[TraceMonomial, int], ...]


def _collect(pairs: list[tuple[TraceMonomial, int]]) -> Image:
    acc: dict[TraceMonomial, int] = {}
    for m, c in pairs:
        acc[m] = acc.get(m, 0) + c
    return tuple((m, c) for m, c in sorted(acc.items()) if c != 0)


@lru_cache(maxsize=None)
def d_tilde_image(m: TraceMonomial) -> Image:
    out: list[tuple[TraceMonomial, int]] = []
    k = m.u_power
    for j in range(1, k):
        out.append((m.adjust(u_power=j, delta={k - j: 1}), -2 * j))
    for power, mult in m.traces:
        for j in range(1, power):
            delta = {power: -1}
            delta[j] = delta.get(j, 0) + 1
            delta[power - j] = delta.get(power - j, 0) + 1
            out.append((m.adjust(delta=delta), -2 * j * mult))
    return _collect(out)


@lru_cache(maxsize=None)
def d_image(m: TraceMonomial) -> Image:
    return _collect([(m, -m.trace_degree), *d_tilde_image(m)])


@lru_cache(maxsize=None)
def l_image(m: TraceMonomial) -> Image:
    out: list[tuple[TraceMonomial, int]] = []
    traces = m.traces
    for i, (a, ma) in enumerate(traces):
        if ma >= 2:
            out.append((m.adjust(delta={a: -2, 2 * a: 1}), comb(ma, 2) * 2 * a * a))
        for b, mb in traces[i + 1:]:
            merged = m.adjust(delta={a: -1, b: -1, a + b: 1})
            out.append((merged, ma * mb * 2 * a * b))
    k = m.u_power
    if k >= 1:
        for power, mult in traces:
            out.append((m.adjust(u_power=k + power, delta={power: -1}), 2 * k * power * mult))
    return _collect(out)


def _apply_image(p: TracePolynomial[C], image: Any, factor: Any = None) -> TracePolynomial[C]:
    ring = p.ring
    out: dict[TraceMonomial, C] = {}
    for m, c in p:
        for target, a in image(m):
            value = c * a
            out[target] = out[target] + value if target in out else value
    result = TracePolynomial(out, ring)
    return result if factor is None else result.scale(factor)


def apply_D(p: TracePolynomial[C]) -> TracePolynomial[C]:
    return _apply_image(p, d_image)


def apply_L(p: TracePolynomial[C]) -> TracePolynomial[C]:
    return _apply_image(p, l_image)


def apply_D_tilde(p: TracePolynomial[C]) -> TracePolynomial[C]:
    return _apply_image(p, d_tilde_image)


def apply_T(p: TracePolynomial[C]) -> TracePolynomial[C]:
    return TracePolynomial(((m, c * m.trace_degree) for m, c in p), p.ring)


def apply_DN(p: TracePolynomial[C], N: int) -> TracePolynomial[C]:
    """D(p) - L(p)/N^2."""
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    return apply_D(p) - apply_L(p).scale(Fraction(1, N * N))


def apply_operator(tag: str, p: TracePolynomial[C], N: int | None = None) -> TracePolynomial[C]:
    if tag == "D":
        return apply_D(p)
    if tag == "L":
        return apply_L(p)
    if tag == "D_tilde":
        return apply_D_tilde(p)
    if tag == "T":
        return apply_T(p)
    if tag == "D_N":
        if N is None:
            raise ValueError("operator D_N needs N")
        return apply_DN(p, N)
    raise ValueError(f"unknown operator tag {tag!r}; expected one of {OPERATOR_TAGS}")
