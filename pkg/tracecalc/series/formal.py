"""Truncated formal power series in z with numpy coefficients.

A series of order K keeps c_0 ... c_K. Coefficients are complex scalars
(1-D array) or polynomials in u (2-D array, column j = coefficient of u^j).
Every operation is exact modulo z^{K+1}; cost is O(K^2) per product and
O(K^3) for composition and reversion.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np
from loguru import logger

from tracecalc.algebra.rings import COMPLEX
from tracecalc.algebra.univariate import SingleVarPoly
from tracecalc.errors import ReversionError


class FormalSeries:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Any, order: int | None = None):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 0:
            c = c.reshape(1)
        if c.ndim > 2:
            raise ValueError(f"coefficients must be 1-D or 2-D, got shape {c.shape}")
        if order is None:
            order = c.shape[0] - 1
        if order < 0:
            raise ValueError(f"order must be non-negative, got {order}")
        if c.shape[0] > order + 1:
            c = c[: order + 1]
        elif c.shape[0] < order + 1:
            pad = np.zeros((order + 1 - c.shape[0],) + c.shape[1:], dtype=complex)
            c = np.concatenate([c, pad])
        c.setflags(write=False)
        self._c = c

    # ── constructors ────────────────────────────────────────────────

    @classmethod
    def zero(cls, order: int) -> FormalSeries:
        return cls(np.zeros(order + 1), order)

    @classmethod
    def constant(cls, value: complex, order: int) -> FormalSeries:
        return cls([value], order)

    @classmethod
    def z(cls, order: int) -> FormalSeries:
        return cls([0, 1], order)

    @classmethod
    def geometric(cls, order: int, ratio: complex = 1) -> FormalSeries:
        """1 + r z + r^2 z^2 + ... = 1/(1 - r z)."""
        return cls([ratio**n for n in range(order + 1)], order)

    # ── accessors ───────────────────────────────────────────────────

    @property
    def order(self) -> int:
        return self._c.shape[0] - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def polynomial_valued(self) -> bool:
        return self._c.ndim == 2

    def coefficient(self, n: int) -> Any:
        """c_n: a complex number or a SingleVarPoly in u."""
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient {n} outside 0..{self.order}")
        if self.polynomial_valued:
            return SingleVarPoly(self._c[n].tolist(), COMPLEX, "u")
        return complex(self._c[n])

    def truncate(self, order: int) -> FormalSeries:
        return FormalSeries(self._c[: order + 1], min(order, self.order))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    def order_norms(self) -> list[float]:
        """max |coefficient| at each order."""
        flat = self._c.reshape(self.order + 1, -1)
        return [float(np.max(np.abs(row))) for row in flat]

    def __repr__(self) -> str:
        return f"FormalSeries(order={self.order}, coeffs={self._c!r})"

    # ── arithmetic ──────────────────────────────────────────────────

    @staticmethod
    def _align(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if a.ndim == b.ndim == 1:
            return a, b
        a2 = a if a.ndim == 2 else a[:, None]
        b2 = b if b.ndim == 2 else b[:, None]
        width = max(a2.shape[1], b2.shape[1])
        a2 = np.pad(a2, ((0, 0), (0, width - a2.shape[1])))
        b2 = np.pad(b2, ((0, 0), (0, width - b2.shape[1])))
        return a2, b2

    def _lift(self, other: Any) -> FormalSeries:
        if isinstance(other, FormalSeries):
            return other
        return FormalSeries.constant(complex(other), self.order)

    def __add__(self, other: Any) -> FormalSeries:
        o = self._lift(other)
        order = min(self.order, o.order)
        a, b = self._align(self._c[: order + 1], o._c[: order + 1])
        return FormalSeries(a + b, order)

    __radd__ = __add__

    def __neg__(self) -> FormalSeries:
        return FormalSeries(-self._c, self.order)

    def __sub__(self, other: Any) -> FormalSeries:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> FormalSeries:
        return (-self) + other

    def __mul__(self, other: Any) -> FormalSeries:
        if not isinstance(other, FormalSeries):
            return FormalSeries(self._c * complex(other), self.order)
        order = min(self.order, other.order)
        a, b = self._c[: order + 1], other._c[: order + 1]
        if a.ndim == b.ndim == 1:
            return FormalSeries(np.convolve(a, b)[: order + 1], order)
        a2 = a if a.ndim == 2 else a[:, None]
        b2 = b if b.ndim == 2 else b[:, None]
        out = np.zeros((order + 1, a2.shape[1] + b2.shape[1] - 1), dtype=complex)
        for n in range(order + 1):
            for i in range(n + 1):
                out[n] += np.convolve(a2[i], b2[n - i])
        return FormalSeries(out, order)

    def __rmul__(self, other: Any) -> FormalSeries:
        return self * other

    def __truediv__(self, other: Any) -> FormalSeries:
        if isinstance(other, FormalSeries):
            return self * other.reciprocal()
        return FormalSeries(self._c / complex(other), self.order)

    def __pow__(self, n: int) -> FormalSeries:
        result = FormalSeries.constant(1, self.order)
        for _ in range(n):
            result = result * self
        return result

    def _require_scalar(self, what: str) -> None:
        if self.polynomial_valued:
            raise ValueError(f"{what} needs complex coefficients")

    def reciprocal(self) -> FormalSeries:
        """1/f for f(0) != 0."""
        self._require_scalar("reciprocal")
        c = self._c
        if c[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        out = np.zeros_like(c)
        out[0] = 1 / c[0]
        for n in range(1, self.order + 1):
            out[n] = -np.dot(c[1 : n + 1], out[n - 1 :: -1][:n]) / c[0]
        return FormalSeries(out, self.order)

    def exp(self) -> FormalSeries:
        """e^f = e^{c_0} * exp(f - c_0), the latter by g_n = (1/n) sum_j j f_j g_{n-j}."""
        self._require_scalar("exp")
        c = self._c
        g = np.zeros_like(c)
        g[0] = 1
        for n in range(1, self.order + 1):
            j = np.arange(1, n + 1)
            g[n] = np.sum(j * c[1 : n + 1] * g[n - j]) / n
        return FormalSeries(np.exp(c[0]) * g, self.order)

    def derivative(self) -> FormalSeries:
        """d/dz, keeping the order (the top coefficient becomes 0)."""
        n = np.arange(1, self.order + 1)
        shape = (-1,) + (1,) * (self._c.ndim - 1)
        return FormalSeries(self._c[1:] * n.reshape(shape), self.order)

    def shift(self, n: int = 1) -> FormalSeries:
        """z^n f."""
        pad = np.zeros((n,) + self._c.shape[1:], dtype=complex)
        return FormalSeries(np.concatenate([pad, self._c]), self.order)

    def scale_variable(self, a: complex) -> FormalSeries:
        """f(a z)."""
        powers = np.array([a**n for n in range(self.order + 1)], dtype=complex)
        shape = (-1,) + (1,) * (self._c.ndim - 1)
        return FormalSeries(self._c * powers.reshape(shape), self.order)

    def compose(self, g: FormalSeries) -> FormalSeries:
        """f(g(z)) for g(0) = 0, by Horner's rule."""
        if g.polynomial_valued:
            raise ValueError("inner series must have complex coefficients")
        if abs(g._c[0]) != 0:
            raise ValueError("inner series must have zero constant term")
        order = min(self.order, g.order)
        result = FormalSeries(self._c[order : order + 1], order)
        for n in range(order - 1, -1, -1):
            result = result * g + FormalSeries(self._c[n : n + 1], order)
        return result

    def __call__(self, x: complex) -> Any:
        """Numeric value of the truncated polynomial at z = x."""
        acc = np.zeros(self._c.shape[1:], dtype=complex)
        for c in self._c[::-1]:
            acc = acc * x + c
        return acc if self.polynomial_valued else complex(acc)

    def revert(self) -> FormalSeries:
        """Compositional inverse g with f(g(z)) = z + O(z^{K+1}), by Newton iteration."""
        self._require_scalar("revert")
        c = self._c
        if abs(c[0]) != 0:
            raise ReversionError("series with nonzero constant term cannot be reverted")
        if self.order < 1 or c[1] == 0:
            raise ReversionError("series with zero linear coefficient cannot be reverted")
        K = self.order
        z = FormalSeries.z(K)
        g = z / c[1]
        fprime = self.derivative()
        steps = math.ceil(math.log2(K + 1)) + 1
        for _ in range(steps):
            g = g - (self.compose(g) - z) * fprime.compose(g).reciprocal()
        logger.debug(f"series reversion: order {K}, {steps} Newton steps")
        return g


def series_revert(f: FormalSeries) -> FormalSeries:
    return f.revert()
