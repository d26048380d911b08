"""Coefficient rings for trace polynomials.

Four rings are provided:

- ``RATIONAL``  exact ``fractions.Fraction`` arithmetic.
- ``TPOLY``     polynomials in t over sympy's ``QQ``, closed under formal
                integration from 0 to t.
- ``EXPTPOLY``  finite sums of ``e^{r t} * body(t)`` with rational rates r;
                the exact home of transform coefficients such as ``e^{-t}(1 - t)``.
- ``COMPLEX``   double-precision complex numbers.

Coefficients use Python operators directly (``+``, ``*``, ``-``); the ring
object supplies constants, coercion, JSON encoding and numeric conversion, so
exactness is fixed by which ring a polynomial was built over.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Generic, Iterable, TypeVar

import numpy as np
from sympy.polys.densetools import dup_integrate
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from tracecalc.errors import PolynomialParseError

C = TypeVar("C")

Number = int | Fraction


def as_fraction(value: Any) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise PolynomialParseError(f"not a rational number: {value!r}") from e
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def fraction_to_str(value: Fraction) -> str:
    """Serialize a Fraction as "p/q" (denominator always written)."""
    return f"{value.numerator}/{value.denominator}"


# ── TPoly ───────────────────────────────────────────────────────────

T_RING, T_GEN = ring("t", QQ)


def _to_qq(value: Fraction) -> Any:
    return QQ(value.numerator, value.denominator)


def _from_qq(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class TPoly:
    """Polynomial in t over QQ, c0 + c1 t + ... + cd t^d, backed by a sympy ``PolyElement``."""

    __slots__ = ("_p",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        self._p: PolyElement = T_RING.from_dict(
            {(i,): _to_qq(as_fraction(c)) for i, c in enumerate(coeffs)}
        )

    @classmethod
    def _wrap(cls, poly: PolyElement) -> TPoly:
        obj = object.__new__(cls)
        obj._p = poly
        return obj

    @classmethod
    def const(cls, value: Any) -> TPoly:
        return cls((value,))

    @classmethod
    def t(cls) -> TPoly:
        return cls._wrap(T_GEN)

    @property
    def poly(self) -> PolyElement:
        """The underlying element of ``QQ[t]``."""
        return self._p

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(self.coefficient(i) for i in range(self.degree + 1))

    @property
    def degree(self) -> int:
        """Degree in t; the zero polynomial has degree -1."""
        return int(self._p.degree()) if self._p else -1

    def coefficient(self, n: int) -> Fraction:
        c = self._p.get((n,))
        return _from_qq(c) if c is not None else Fraction(0)

    @staticmethod
    def _lift(other: Any) -> TPoly | None:
        if isinstance(other, TPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TPoly((other,))
        return None

    def __add__(self, other: Any) -> TPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TPoly._wrap(self._p + o._p)

    __radd__ = __add__

    def __neg__(self) -> TPoly:
        return TPoly._wrap(-self._p)

    def __sub__(self, other: Any) -> TPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TPoly._wrap(self._p - o._p)

    def __rsub__(self, other: Any) -> TPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TPoly._wrap(o._p - self._p)

    def __mul__(self, other: Any) -> TPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TPoly._wrap(self._p * o._p)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> TPoly:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TPoly._wrap(self._p.quo_ground(_to_qq(Fraction(other))))
        return NotImplemented

    def __pow__(self, n: int) -> TPoly:
        return TPoly._wrap(self._p**n)

    def __eq__(self, other: Any) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._p == o._p

    def __hash__(self) -> int:
        if self.degree <= 0:
            return hash(self.coefficient(0))
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self._p)

    def __call__(self, t: Any) -> Any:
        """Evaluate at t; exact for int/Fraction t, float for float t."""
        if isinstance(t, (float, complex)):
            return np.polyval([float(c) for c in reversed(self.coeffs)], t) if self._p else 0.0
        return _from_qq(self._p.evaluate(T_GEN, _to_qq(as_fraction(t))))

    def integrate(self) -> TPoly:
        """Formal antiderivative vanishing at t = 0."""
        return TPoly._wrap(T_RING.from_list(dup_integrate(self._p.to_dense(), 1, QQ)))

    def derivative(self) -> TPoly:
        return TPoly._wrap(self._p.diff(T_GEN))

    def to_json(self) -> list[str]:
        return [fraction_to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Iterable[Any]) -> TPoly:
        return cls(as_fraction(x) for x in data)

    def __str__(self) -> str:
        if not self._p:
            return "0"
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                tpow = "t" if i == 1 else f"t^{i}"
                body = tpow if mag == 1 else f"{mag}*{tpow}"
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"TPoly({str(self)!r})"


# ── ExpTPoly ────────────────────────────────────────────────────────


def format_rate(rate: Fraction) -> str:
    """Render e^{r t} for a rational rate, e.g. -3/2 -> "e^{-3t/2}"."""
    if rate == 0:
        return "1"
    sign = "-" if rate < 0 else ""
    num, den = abs(rate.numerator), rate.denominator
    head = "t" if num == 1 else f"{num}t"
    tail = "" if den == 1 else f"/{den}"
    return f"e^{{{sign}{head}{tail}}}"


class ExpTPoly:
    """Finite sum of e^{rate * t} * body(t), rates rational, bodies TPoly."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Any, TPoly] | Iterable[tuple[Any, TPoly]] = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[Fraction, TPoly] = {}
        for rate, body in items:
            r = as_fraction(rate)
            b = body if isinstance(body, TPoly) else TPoly.const(body)
            acc[r] = acc.get(r, TPoly()) + b
        self._terms: dict[Fraction, TPoly] = {r: b for r, b in sorted(acc.items()) if b}

    @classmethod
    def exp(cls, rate: Any, body: TPoly | Number = 1) -> ExpTPoly:
        """e^{rate t} * body."""
        b = body if isinstance(body, TPoly) else TPoly.const(body)
        return cls({as_fraction(rate): b})

    @classmethod
    def const(cls, value: Any) -> ExpTPoly:
        return cls.exp(0, TPoly.const(value))

    @property
    def terms(self) -> dict[Fraction, TPoly]:
        return dict(self._terms)

    def rates(self) -> list[Fraction]:
        return list(self._terms)

    def body(self, rate: Any) -> TPoly:
        return self._terms.get(as_fraction(rate), TPoly())

    @staticmethod
    def _lift(other: Any) -> ExpTPoly | None:
        if isinstance(other, ExpTPoly):
            return other
        if isinstance(other, TPoly):
            return ExpTPoly({Fraction(0): other})
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ExpTPoly({Fraction(0): TPoly.const(other)})
        return None

    def __add__(self, other: Any) -> ExpTPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExpTPoly(list(self._terms.items()) + list(o._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> ExpTPoly:
        return ExpTPoly({r: -b for r, b in self._terms.items()})

    def __sub__(self, other: Any) -> ExpTPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> ExpTPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> ExpTPoly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExpTPoly(
            (r1 + r2, b1 * b2)
            for r1, b1 in self._terms.items()
            for r2, b2 in o._terms.items()
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> ExpTPoly:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ExpTPoly({r: b / other for r, b in self._terms.items()})
        return NotImplemented

    def __eq__(self, other: Any) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        if not self._terms:
            return hash(0)
        if list(self._terms) == [0]:
            return hash(self._terms[Fraction(0)])
        return hash(tuple(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def at(self, t: float) -> float:
        """Numeric value at a real t."""
        tf = float(t)
        return sum(math.exp(float(r) * tf) * b(tf) for r, b in self._terms.items())

    def at_exact_rate_zero(self, t: Any) -> Fraction:
        """Exact value at t when only the e^{0 t} term is present."""
        if any(r != 0 for r in self._terms):
            raise ValueError("value is transcendental: nonzero exponential rate")
        return self.body(0)(as_fraction(t))

    def to_json(self) -> dict[str, Any]:
        return {
            "exp": [
                {"rate": fraction_to_str(r), "tpoly": b.to_json()}
                for r, b in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> ExpTPoly:
        return cls((entry["rate"], TPoly.from_json(entry["tpoly"])) for entry in data["exp"])

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        # Decay rates render from slowest to fastest, i.e. largest rate first.
        for r in sorted(self._terms, reverse=True):
            b = self._terms[r]
            if r == 0:
                parts.append(str(b))
            elif b == 1:
                parts.append(format_rate(r))
            else:
                parts.append(f"{format_rate(r)}·({b})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ExpTPoly({str(self)!r})"


# ── Rings ───────────────────────────────────────────────────────────


class ScalarRing(ABC, Generic[C]):
    """A coefficient ring: constants, coercion, encoding and numeric conversion."""

    name: str = ""
    exact: bool = True

    @property
    @abstractmethod
    def zero(self) -> C:
        pass

    @property
    @abstractmethod
    def one(self) -> C:
        pass

    @abstractmethod
    def coerce(self, value: Any) -> C:
        """Bring an int, Fraction or compatible value into the ring."""
        pass

    @abstractmethod
    def encode(self, value: C) -> Any:
        """JSON-ready form of a coefficient."""
        pass

    @abstractmethod
    def decode(self, data: Any) -> C:
        pass

    @abstractmethod
    def to_complex(self, value: C, t: Any = None) -> complex:
        """Numeric value; rings depending on t need ``t``."""
        pass

    def is_zero(self, value: C) -> bool:
        return not value

    def format(self, value: C) -> str:
        return str(value)

    def __repr__(self) -> str:
        return f"<ring {self.name}>"


class RationalRing(ScalarRing[Fraction]):
    name = "rational"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def coerce(self, value: Any) -> Fraction:
        return as_fraction(value)

    def encode(self, value: Fraction) -> str:
        return fraction_to_str(value)

    def decode(self, data: Any) -> Fraction:
        return as_fraction(data)

    def to_complex(self, value: Fraction, t: Any = None) -> complex:
        return complex(float(value))


class TPolyRing(ScalarRing[TPoly]):
    name = "tpoly"

    @property
    def zero(self) -> TPoly:
        return TPoly()

    @property
    def one(self) -> TPoly:
        return TPoly.const(1)

    def coerce(self, value: Any) -> TPoly:
        if isinstance(value, TPoly):
            return value
        return TPoly.const(as_fraction(value))

    def encode(self, value: TPoly) -> dict[str, list[str]]:
        return {"tpoly": value.to_json()}

    def decode(self, data: Any) -> TPoly:
        if isinstance(data, dict) and "tpoly" in data:
            return TPoly.from_json(data["tpoly"])
        return TPoly.const(as_fraction(data))

    def to_complex(self, value: TPoly, t: Any = None) -> complex:
        if t is None:
            raise ValueError("t is required to evaluate a TPoly coefficient")
        tt = t if isinstance(t, float) else as_fraction(t)
        return complex(float(value(tt)))


class ExpTPolyRing(ScalarRing[ExpTPoly]):
    name = "exptpoly"

    @property
    def zero(self) -> ExpTPoly:
        return ExpTPoly()

    @property
    def one(self) -> ExpTPoly:
        return ExpTPoly.const(1)

    def coerce(self, value: Any) -> ExpTPoly:
        if isinstance(value, ExpTPoly):
            return value
        if isinstance(value, TPoly):
            return ExpTPoly.exp(0, value)
        return ExpTPoly.const(as_fraction(value))

    def encode(self, value: ExpTPoly) -> dict[str, Any]:
        return value.to_json()

    def decode(self, data: Any) -> ExpTPoly:
        if isinstance(data, dict) and "exp" in data:
            return ExpTPoly.from_json(data)
        if isinstance(data, dict) and "tpoly" in data:
            return ExpTPoly.exp(0, TPoly.from_json(data["tpoly"]))
        return ExpTPoly.const(as_fraction(data))

    def to_complex(self, value: ExpTPoly, t: Any = None) -> complex:
        if t is None:
            raise ValueError("t is required to evaluate an exponential coefficient")
        return complex(value.at(float(t)))


class ComplexRing(ScalarRing[complex]):
    name = "complex"
    exact = False

    @property
    def zero(self) -> complex:
        return 0j

    @property
    def one(self) -> complex:
        return 1 + 0j

    def coerce(self, value: Any) -> complex:
        if isinstance(value, Fraction):
            return complex(float(value))
        if isinstance(value, (TPoly, ExpTPoly)):
            raise TypeError("evaluate t-dependent coefficients before converting to complex")
        return complex(value)

    def encode(self, value: complex) -> list[float]:
        return [value.real, value.imag]

    def decode(self, data: Any) -> complex:
        if isinstance(data, (list, tuple)) and len(data) == 2:
            return complex(float(data[0]), float(data[1]))
        if isinstance(data, str):
            try:
                return complex(float(Fraction(data)))
            except (ValueError, ZeroDivisionError):
                return complex(data.replace(" ", ""))
        return complex(data)

    def to_complex(self, value: complex, t: Any = None) -> complex:
        return complex(value)

    def format(self, value: complex) -> str:
        if value.imag == 0:
            return f"{value.real:.12g}"
        return f"({value.real:.12g}{value.imag:+.12g}j)"


RATIONAL = RationalRing()
TPOLY = TPolyRing()
EXPTPOLY = ExpTPolyRing()
COMPLEX = ComplexRing()

RINGS: dict[str, ScalarRing[Any]] = {r.name: r for r in (RATIONAL, TPOLY, EXPTPOLY, COMPLEX)}


def ring_by_name(name: str) -> ScalarRing[Any]:
    try:
        return RINGS[name]
    except KeyError:
        raise PolynomialParseError(f"unknown coefficient ring: {name!r}") from None
