"""Operators materialized as dense matrices on a graded block C^(k)[u, v]."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from tracecalc.algebra.monomial import TraceMonomial, basis_index, grade_basis
from tracecalc.algebra.polynomial import TracePolynomial
from tracecalc.algebra.rings import RATIONAL, ScalarRing
from tracecalc.errors import GradeEscapeError
from tracecalc.operators.intertwining import OPERATOR_TAGS, apply_operator


@dataclass(frozen=True)
class GradedOperatorMatrix:
    """Column j holds the image of ``basis[j]`` in the same basis."""

    grade: int
    basis: tuple[TraceMonomial, ...]
    entries: tuple[tuple[Any, ...], ...]
    tag: str
    ring: ScalarRing[Any] = RATIONAL
    N: int | None = None

    def __post_init__(self) -> None:
        n = len(self.basis)
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValueError(f"matrix on grade {self.grade} must be {n}x{n}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def identity(cls, k: int, ring: ScalarRing[Any] = RATIONAL, tag: str = "I") -> GradedOperatorMatrix:
        basis = grade_basis(k)
        n = len(basis)
        rows = tuple(
            tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)
        )
        return cls(k, basis, rows, tag, ring)

    def _nonzero_rows(self) -> list[list[tuple[int, Any]]]:
        return [[(j, a) for j, a in enumerate(row) if not self.ring.is_zero(a)] for row in self.entries]

    def apply(self, coords: Sequence[Any]) -> list[Any]:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        out = []
        for row in self._nonzero_rows():
            acc = self.ring.zero
            for j, a in row:
                acc = acc + a * coords[j]
            out.append(acc)
        return out

    def apply_polynomial(self, p: TracePolynomial[Any]) -> TracePolynomial[Any]:
        """Apply to the grade-k component of p."""
        return from_coordinates(
            self.apply(coordinates(p.homogeneous_component(self.grade), self.grade)),
            self.grade,
            self.ring,
        )

    def matmul(self, other: GradedOperatorMatrix) -> GradedOperatorMatrix:
        if other.grade != self.grade:
            raise ValueError(f"grade mismatch: {self.grade} vs {other.grade}")
        n = self.dim
        right = other._nonzero_rows()
        rows = []
        for row in self._nonzero_rows():
            acc = [self.ring.zero] * n
            for mid, a in row:
                for j, b in right[mid]:
                    acc[j] = acc[j] + a * b
            rows.append(tuple(acc))
        return GradedOperatorMatrix(
            self.grade, self.basis, tuple(rows), f"{self.tag}*{other.tag}", self.ring, self.N
        )

    def __matmul__(self, other: GradedOperatorMatrix) -> GradedOperatorMatrix:
        return self.matmul(other)

    def power(self, n: int) -> GradedOperatorMatrix:
        result = GradedOperatorMatrix.identity(self.grade, self.ring)
        for _ in range(n):
            result = result.matmul(self)
        return GradedOperatorMatrix(
            self.grade, self.basis, result.entries, f"{self.tag}^{n}", self.ring, self.N
        )

    @property
    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for row in self.entries for a in row)

    def to_numpy(self, t: Any = None) -> np.ndarray:
        """Entries as a complex array (float entries when the imaginary part vanishes)."""
        arr = np.array(
            [[self.ring.to_complex(a, t) for a in row] for row in self.entries], dtype=complex
        ).reshape(self.dim, self.dim)
        return arr.real.copy() if not np.any(arr.imag) else arr

    def labels(self) -> list[str]:
        return [str(m) for m in self.basis]

    def to_csv(self, path: Path | None = None) -> str:
        """Rows and columns labelled by canonical monomial strings."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"{self.tag}|grade={self.grade}", *self.labels()])
        for label, row in zip(self.labels(), self.entries):
            writer.writerow([label, *(self.ring.format(a) for a in row)])
        text = buf.getvalue()
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        return text


def coordinates(p: TracePolynomial[Any], k: int) -> list[Any]:
    """Coefficients of a grade-k polynomial in the order of grade_basis(k)."""
    index = basis_index(k)
    coords = [p.ring.zero] * len(index)
    for m, c in p:
        if m not in index:
            raise ValueError(f"{m} has trace degree {m.trace_degree}, not {k}")
        coords[index[m]] = c
    return coords


def from_coordinates(coords: Sequence[Any], k: int, ring: ScalarRing[Any] = RATIONAL) -> TracePolynomial[Any]:
    return TracePolynomial(zip(grade_basis(k), coords), ring)


def operator_matrix(
    tag: str, k: int, N: int | None = None, ring: ScalarRing[Any] = RATIONAL
) -> GradedOperatorMatrix:
    if tag not in OPERATOR_TAGS:
        raise ValueError(f"unknown operator tag {tag!r}; expected one of {OPERATOR_TAGS}")
    if (tag == "D_N") != (N is not None):
        raise ValueError("N is required for D_N and only for D_N")
    basis = grade_basis(k)
    index = basis_index(k)
    n = len(basis)
    columns: list[list[Any]] = []
    for b in basis:
        image = apply_operator(tag, TracePolynomial.monomial(b, Fraction(1), RATIONAL), N)
        col = [ring.zero] * n
        for m, c in image:
            if m not in index:
                raise GradeEscapeError(f"{tag}({b}) produced {m} outside grade {k}")
            col[index[m]] = ring.coerce(c)
        columns.append(col)
    rows = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
    return GradedOperatorMatrix(k, basis, rows, tag, ring, N)
