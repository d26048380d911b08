"""Exceptions raised by tracecalc.

Library code raises these; only the CLI turns them into exit codes.
"""


class TraceCalcError(Exception):
    """Base class for every error raised by tracecalc."""

    exit_code: int = 1


class PolynomialParseError(TraceCalcError, ValueError):
    """Malformed polynomial, monomial or parameter input."""

    exit_code = 2


class RingMismatchError(TraceCalcError, TypeError):
    """Two operands live over different coefficient rings."""


class DimensionMismatchError(TraceCalcError, ValueError):
    """A matrix argument has the wrong shape."""


class MissingSubstitutionError(TraceCalcError, KeyError):
    """trace_eval was not given a value for some v_j."""


class NonScalarError(TraceCalcError, ValueError):
    """A scalar trace polynomial (independent of u) was required."""


class BlockSizeError(TraceCalcError, ValueError):
    """A graded block is larger than the configured cap."""

    exit_code = 3


class GradeEscapeError(TraceCalcError, RuntimeError):
    """An operator produced a term outside its input grade (a bug)."""


class NilpotencyError(TraceCalcError, RuntimeError):
    """The reduced operator failed to vanish at power k+1 on grade k (a bug)."""


class ReversionError(TraceCalcError, ValueError):
    """A power series has no compositional inverse."""
