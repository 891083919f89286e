"""Exception hierarchy shared by the library and the command line."""


class TraceRingError(Exception):
    """Base class for all errors raised by :mod:`tracering`."""

    exit_code = 1


class ParseError(TraceRingError, ValueError):
    exit_code = 2


class VerificationError(TraceRingError):
    """A computed object failed an exactness check (identity, rewrite, relation)."""

    exit_code = 3


class UnsupportedError(TraceRingError):
    """Requested matrix size has no known Nagata-Higman number or is out of range."""

    exit_code = 4


class CutoffExceeded(TraceRingError):
    exit_code = 5


class NoSolution(TraceRingError, ArithmeticError):
    """Right-hand side lies outside the column span."""

    exit_code = 3
