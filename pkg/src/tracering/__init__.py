"""Exact computations in trace algebras of generic matrices."""

from .errors import (CutoffExceeded, NoSolution, ParseError, TraceRingError, UnsupportedError,
                     VerificationError)
from .identities import fundamental_identity, multilinear_tuples, nagata_higman
from .matrix_eval import GenericMatrixSpec, pi
from .trace_algebra import TracePolynomial
from .words import canonicalize, necklaces, parse_tuple

__version__ = "0.1.0"

__all__ = [
    "CutoffExceeded", "NoSolution", "ParseError", "TraceRingError", "UnsupportedError",
    "VerificationError", "fundamental_identity", "multilinear_tuples", "nagata_higman",
    "GenericMatrixSpec", "pi", "TracePolynomial", "canonicalize", "necklaces", "parse_tuple",
]
