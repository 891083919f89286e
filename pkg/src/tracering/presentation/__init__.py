"""Generators, relations, bounds and Hilbert functions of trace algebras."""

from .bounds import BoundInput, derksen_bound, generic_bound, hsop_bound, krull_dimension, parse_degrees
from .certify import (CertificationReport, RelationCandidate, certify_relation_table, load_relation_table,
                      permute_letters)
from .generators import load_c33_generators, minimal_generators, verify_generating_set
from .hilbert import hilbert_function, hilbert_function_presented
from .hsop import HsopTable, hsop_consistency, load_c33_hsop
from .relations import RelationIdeal, minimal_relation_counts, minimal_relations, relation_space

__all__ = [
    "BoundInput", "derksen_bound", "generic_bound", "hsop_bound", "krull_dimension", "parse_degrees",
    "CertificationReport", "RelationCandidate", "certify_relation_table", "load_relation_table",
    "permute_letters", "load_c33_generators", "minimal_generators", "verify_generating_set",
    "hilbert_function", "hilbert_function_presented", "HsopTable", "hsop_consistency", "load_c33_hsop",
    "RelationIdeal", "minimal_relation_counts", "minimal_relations", "relation_space",
]
