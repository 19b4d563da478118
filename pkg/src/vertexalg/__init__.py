"""Exact symbolic engine for integer-indexed nonassociative products.

Free algebra over a symbol alphabet, ideal generator families with
certified truncation, a projection/rewrite engine, concrete models with
commutative and operator semantics, interval-supported section algebra,
and a batch verification CLI.
"""

from .intervals import Piece, SupportSet, overlap_core, piece
from .parsing import ParseError, parse, to_text
from .terms import (
    Alphabet,
    Element,
    GradeReport,
    Leaf,
    Node,
    Symbol,
    binom,
    canonicalize,
    derivation_D,
    D_power,
    falling,
    grade,
    is_homogeneous,
    is_monomial,
    parity,
    product,
)

__all__ = [
    "Alphabet",
    "Element",
    "GradeReport",
    "Leaf",
    "Node",
    "ParseError",
    "Piece",
    "SupportSet",
    "Symbol",
    "binom",
    "canonicalize",
    "derivation_D",
    "D_power",
    "falling",
    "grade",
    "is_homogeneous",
    "is_monomial",
    "overlap_core",
    "parity",
    "parse",
    "piece",
    "product",
    "to_text",
]
