"""Exact relational semantics for electrical circuits with information wires."""

from .field import RatFunc, Poly, X, parse_ratfunc, rf_normalize, rf_arith, rf_eval
from .affine import (
    AffineRelation, canonicalize, compose, tensor, converse, contains,
    functionality, from_constraints, intersect,
)
from .diagram import (
    Sort, E, N, Term, Gen, Box, Id, Swap, Seq, Par, sort_check, parse_term, pretty_print,
)
from .semantics import denote, denote_many

__all__ = [
    "RatFunc", "Poly", "X", "parse_ratfunc", "rf_normalize", "rf_arith", "rf_eval",
    "AffineRelation", "canonicalize", "compose", "tensor", "converse", "contains",
    "functionality", "from_constraints", "intersect",
    "Sort", "E", "N", "Term", "Gen", "Box", "Id", "Swap", "Seq", "Par", "sort_check",
    "parse_term", "pretty_print", "denote", "denote_many",
]

__version__ = "0.1.0"
