"""Lexicographically minimum replica placement on untangled multitrees."""

from .errors import InputError, InvariantViolation, LexPlaceError, ValidationError
from .graph import (
    Digraph,
    Verdict,
    canonicalize,
    failure_aggregate,
    failure_number,
    is_multitree,
    is_untangled,
    parse_graph,
    read_graph,
)
from .decomposer import decompose
from .dp import Solution, solve
from .oracle import brute_force_lsp

__all__ = [
    "Digraph",
    "InputError",
    "InvariantViolation",
    "LexPlaceError",
    "Solution",
    "ValidationError",
    "Verdict",
    "brute_force_lsp",
    "canonicalize",
    "decompose",
    "failure_aggregate",
    "failure_number",
    "is_multitree",
    "is_untangled",
    "parse_graph",
    "read_graph",
    "solve",
]

__version__ = "0.1.0"
