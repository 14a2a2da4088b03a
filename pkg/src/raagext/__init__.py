"""Exact computation in right-angled Artin groups and their extension graphs."""

from .graphs import GraphError, GraphParseError, SimplicialGraph, builtin_graph
from .words import (Factorization, GroupElement, WordParseError, format_word,
                    parse_word)

__all__ = [
    "SimplicialGraph", "GraphError", "GraphParseError", "builtin_graph",
    "GroupElement", "Factorization", "WordParseError",
    "parse_word", "format_word",
]

__version__ = "0.1.0"
