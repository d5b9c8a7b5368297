"""Modal mu-calculus formulas, parity games and formula-over-game products."""
from __future__ import annotations

__version__ = "0.1.0"

from .formula import ParseTree, parse, parse_sentence, to_text
from .structures import Structure, enumerate_structures, load, store

__all__ = ["ParseTree", "Structure", "enumerate_structures", "load", "parse", "parse_sentence",
           "store", "to_text", "__version__"]
