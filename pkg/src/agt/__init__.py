"""Executable finite-scale constructions from geometric approximate group theory."""

from .errors import AGTError, BudgetExceeded
from .groups import BS12, FreeAbelian, FreeGroup, make_model
from .words import CyclicWord, Word, parse_word

__all__ = [
    "AGTError",
    "BS12",
    "BudgetExceeded",
    "CyclicWord",
    "FreeAbelian",
    "FreeGroup",
    "Word",
    "make_model",
    "parse_word",
]
__version__ = "0.1.0"
