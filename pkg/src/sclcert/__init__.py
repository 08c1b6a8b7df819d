"""Exact stable commutator length in free groups, with certificates.

The package computes scl of homologically trivial chains by exact rational
linear programming over combinatorial surface pieces, extracts extremal
surfaces, and turns norm gaps of amalgamated classes into machine-checkable
incompressibility certificates.
"""

from .scl import SclResult, scl, scl_of_word
from .surface import ExtremalSurface, extremal_surface
from .words import (
    Chain,
    CyclicWord,
    Letter,
    Word,
    commutator,
    cyclic_reduce,
    is_homologically_trivial,
    is_proper_power,
    parse_chain,
    parse_word,
    product_of_commutators,
    random_reduced_word,
    seifert_family_word,
)

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "CyclicWord",
    "ExtremalSurface",
    "Letter",
    "SclResult",
    "Word",
    "commutator",
    "cyclic_reduce",
    "extremal_surface",
    "is_homologically_trivial",
    "is_proper_power",
    "parse_chain",
    "parse_word",
    "product_of_commutators",
    "random_reduced_word",
    "scl",
    "scl_of_word",
    "seifert_family_word",
    "__version__",
]
