"""Groebner bases, ideal dimension, saturation and membership."""

from ._kernel import IMPLEMENTATION
from .dimension import ideal_dimension, saturation, is_member
from .engine import EMPTY, DEFAULT_PAIR_LIMIT, GroebnerBasis, GroebnerTimeout, buchberger
from .orders import MonomialOrder

__all__ = [
    "IMPLEMENTATION", "EMPTY", "DEFAULT_PAIR_LIMIT", "GroebnerBasis", "GroebnerTimeout",
    "MonomialOrder", "buchberger", "ideal_dimension", "saturation", "is_member",
]
