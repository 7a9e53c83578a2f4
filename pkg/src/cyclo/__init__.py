"""Exact mutation patterns, tropical signs and quasi-Cartan congruences for
rank-3 cluster-cyclic exchange matrices."""

from .core import Mat, Perm, Rational, as_rational, find_skew_symmetrizer
from .patterns import PatternNode, PatternTree, mutate_c, mutate_exchange, mutate_g
from .signs import is_cluster_cyclic, is_cyclic, tropical_signs

__all__ = [
    "Mat", "Perm", "Rational", "as_rational", "find_skew_symmetrizer",
    "PatternNode", "PatternTree", "mutate_c", "mutate_exchange", "mutate_g",
    "is_cluster_cyclic", "is_cyclic", "tropical_signs",
]
__version__ = "0.1.0"
