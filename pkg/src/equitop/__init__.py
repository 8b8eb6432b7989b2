"""Exact equivariant invariants of finite T0 spaces and simplicial complexes.

The package computes equivariant LS-category, the descending family of
path-length-bounded motion-planning invariants and its limit (reported as
equivariant topological complexity), equivariant sectional category, and
equivariant simplicial complexity, all with machine-checkable certificates.
"""

from .budget import Budget
from .groups import FiniteGroup, GPoset, Subgroup, all_subgroups
from .interval import antichain, chain, combinatorial_interval, point
from .poset import Downset, FinitePoset, MonotoneMap

__all__ = [
    "Budget",
    "Downset",
    "FiniteGroup",
    "FinitePoset",
    "GPoset",
    "MonotoneMap",
    "Subgroup",
    "all_subgroups",
    "antichain",
    "chain",
    "combinatorial_interval",
    "point",
]

__version__ = "0.1.0"
