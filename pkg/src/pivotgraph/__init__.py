"""Pivot vertices of group actions on finite graphs.

The package is organised bottom-up: :mod:`graph` (colored simple graphs),
:mod:`permgroup` (finite permutation groups), :mod:`autgroup` (automorphisms
and canonical forms), :mod:`pivot` (pivot detection and bound checks),
:mod:`verifier` (exhaustive enumeration), :mod:`fiber` (special-fiber
intersection data) and :mod:`cli`.
"""

__version__ = "0.1.0"

from pivotgraph.errors import CapacityError, DataInconsistencyError, InputError
from pivotgraph.graph import ColoredGraph
from pivotgraph.permgroup import Permutation, PermGroup

__all__ = [
    "__version__",
    "CapacityError",
    "ColoredGraph",
    "DataInconsistencyError",
    "InputError",
    "PermGroup",
    "Permutation",
]
