"""Dispatch to the active kernel backend (see :mod:`locgame._backend`)."""
from ._backend import BACKEND

if BACKEND == "numba":
    from . import _kernels_numba as active
else:
    from . import _kernels_numpy as active

popcount_rows = active.popcount_rows
union_classes = active.union_classes
class_union_counts = active.class_union_counts
probe_distances_d2 = active.probe_distances_d2
bfs = active.bfs
codegree_matrix = active.codegree_matrix
separation_gains = active.separation_gains

__all__ = [
    "BACKEND",
    "active",
    "popcount_rows",
    "union_classes",
    "class_union_counts",
    "probe_distances_d2",
    "bfs",
    "codegree_matrix",
    "separation_gains",
]
