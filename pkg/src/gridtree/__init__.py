"""Compact straight-line grid embeddings of trees.

Construction of optimal drawings of perfect binary trees, a certificate
verifier for grid drawings, the 3SAT gadget reduction for upward drawings
with a fixed combinatorial embedding, and an exhaustive small-scale solver.
"""

from gridtree.geometry import (
    LatticePoint,
    Segment,
    orientation,
    point_in_segment_interior,
    segments_conflict,
)
from gridtree.tree import RootedOrderedTree, Role, parse_tree, perfect_binary_tree, serialize_tree
from gridtree.verify import GridDims, VerifyReport, dims_of, occupancy, verify

__all__ = [
    "GridDims",
    "LatticePoint",
    "Role",
    "RootedOrderedTree",
    "Segment",
    "VerifyReport",
    "dims_of",
    "occupancy",
    "orientation",
    "parse_tree",
    "perfect_binary_tree",
    "point_in_segment_interior",
    "segments_conflict",
    "serialize_tree",
    "verify",
]

__version__ = "0.1.0"
