"""Reconfiguration toolkit for non-crossing spanning trees on convex point sets."""

from treeflip.tree_core import (
    ConvexTree,
    Edge,
    EdgeClass,
    TripwireError,
    Violation,
    classify_edge,
    covers_edge,
    covers_gap,
    covers_point,
    crosses,
    edge_length,
    gap_edge_bijection,
    validate_tree,
)

__all__ = [
    "ConvexTree",
    "Edge",
    "EdgeClass",
    "TripwireError",
    "Violation",
    "classify_edge",
    "covers_edge",
    "covers_gap",
    "covers_point",
    "crosses",
    "edge_length",
    "gap_edge_bijection",
    "validate_tree",
]

__version__ = "0.1.0"
