"""Sparse supports for non-piercing subgraph families."""

from __future__ import annotations

from .kernels import BACKEND
from .model import (
    Color,
    Coloring,
    ContainmentReduction,
    DisconnectedMemberError,
    Graph,
    GraphSystem,
    IntersectionSystem,
    PiercingFamilyError,
    PreconditionError,
    Provenance,
    SubgraphFamily,
    Support,
    SupportError,
    attach_pendants,
    containment_maximal,
    find_piercing_pair,
    induced_connected,
    is_non_piercing,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Color",
    "Coloring",
    "ContainmentReduction",
    "DisconnectedMemberError",
    "Graph",
    "GraphSystem",
    "IntersectionSystem",
    "PiercingFamilyError",
    "PreconditionError",
    "Provenance",
    "SubgraphFamily",
    "Support",
    "SupportError",
    "attach_pendants",
    "containment_maximal",
    "find_piercing_pair",
    "induced_connected",
    "is_non_piercing",
]
