"""Planar greedy straight-line drawings of strong circuit graphs."""

from greedydraw.plane_graph import Graph, PlaneGraph

__version__ = "0.1.0"

__all__ = ["Graph", "PlaneGraph", "__version__"]
