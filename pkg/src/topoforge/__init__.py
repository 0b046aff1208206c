"""Design and evaluation of low mean-path-length regular network topologies."""
from .generators import generate
from .graph import RegularGraph, build_graph, compute_metrics

__all__ = ["RegularGraph", "build_graph", "compute_metrics", "generate"]
