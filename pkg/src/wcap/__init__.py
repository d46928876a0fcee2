"""Weighted connectivity augmentation solvers on cactus graphs."""

from .cactus import CactusGraph, LinkGraph, Solution, build_link_graph, enumerate_min_cuts, validate_solution
from .exact import solve_exact
from .heuristics import gwc, mst_connect, smc
from .local_search import local_search

__version__ = "0.1.0"

__all__ = [
    "CactusGraph",
    "LinkGraph",
    "Solution",
    "build_link_graph",
    "enumerate_min_cuts",
    "gwc",
    "local_search",
    "mst_connect",
    "smc",
    "solve_exact",
    "validate_solution",
]
