"""Input validation helpers shared by the estimator API and the harness."""

from __future__ import annotations

from .coloring import HardColoring
from .graph import Graph

__all__ = ["check_graph", "check_budget", "check_coloring"]


def check_graph(obj) -> Graph:
    if not isinstance(obj, Graph):
        raise TypeError(f"expected a kcolor.Graph, got {type(obj).__name__}")
    return obj


def check_budget(k) -> int:
    k = int(k)
    if k < 1:
        raise ValueError("color budget k must be >= 1")
    return k


def check_coloring(g: Graph, c: HardColoring) -> HardColoring:
    if c.n != g.n:
        raise ValueError(f"coloring covers {c.n} vertices, graph has {g.n}")
    return c
