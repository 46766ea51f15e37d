"""Named benchmark instances.

Queen and Mycielski graphs are deterministic constructions and are built
directly. The two Stanford GraphBase book graphs are data, not formulas:
``jean`` (77 vertices after dropping the three degree-0 characters, 254
edges) is recovered from networkx's Les Miserables co-occurrence data;
``anna`` (138 vertices, 493 edges) needs the DIMACS ``anna.col`` file on
disk, looked up under ``$KCOLOR_DATA`` or ``./data``.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .graph import Graph, parse_graph

__all__ = ["queen", "myciel", "mycielskian", "jean", "anna", "load_instance", "INSTANCE_KS"]

# color budget at which each instance is reported (its chromatic number)
INSTANCE_KS = {
    "queen5-5": 5,
    "queen6-6": 7,
    "queen7-7": 7,
    "queen8-8": 9,
    "queen9-9": 10,
    "queen8-12": 12,
    "queen11-11": 11,
    "queen13-13": 13,
    "myciel5": 6,
    "myciel6": 7,
    "jean": 10,
    "anna": 11,
}


def queen(rows: int, cols: int | None = None) -> Graph:
    """Queens graph: board squares, adjacent iff a queen move apart."""
    if cols is None:
        cols = rows
    if rows < 1 or cols < 1:
        raise ValueError("board dimensions must be >= 1")
    n = rows * cols
    idx = np.arange(n).reshape(rows, cols)
    edges = []
    for i in range(rows):
        for j in range(cols):
            u = idx[i, j]
            for jj in range(j + 1, cols):  # same row
                edges.append((u, idx[i, jj]))
            for ii in range(i + 1, rows):  # same column
                edges.append((u, idx[ii, j]))
            for s in range(1, min(rows - 1 - i, cols - 1 - j) + 1):  # diagonal
                edges.append((u, idx[i + s, j + s]))
            for s in range(1, min(rows - 1 - i, j) + 1):  # anti-diagonal
                edges.append((u, idx[i + s, j - s]))
    return Graph.from_edges(n, edges)


def mycielskian(g: Graph) -> Graph:
    """Triangle-free chromatic-number increment: n originals, n twins, one apex."""
    n = g.n
    edges = [(int(u), int(v)) for u, v in g.edges]
    for u, v in g.edges:
        edges.append((int(u) + n, int(v)))
        edges.append((int(v) + n, int(u)))
    apex = 2 * n
    for i in range(n):
        edges.append((n + i, apex))
    return Graph.from_edges(2 * n + 1, edges)


def myciel(index: int) -> Graph:
    """The DIMACS ``myciel<index>`` instance: iterated Mycielskian of K2.

    ``myciel(i)`` has 3 * 2^(i-1) - 1 vertices and chromatic number i + 1;
    myciel5 is 47 vertices / 236 edges, myciel6 is 95 / 755.
    """
    if index < 1:
        raise ValueError("index must be >= 1")
    g = Graph.from_edges(2, [(0, 1)])
    for _ in range(index - 1):
        g = mycielskian(g)
    return g


def jean() -> Graph:
    """Les Miserables character co-occurrence graph (degree-0 vertices removed)."""
    try:
        import networkx as nx
    except ImportError as exc:  # pragma: no cover
        raise ImportError("the jean instance needs networkx installed") from exc
    G = nx.les_miserables_graph()
    names = sorted(G.nodes)
    remap = {name: i for i, name in enumerate(names)}
    return Graph.from_edges(len(names), [(remap[a], remap[b]) for a, b in G.edges])


def _data_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get("KCOLOR_DATA")
    if env:
        dirs.append(Path(env))
    dirs.append(Path("data"))
    return dirs


def anna() -> Graph:
    """Anna Karenina character graph, read from a local ``anna.col`` file."""
    for d in _data_dirs():
        path = d / "anna.col"
        if path.exists():
            with open(path) as fh:
                return parse_graph(fh, fmt="dimacs", drop_isolated=True)
    raise FileNotFoundError(
        "anna.col not found; place the DIMACS file under $KCOLOR_DATA or ./data"
    )


def load_instance(name: str) -> Graph:
    if name.startswith("queen"):
        dims = name.removeprefix("queen").split("-")
        return queen(int(dims[0]), int(dims[1]))
    if name.startswith("myciel"):
        return myciel(int(name.removeprefix("myciel")))
    if name == "jean":
        return jean()
    if name == "anna":
        return anna()
    raise ValueError(f"unknown instance {name!r}")
