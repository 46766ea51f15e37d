"""Undirected simple graphs: representation, file ingestion, serialization.

Graphs are immutable after construction: edges live in a canonical
lexicographically sorted ``(m, 2)`` array with ``u < v`` per row, so equal
graphs compare equal and every downstream computation is deterministic.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Graph", "parse_graph", "write_edge_list", "write_dimacs", "is_bipartite"]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Attributes
    ----------
    n : int
        Number of vertices.
    edges : np.ndarray
        ``(m, 2)`` int64 array, each row ``u < v``, rows sorted
        lexicographically, no duplicates.
    """

    n: int
    edges: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64)
        if edges.size == 0:
            edges = edges.reshape(0, 2)
        if edges.ndim != 2 or edges.shape[1] != 2:
            raise ValueError("edges must be an (m, 2) array")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if edges.shape[0] > 0:
            if edges.min() < 0 or edges.max() >= self.n:
                raise ValueError("edge endpoint out of range [0, n)")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ValueError("edges must satisfy u < v (no self-loops)")
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            dup = np.all(edges[1:] == edges[:-1], axis=1)
            if np.any(dup):
                raise ValueError("duplicate edges")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, pairs) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs.

        Reversed duplicates and repeated pairs collapse to one edge;
        self-loops are rejected.
        """
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        if arr.shape[0]:
            if np.any(arr[:, 0] == arr[:, 1]):
                raise ValueError("self-loops are not allowed")
            arr = np.sort(arr, axis=1)
            arr = np.unique(arr, axis=0)
        return cls(n, arr)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @property
    def degree(self) -> np.ndarray:
        """Per-vertex degree (int64, read-only)."""
        deg = self._cache.get("degree")
        if deg is None:
            deg = np.bincount(self.edges.ravel(), minlength=self.n).astype(np.int64)
            deg.setflags(write=False)
            self._cache["degree"] = deg
        return deg

    def adjacency_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR neighbor lists: ``(indptr, indices)`` over both arc directions.

        Neighbors of ``v`` are ``indices[indptr[v]:indptr[v + 1]]``, sorted.
        """
        csr = self._cache.get("csr")
        if csr is None:
            src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
            dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            order = np.lexsort((dst, src))
            indices = dst[order]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
            indptr.setflags(write=False)
            indices.setflags(write=False)
            csr = (indptr, indices)
            self._cache["csr"] = csr
        return csr

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def drop_isolated(self) -> "Graph":
        """Copy with degree-0 vertices removed and labels remapped."""
        keep = np.flatnonzero(self.degree > 0)
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        return Graph(int(keep.size), remap[self.edges])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _parse_dimacs(lines) -> tuple[int, list[tuple[int, int]]]:
    n = None
    declared_m = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate problem line")
            if len(parts) < 4 or parts[1] not in ("edge", "edges", "col"):
                raise ValueError(f"line {lineno}: malformed problem line {line!r}")
            try:
                n = int(parts[2])
                declared_m = int(parts[3])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: malformed problem line {line!r}") from exc
            if n < 0:
                raise ValueError(f"line {lineno}: negative vertex count")
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            if len(parts) < 3:
                raise ValueError(f"line {lineno}: malformed edge line {line!r}")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"line {lineno}: vertex index out of range: {line!r}")
            if u != v:
                pairs.append((u - 1, v - 1))
        # other line types (n, d, x, ...) are ignored
    if n is None:
        raise ValueError("no problem line found")
    return n, pairs, declared_m


def _parse_edge_list(lines) -> tuple[int, list[tuple[int, int]]]:
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two labels, got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u < 0 or v < 0:
            raise ValueError(f"line {lineno}: negative vertex label")
        if u == v:
            raise ValueError(f"line {lineno}: self-loop {u}")
        pairs.append((u, v))
    if not pairs:
        raise ValueError("empty edge list")
    labels = sorted({x for p in pairs for x in p})
    remap = {lab: i for i, lab in enumerate(labels)}
    return len(labels), [(remap[u], remap[v]) for u, v in pairs], None


def parse_graph(text, fmt: str = "dimacs", drop_isolated: bool = False) -> Graph:
    """Parse a graph from DIMACS ``.col`` text or a plain edge list.

    Parameters
    ----------
    text : str or file-like
        Input characters.
    fmt : {"dimacs", "edge-list"}
        ``dimacs``: ``c`` comments, ``p edge N M`` header, 1-based ``e u v``
        lines. A mismatch between the declared and actual edge count is only
        a warning. ``edge-list``: one whitespace-separated pair per line;
        labels may start at 0 or 1 (or be sparse) and are remapped to
        ``0..n-1`` by sorted order, so the minimum label always maps to 0.
    drop_isolated : bool
        Remove degree-0 vertices after parsing (relevant for DIMACS, which
        can declare more vertices than appear on edges).
    """
    if isinstance(text, str):
        lines = io.StringIO(text)
    else:
        lines = text
    if fmt == "dimacs":
        n, pairs, declared_m = _parse_dimacs(lines)
    elif fmt == "edge-list":
        n, pairs, declared_m = _parse_edge_list(lines)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    g = Graph.from_edges(n, pairs) if pairs else Graph(n, np.empty((0, 2), dtype=np.int64))
    if declared_m is not None and declared_m != g.m:
        warnings.warn(
            f"declared edge count {declared_m} != actual {g.m}; using actual",
            stacklevel=2,
        )
    if drop_isolated:
        g = g.drop_isolated()
    return g


def write_edge_list(g: Graph, fh) -> None:
    """Serialize as 0-based ``u v`` lines (the package's output convention)."""
    for u, v in g.edges:
        fh.write(f"{u} {v}\n")


def write_dimacs(g: Graph, fh, comment: str | None = None) -> None:
    if comment:
        for line in comment.splitlines():
            fh.write(f"c {line}\n")
    fh.write(f"p edge {g.n} {g.m}\n")
    for u, v in g.edges:
        fh.write(f"e {u + 1} {v + 1}\n")


def is_bipartite(g: Graph) -> bool:
    """BFS 2-colorability check."""
    indptr, indices = g.adjacency_csr()
    color = np.full(g.n, -1, dtype=np.int8)
    for s in range(g.n):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = [s]
        while queue:
            v = queue.pop()
            cv = color[v]
            for w in indices[indptr[v] : indptr[v + 1]]:
                if color[w] == -1:
                    color[w] = 1 - cv
                    queue.append(int(w))
                elif color[w] == cv:
                    return False
    return True
