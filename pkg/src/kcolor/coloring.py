"""Hard and soft colorings, the loss functions, rounding, and k_d.

The soft loss of a row-stochastic matrix P is the expected number of
monochromatic edges when each vertex draws its color independently from its
row, optionally reweighted per edge (all-ones, mean p-th degree power, or
one plus the per-edge triangle count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph

__all__ = [
    "HardColoring",
    "SoftColoring",
    "LossSpec",
    "loss_hard",
    "loss_soft",
    "round_soft",
    "one_hot",
    "k_d",
    "write_hard_coloring",
    "read_hard_coloring",
    "write_soft_coloring",
    "read_soft_coloring",
]

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class HardColoring:
    """Per-vertex color assignment with a color budget ``k``."""

    colors: np.ndarray
    k: int

    def __post_init__(self):
        colors = np.asarray(self.colors, dtype=np.int64)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if colors.ndim != 1:
            raise ValueError("colors must be a 1-d array")
        if colors.size and (colors.min() < 0 or colors.max() >= self.k):
            raise ValueError("colors must lie in [0, k)")
        colors.setflags(write=False)
        object.__setattr__(self, "colors", colors)

    @classmethod
    def ones(cls, n: int) -> "HardColoring":
        """The unique 1-coloring."""
        return cls(np.zeros(n, dtype=np.int64), 1)

    def with_budget(self, k: int) -> "HardColoring":
        """Same assignment under a (weakly) larger budget."""
        if k < self.k:
            if self.colors.size and self.colors.max() >= k:
                raise ValueError("budget too small for existing colors")
        return HardColoring(self.colors, k)

    @property
    def n(self) -> int:
        return int(self.colors.size)


@dataclass(frozen=True)
class SoftColoring:
    """Row-stochastic n x k matrix of per-vertex color distributions."""

    P: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=np.float64)
        if P.ndim != 2:
            raise ValueError("P must be an (n, k) matrix")
        if P.size:
            if P.min() < 0 or P.max() > 1 + ROW_SUM_TOL:
                raise ValueError("entries must lie in [0, 1]")
            if np.max(np.abs(P.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
                raise ValueError("rows must sum to 1 (not renormalizing)")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @property
    def n(self) -> int:
        return int(self.P.shape[0])

    @property
    def k(self) -> int:
        return int(self.P.shape[1])


@dataclass(frozen=True)
class LossSpec:
    """Loss family plus its per-edge weights for a specific graph.

    kind: ``standard`` (weight 1), ``degree-power`` with exponent p
    (weight (deg(u)^p + deg(v)^p)/2), or ``triangle`` (weight 1 + number of
    triangles through the edge). ``degree-power`` with p=0 equals
    ``standard``.
    """

    kind: str
    power: int | None
    weights: np.ndarray

    def __post_init__(self):
        if self.kind not in ("standard", "degree-power", "triangle"):
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.kind == "degree-power":
            if self.power is None or self.power < 0:
                raise ValueError("degree-power needs a nonnegative integer p")
        w = np.asarray(self.weights, dtype=np.float64)
        if w.size and w.min() <= 0:
            raise ValueError("edge weights must be positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def for_graph(cls, g: Graph, kind: str = "standard", power: int | None = None) -> "LossSpec":
        if kind == "standard":
            w = np.ones(g.m, dtype=np.float64)
        elif kind == "degree-power":
            if power is None or power < 0:
                raise ValueError("degree-power needs a nonnegative integer p")
            dp = g.degree.astype(np.float64) ** power
            w = (dp[g.edges[:, 0]] + dp[g.edges[:, 1]]) / 2.0
        elif kind == "triangle":
            w = 1.0 + _triangles_per_edge(g)
        else:
            raise ValueError(f"unknown loss kind {kind!r}")
        return cls(kind, power, w)


def _triangles_per_edge(g: Graph) -> np.ndarray:
    """Number of triangles containing each edge, by neighbor-set intersection."""
    indptr, indices = g.adjacency_csr()
    out = np.empty(g.m, dtype=np.float64)
    for i, (u, v) in enumerate(g.edges):
        nu = indices[indptr[u] : indptr[u + 1]]
        nv = indices[indptr[v] : indptr[v + 1]]
        out[i] = np.intersect1d(nu, nv, assume_unique=True).size
    return out


def loss_hard(g: Graph, c: HardColoring) -> int:
    """Number of monochromatic edges."""
    if c.colors.size != g.n:
        raise ValueError(f"coloring covers {c.colors.size} vertices, graph has {g.n}")
    if g.m == 0:
        return 0
    col = c.colors
    return int(np.count_nonzero(col[g.edges[:, 0]] == col[g.edges[:, 1]]))


def loss_soft(g: Graph, s: SoftColoring, spec: LossSpec | None = None) -> float:
    """Weighted expected number of monochromatic edges under ``s``."""
    if s.n != g.n:
        raise ValueError(f"soft coloring has {s.n} rows, graph has {g.n} vertices")
    if spec is None:
        spec = LossSpec.for_graph(g, "standard")
    if spec.weights.size != g.m:
        raise ValueError("loss spec was built for a different graph")
    if g.m == 0:
        return 0.0
    P = s.P
    dots = np.einsum("ij,ij->i", P[g.edges[:, 0]], P[g.edges[:, 1]])
    return float(dots @ spec.weights)


def round_soft(s: SoftColoring) -> HardColoring:
    """Per-row argmax; ties go to the lowest color index."""
    return HardColoring(np.argmax(s.P, axis=1).astype(np.int64), s.k)


def one_hot(c: HardColoring) -> SoftColoring:
    P = np.zeros((c.n, c.k), dtype=np.float64)
    P[np.arange(c.n), c.colors] = 1.0
    return SoftColoring(P)


def k_d(d: float) -> int:
    """Smallest positive integer k with 2*k*ln(k) > d."""
    if d <= 0:
        raise ValueError("d must be positive")
    k = 1
    while 2 * k * math.log(k) <= d:
        k += 1
    return k


# ---------------------------------------------------------------------------
# serialization: hard colorings one integer per line, soft colorings CSV rows


def write_hard_coloring(c: HardColoring, fh) -> None:
    for x in c.colors:
        fh.write(f"{x}\n")


def read_hard_coloring(fh, k: int | None = None) -> HardColoring:
    colors = np.array([int(line) for line in fh if line.strip()], dtype=np.int64)
    if k is None:
        k = int(colors.max()) + 1 if colors.size else 1
    return HardColoring(colors, k)


def write_soft_coloring(s: SoftColoring, fh) -> None:
    for row in s.P:
        fh.write(",".join(repr(float(x)) for x in row) + "\n")


def read_soft_coloring(fh) -> SoftColoring:
    rows = [
        [float(x) for x in line.strip().split(",")] for line in fh if line.strip()
    ]
    return SoftColoring(np.array(rows, dtype=np.float64))
