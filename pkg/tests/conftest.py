"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own computation paths:
expected soft loss is a sum over every possible hard coloring, local
optimality is an exhaustive 1-flip scan, and edge counts are recomputed
from scratch.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from kcolor import Graph, HardColoring, loss_hard


def brute_force_expected_loss(g: Graph, P: np.ndarray) -> float:
    """Sum over all k^n hard colorings of Pr[coloring] * monochromatic count."""
    n, k = P.shape
    total = 0.0
    for colors in itertools.product(range(k), repeat=n):
        prob = 1.0
        for i, c in enumerate(colors):
            prob *= P[i, c]
        mono = sum(1 for u, v in g.edges if colors[u] == colors[v])
        total += prob * mono
    return total


def brute_force_expected_loss_fast(g: Graph, P: np.ndarray) -> float:
    """Vectorized version of the enumeration oracle for n <= ~8."""
    n, k = P.shape
    colorings = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)
    probs = P[np.arange(n), colorings].prod(axis=1)
    mono = np.zeros(colorings.shape[0], dtype=np.int64)
    for u, v in g.edges:
        mono += colorings[:, u] == colorings[:, v]
    return float(probs @ mono)


def is_one_flip_optimal(g: Graph, c: HardColoring) -> bool:
    """Exhaustive scan: no single-vertex recolor strictly decreases the loss."""
    base = loss_hard(g, c)
    for v in range(g.n):
        orig = c.colors[v]
        for color in range(c.k):
            if color == orig:
                continue
            trial = c.colors.copy()
            trial[v] = color
            if loss_hard(g, HardColoring(trial, c.k)) < base:
                return False
    return True


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    pairs = list(itertools.combinations(range(n), 2))
    m = min(m, len(pairs))
    if m == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    idx = rng.choice(len(pairs), size=m, replace=False)
    return Graph.from_edges(n, [pairs[i] for i in idx])


def random_soft(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    P = rng.random((n, k)) + 1e-3
    return P / P.sum(axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
