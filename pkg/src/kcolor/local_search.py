"""Greedy 1-flip local search and its recursive warm-start wrappers.

``discrete_color`` repeatedly applies the single-vertex recoloring with the
greatest strict decrease in monochromatic edges, breaking ties uniformly at
random first over vertices and then over that vertex's colors, until no
strictly improving move exists.

``full_color`` warm-starts each budget from the previous one (1-coloring up
to k); ``triple_color`` branches three independent searches per budget step
and keeps the best recursive result.

The descent loop is a compiled kernel: it maintains, per vertex, the count
of each color among its neighbors, so evaluating a move is O(1) and a move
updates only the moved vertex's neighborhood. Tie-breaking consumes the
same SplitMix64 stream as :class:`kcolor.rng.SearchRng`, so kernel draws
and Python-side draws form one reproducible sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .coloring import HardColoring, loss_hard
from .graph import Graph
from .rng import SearchRng

__all__ = [
    "SearchStats",
    "random_coloring",
    "discrete_color",
    "full_color",
    "triple_color",
]

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@dataclass
class SearchStats:
    """Instrumentation counters threaded through the search wrappers."""

    discrete_color_calls: int = 0
    moves: int = 0


@njit(cache=True)
def _randbelow(state, n):  # pragma: no cover - compiled
    """Unbiased integer in [0, n) from a SplitMix64 stream."""
    if n <= 1:
        return state, np.int64(0)
    mask = np.uint64(n - 1)
    mask |= mask >> np.uint64(1)
    mask |= mask >> np.uint64(2)
    mask |= mask >> np.uint64(4)
    mask |= mask >> np.uint64(8)
    mask |= mask >> np.uint64(16)
    mask |= mask >> np.uint64(32)
    bound = np.uint64(n)
    while True:
        state = state + _GAMMA
        z = state
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
        r = z & mask
        if r < bound:
            return state, np.int64(r)


@njit(cache=True)
def _best_decrease(counts, colors, v, k):  # pragma: no cover - compiled
    cur = colors[v]
    mn = np.int64(2**62)
    for c in range(k):
        if c != cur and counts[v, c] < mn:
            mn = counts[v, c]
    return counts[v, cur] - mn


@njit(cache=True)
def _greedy_descent(indptr, indices, colors, k, state):  # pragma: no cover - compiled
    """Best-improvement descent; mutates ``colors``. Returns (state, moves, loss)."""
    n = colors.shape[0]
    counts = np.zeros((n, k), dtype=np.int64)
    for v in range(n):
        for e in range(indptr[v], indptr[v + 1]):
            counts[v, colors[indices[e]]] += 1
    loss = np.int64(0)
    for v in range(n):
        loss += counts[v, colors[v]]
    loss //= 2
    moves = np.int64(0)
    if k <= 1 or n == 0:
        return state, moves, loss

    best = np.empty(n, dtype=np.int64)
    for v in range(n):
        best[v] = _best_decrease(counts, colors, v, k)

    while True:
        gain = np.int64(0)
        for v in range(n):
            if best[v] > gain:
                gain = best[v]
        if gain <= 0:
            break
        # tie-break uniformly over vertices achieving the best decrease
        ties = np.int64(0)
        for v in range(n):
            if best[v] == gain:
                ties += 1
        state, r = _randbelow(state, ties)
        pick = np.int64(-1)
        seen = np.int64(0)
        for v in range(n):
            if best[v] == gain:
                if seen == r:
                    pick = v
                    break
                seen += 1
        cur = colors[pick]
        target = counts[pick, cur] - gain
        # then uniformly over that vertex's tied colors
        ties = np.int64(0)
        for c in range(k):
            if c != cur and counts[pick, c] == target:
                ties += 1
        state, r = _randbelow(state, ties)
        newc = np.int64(-1)
        seen = np.int64(0)
        for c in range(k):
            if c != cur and counts[pick, c] == target:
                if seen == r:
                    newc = c
                    break
                seen += 1
        colors[pick] = newc
        loss -= gain
        moves += 1
        for e in range(indptr[pick], indptr[pick + 1]):
            u = indices[e]
            counts[u, cur] -= 1
            counts[u, newc] += 1
            best[u] = _best_decrease(counts, colors, u, k)
        best[pick] = _best_decrease(counts, colors, pick, k)
    return state, moves, loss


def random_coloring(g: Graph, k: int, rng: SearchRng) -> HardColoring:
    """Each vertex gets a color drawn uniformly from [0, k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    colors = np.fromiter(
        (rng.randbelow(k) for _ in range(g.n)), dtype=np.int64, count=g.n
    )
    return HardColoring(colors, k)


def _descend(g: Graph, k: int, init: HardColoring, rng: SearchRng,
             stats: SearchStats | None) -> tuple[HardColoring, int]:
    indptr, indices = g.adjacency_csr()
    colors = init.colors.copy()
    state, moves, loss = _greedy_descent(
        indptr, indices, colors, np.int64(k), np.uint64(rng.state)
    )
    rng.state = int(state)
    if stats is not None:
        stats.discrete_color_calls += 1
        stats.moves += int(moves)
    return HardColoring(colors, k), int(loss)


def discrete_color(
    g: Graph,
    k: int,
    init: HardColoring,
    rng: SearchRng,
    stats: SearchStats | None = None,
) -> HardColoring:
    """Greedy descent from ``init``; the result is 1-flip locally optimal."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if init.n != g.n:
        raise ValueError("initial coloring does not cover the graph")
    out, _ = _descend(g, k, init.with_budget(k), rng, stats)
    return out


def full_color(
    g: Graph, k: int, rng: SearchRng, stats: SearchStats | None = None
) -> HardColoring:
    """Recursive warm starts: 1-coloring, then j-coloring from (j-1)-coloring."""
    if k < 1:
        raise ValueError("k must be >= 1")
    c = HardColoring.ones(g.n)
    for j in range(2, k + 1):
        c, _ = _descend(g, j, c.with_budget(j), rng, stats)
    return c


def _triple(
    g: Graph,
    k: int,
    init: HardColoring,
    rng: SearchRng,
    stats: SearchStats | None,
) -> tuple[HardColoring, int]:
    if init.k == k:
        return init, loss_hard(g, init)
    best: tuple[HardColoring, int] | None = None
    for _ in range(3):
        child = rng.split()
        c1, _ = _descend(g, init.k + 1, init.with_budget(init.k + 1), child, stats)
        result = _triple(g, k, c1, child, stats)
        if best is None or result[1] < best[1]:  # ties keep the first branch
            best = result
    return best


def triple_color(
    g: Graph,
    k: int,
    rng: SearchRng,
    init: HardColoring | None = None,
    stats: SearchStats | None = None,
) -> HardColoring:
    """Branch three searches per budget step, keep the best recursion.

    From the 1-coloring this issues (3**k - 3)/2 ``discrete_color`` calls
    and returns the best of 3**(k-1) candidate k-colorings.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if init is None:
        init = HardColoring.ones(g.n)
    if init.k > k:
        raise ValueError("initial coloring uses more than k colors")
    if init.n != g.n:
        raise ValueError("initial coloring does not cover the graph")
    coloring, _ = _triple(g, k, init, rng, stats)
    return coloring
