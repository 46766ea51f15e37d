"""Random and structured graph generators.

All generators are pure functions of (parameters, seed): the same call
always returns the identical edge set. Randomness comes from
``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .planarity import _is_planar_arrays

__all__ = [
    "FamilySpec",
    "DegreeSequence",
    "gen_erdos_renyi",
    "gen_regular",
    "gen_family",
    "gen_max_planar",
    "gen_replica",
    "cycle",
    "complete",
    "grid",
    "hypercube",
    "hex_lattice",
    "tri_lattice",
]


@dataclass(frozen=True)
class FamilySpec:
    """Structured-family selector.

    variant: one of ``cycle``, ``complete``, ``grid``, ``hex``, ``tri``.
    args: positive integer parameters (``grid`` takes one per dimension,
    ``hex``/``tri`` take (rows, cols), others take (n,)).
    """

    variant: str
    args: tuple[int, ...]

    def __post_init__(self):
        if self.variant not in ("cycle", "complete", "grid", "hex", "tri"):
            raise ValueError(f"unknown family {self.variant!r}")
        if len(self.args) == 0:
            raise ValueError("family needs at least one argument")
        if any(a < 1 for a in self.args):
            raise ValueError("family parameters must be >= 1")
        if self.variant in ("cycle", "complete") and len(self.args) != 1:
            raise ValueError(f"{self.variant} takes exactly one argument")
        if self.variant in ("hex", "tri") and len(self.args) != 2:
            raise ValueError(f"{self.variant} takes (rows, cols)")


@dataclass(frozen=True)
class DegreeSequence:
    """Target degree sequence for the replica generator."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError("degrees must be nonnegative")
        if sum(vals) % 2 != 0:
            raise ValueError("degree sum must be even")
        if any(v >= len(vals) for v in vals):
            raise ValueError("degree must be < number of vertices")
        object.__setattr__(self, "values", vals)


def _pair_from_index(idx: np.ndarray, n: int) -> np.ndarray:
    """Decode linear indices of the upper triangle into (u, v) pairs."""
    idx = idx.astype(np.int64)
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(b * b - 8.0 * idx)) / 2.0).astype(np.int64)
    # guard the float solve against off-by-one at row boundaries
    start = u * (2 * n - u - 1) // 2
    u = np.where(start > idx, u - 1, u)
    start = u * (2 * n - u - 1) // 2
    over = idx - start >= (n - 1 - u)
    u = np.where(over, u + 1, u)
    start = u * (2 * n - u - 1) // 2
    v = idx - start + u + 1
    return np.stack([u, v], axis=1)


def gen_erdos_renyi(n: int, d: float, seed: int) -> Graph:
    """Random graph with each pair an edge independently with p = d/(n-1).

    ``d`` is the target average degree; the expected edge count is n*d/2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        if d != 0:
            raise ValueError("d must be 0 for n=1")
        return Graph(1, np.empty((0, 2), dtype=np.int64))
    if not (0 <= d <= n - 1):
        raise ValueError(f"need 0 <= d <= n-1, got d={d}")
    p = d / (n - 1)
    rng = np.random.default_rng(seed)
    npairs = n * (n - 1) // 2
    if npairs <= 2_000_000:
        mask = rng.random(npairs) < p
        idx = np.flatnonzero(mask)
    else:
        # large n: draw the binomial edge count, then a uniform subset of
        # pair indices (same distribution, avoids materializing all pairs)
        m = rng.binomial(npairs, p)
        chosen: set[int] = set()
        while len(chosen) < m:
            batch = rng.integers(0, npairs, size=m - len(chosen))
            chosen.update(int(x) for x in batch)
        idx = np.sort(np.fromiter(chosen, dtype=np.int64, count=len(chosen)))
    return Graph(n, _pair_from_index(idx, n))


def gen_regular(n: int, r: int, seed: int) -> Graph:
    """Random r-regular simple graph via stub pairing with retries.

    Stubs are shuffled and matched pairwise; colliding pairs (self-loop or
    duplicate) are thrown back and the leftover stubs reshuffled, with a
    full restart if matching stalls. For r > (n-1)/2 the complement of an
    (n-1-r)-regular graph is generated instead, which keeps the retry count
    small at both ends of the density range.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if r < 0 or r >= n:
        raise ValueError("need 0 <= r < n")
    if (n * r) % 2 != 0:
        raise ValueError("n*r must be even")
    if r == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    rng = np.random.default_rng(seed)
    if r > (n - 1) / 2:
        g = _regular_pairing(n, n - 1 - r, rng) if r < n - 1 else None
        comp = _complement_edges(n, g.edges if g is not None else np.empty((0, 2), np.int64))
        return Graph(n, comp)
    return _regular_pairing(n, r, rng)


def _regular_pairing(n: int, r: int, rng: np.random.Generator) -> Graph:
    if r == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    for _ in range(1000):  # full restarts
        stubs = np.repeat(np.arange(n, dtype=np.int64), r)
        seen: set[tuple[int, int]] = set()
        edges: list[tuple[int, int]] = []
        ok = True
        while stubs.size:
            rng.shuffle(stubs)
            leftover = []
            progress = False
            for i in range(0, stubs.size, 2):
                u, v = int(stubs[i]), int(stubs[i + 1])
                a, b = (u, v) if u < v else (v, u)
                if u == v or (a, b) in seen:
                    leftover.append(u)
                    leftover.append(v)
                    continue
                seen.add((a, b))
                edges.append((a, b))
                progress = True
            if not progress:
                ok = False
                break
            stubs = np.array(leftover, dtype=np.int64)
        if ok:
            return Graph(n, np.array(edges, dtype=np.int64))
    raise RuntimeError(f"failed to build a {r}-regular graph on {n} vertices")


def _complement_edges(n: int, edges: np.ndarray) -> np.ndarray:
    present = set(map(tuple, edges.tolist()))
    comp = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
    return np.array(comp, dtype=np.int64).reshape(-1, 2)


# ---------------------------------------------------------------------------
# structured families


def cycle(n: int) -> Graph:
    """Cycle graph; n=1 is a single vertex, n=2 a single edge."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Graph(1, np.empty((0, 2), dtype=np.int64))
    if n == 2:
        return Graph(2, np.array([[0, 1]], dtype=np.int64))
    i = np.arange(n, dtype=np.int64)
    return Graph.from_edges(n, np.stack([i, (i + 1) % n], axis=1))


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, np.array(pairs, dtype=np.int64).reshape(-1, 2))


def grid(*dims: int) -> Graph:
    """Integer box {1..a_1} x ... x {1..a_r}; edges between points differing
    by 1 in exactly one coordinate. ``grid(2, 2, ..., 2)`` is the hypercube.
    """
    if len(dims) < 1 or any(a < 1 for a in dims):
        raise ValueError("grid needs positive dimensions")
    shape = tuple(dims)
    n = int(np.prod(shape))
    index = np.arange(n).reshape(shape)
    edges = []
    for axis, a in enumerate(shape):
        if a < 2:
            continue
        lo = np.take(index, range(a - 1), axis=axis).ravel()
        hi = np.take(index, range(1, a), axis=axis).ravel()
        edges.append(np.stack([lo, hi], axis=1))
    if not edges:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    return Graph.from_edges(n, np.concatenate(edges))


def hypercube(r: int) -> Graph:
    if r < 0:
        raise ValueError("r must be >= 0")
    return grid(*([2] * r)) if r > 0 else Graph(1, np.empty((0, 2), dtype=np.int64))


def hex_lattice(rows: int, cols: int) -> Graph:
    """Brick-wall hexagonal tiling with ``rows`` x ``cols`` hexagons.

    Node count is (2*rows + 2)*(cols + 1) - 2: vertical chains of length
    2*rows + 2 per column of the wall, cross edges where column and row
    parity agree, and the two degree-1 corners removed.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    M = 2 * rows
    nid = {}
    removed = {(0, M + 1), (cols, (M + 1) * (cols % 2))}
    for i in range(cols + 1):
        for j in range(M + 2):
            if (i, j) in removed:
                continue
            nid[(i, j)] = len(nid)
    edges = []
    for i in range(cols + 1):
        for j in range(M + 1):
            if (i, j) in nid and (i, j + 1) in nid:
                edges.append((nid[(i, j)], nid[(i, j + 1)]))
    for i in range(cols):
        for j in range(M + 2):
            if i % 2 == j % 2 and (i, j) in nid and (i + 1, j) in nid:
                edges.append((nid[(i, j)], nid[(i + 1, j)]))
    return Graph.from_edges(len(nid), edges)


def tri_lattice(rows: int, cols: int) -> Graph:
    """Triangular lattice: rows x cols grid plus one diagonal per unit
    square, diagonal orientation alternating with each row of squares.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    g = grid(rows, cols)
    index = np.arange(rows * cols).reshape(rows, cols)
    diag = []
    for i in range(rows - 1):
        for j in range(cols - 1):
            if i % 2 == 0:
                diag.append((index[i, j], index[i + 1, j + 1]))
            else:
                diag.append((index[i + 1, j], index[i, j + 1]))
    if diag:
        all_edges = np.concatenate([g.edges, np.array(diag, dtype=np.int64)])
    else:
        all_edges = g.edges
    return Graph.from_edges(rows * cols, all_edges)


def gen_family(spec: FamilySpec) -> Graph:
    if spec.variant == "cycle":
        return cycle(spec.args[0])
    if spec.variant == "complete":
        return complete(spec.args[0])
    if spec.variant == "grid":
        return grid(*spec.args)
    if spec.variant == "hex":
        return hex_lattice(*spec.args)
    return tri_lattice(*spec.args)


# ---------------------------------------------------------------------------
# planar generator and degree-sequence replicas


def gen_max_planar(n: int, seed: int) -> Graph:
    """Random maximally planar graph: planar with exactly 3n - 6 edges.

    Repeatedly shuffles the remaining non-edges and adds the first one that
    keeps the graph planar. Candidates whose insertion breaks planarity are
    discarded permanently: adding edges can only make planarity harder, so
    a failed candidate can never succeed later. This keeps the total number
    of planarity queries at one per vertex pair.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    rng = np.random.default_rng(seed)
    target = 3 * n - 6
    cand = np.array(
        [(u, v) for u in range(n) for v in range(u + 1, n)], dtype=np.int64
    )
    edges = np.empty((target, 2), dtype=np.int64)
    m = 0
    while m < target:
        rng.shuffle(cand)
        accepted = False
        for i in range(cand.shape[0]):
            edges[m] = cand[i]
            if _is_planar_arrays(n, edges[: m + 1]):
                m += 1
                # drop the dead prefix and the accepted edge
                cand = cand[i + 1 :].copy()
                accepted = True
                break
        if not accepted:
            raise RuntimeError("ran out of candidates before reaching 3n-6 edges")
    return Graph(n, edges)


def gen_replica(target: DegreeSequence, seed: int) -> Graph:
    """Greedy graph whose sorted degrees stay entrywise <= the sorted target.

    Shuffles the remaining non-edges and adds the first edge that keeps the
    sorted degree sequence dominated by the sorted target, until no pair can
    be added. Degrees only grow, so a pair that once violated the bound
    always will: failed candidates are discarded permanently.
    """
    n = len(target.values)
    sorted_target = np.sort(np.array(target.values, dtype=np.int64))
    rng = np.random.default_rng(seed)
    deg = np.zeros(n, dtype=np.int64)
    cand = np.array(
        [(u, v) for u in range(n) for v in range(u + 1, n)], dtype=np.int64
    )
    edges: list[tuple[int, int]] = []
    while cand.shape[0]:
        rng.shuffle(cand)
        accepted = False
        for i in range(cand.shape[0]):
            u, v = int(cand[i, 0]), int(cand[i, 1])
            deg[u] += 1
            deg[v] += 1
            if np.all(np.sort(deg) <= sorted_target):
                edges.append((u, v))
                cand = cand[i + 1 :].copy()
                accepted = True
                break
            deg[u] -= 1
            deg[v] -= 1
        if not accepted:
            break
    return Graph.from_edges(n, edges)
