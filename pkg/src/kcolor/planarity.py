"""Linear-time planarity testing (left-right algorithm).

The test follows the LR partition formulation: orient the graph by DFS
computing lowpoints, sort adjacencies into nesting order, then walk the DFS
tree maintaining a stack of conflict pairs of back-edge intervals. The graph
is planar iff no two same-constraint intervals ever conflict.

The hot path is a compiled kernel over flat int64 arrays because the
maximal-planar generator issues on the order of n^2 planarity queries per
graph; a pure-Python pass at ~15 ms per query would make that generator
minutes-per-graph instead of seconds. Intervals are (low, high) edge ids
with -1 for "none"; the conflict-pair stack is four parallel arrays.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .graph import Graph

__all__ = ["is_planar"]


@njit(cache=True)
def _add_constraints(
    ei, e, csp, s_ll, s_lh, s_rl, s_rh, bottom, ref, lowpt, lowpt_edge
):  # pragma: no cover - compiled
    """Merge the return edges of ei into a new conflict pair against e.

    Returns (ok, new_stack_height); ok is False when two same-side
    constraints collide, i.e. the graph is non-planar.
    """
    pll = np.int64(-1)
    plh = np.int64(-1)
    prl = np.int64(-1)
    prh = np.int64(-1)
    # merge return edges of ei into the right interval
    while True:
        csp -= 1
        qll = s_ll[csp]
        qlh = s_lh[csp]
        qrl = s_rl[csp]
        qrh = s_rh[csp]
        if qll != -1 or qlh != -1:
            qll, qrl = qrl, qll
            qlh, qrh = qrh, qlh
        if qll != -1 or qlh != -1:
            return False, csp
        if lowpt[qrl] > lowpt[e]:
            if prl == -1 and prh == -1:  # topmost interval
                prh = qrh
            else:
                ref[prl] = qrh
            prl = qrl
        else:  # align
            ref[qrl] = lowpt_edge[e]
        if csp == bottom[ei]:
            break
    # merge conflicting return edges of earlier siblings into the left interval
    while csp > 0 and (
        (s_lh[csp - 1] != -1 and lowpt[s_lh[csp - 1]] > lowpt[ei])
        or (s_rh[csp - 1] != -1 and lowpt[s_rh[csp - 1]] > lowpt[ei])
    ):
        csp -= 1
        qll = s_ll[csp]
        qlh = s_lh[csp]
        qrl = s_rl[csp]
        qrh = s_rh[csp]
        if qrh != -1 and lowpt[qrh] > lowpt[ei]:
            qll, qrl = qrl, qll
            qlh, qrh = qrh, qlh
        if qrh != -1 and lowpt[qrh] > lowpt[ei]:
            return False, csp
        if prl != -1:
            ref[prl] = qrh
        if qrl != -1:
            prl = qrl
        if pll == -1 and plh == -1:  # topmost interval
            plh = qlh
        elif pll != -1:
            ref[pll] = qlh
        pll = qll
    if not (pll == -1 and plh == -1 and prl == -1 and prh == -1):
        s_ll[csp] = pll
        s_lh[csp] = plh
        s_rl[csp] = prl
        s_rh[csp] = prh
        csp += 1
    return True, csp


@njit(cache=True)
def _lr_planarity_kernel(n, indptr, nbrs, aeid, m):  # pragma: no cover - compiled
    # --- phase 1: DFS orientation, lowpoints, nesting depth -------------
    height = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    oriented = np.zeros(m, dtype=np.uint8)
    esrc = np.empty(m, dtype=np.int64)
    edst = np.empty(m, dtype=np.int64)
    lowpt = np.zeros(m, dtype=np.int64)
    lowpt2 = np.zeros(m, dtype=np.int64)
    nesting = np.zeros(m, dtype=np.int64)

    ind = indptr[:n].copy()
    resume = np.zeros(n, dtype=np.uint8)
    stack = np.empty(2 * n + 2, dtype=np.int64)

    for s in range(n):
        if height[s] != -1:
            continue
        height[s] = 0
        sp = 0
        stack[sp] = s
        sp += 1
        while sp > 0:
            sp -= 1
            v = stack[sp]
            e = parent_edge[v]
            if resume[v] == 1:
                # post-visit of the tree edge at the cursor
                resume[v] = 0
                ei = aeid[ind[v]]
                nd = 2 * lowpt[ei]
                if lowpt2[ei] < height[v]:
                    nd += 1
                nesting[ei] = nd
                if e != -1:
                    if lowpt[ei] < lowpt[e]:
                        lowpt2[e] = min(lowpt[e], lowpt2[ei])
                        lowpt[e] = lowpt[ei]
                    elif lowpt[ei] > lowpt[e]:
                        lowpt2[e] = min(lowpt2[e], lowpt[ei])
                    else:
                        lowpt2[e] = min(lowpt2[e], lowpt2[ei])
                ind[v] += 1
            descended = False
            while ind[v] < indptr[v + 1]:
                a = ind[v]
                ei = aeid[a]
                if oriented[ei] == 1:
                    ind[v] += 1
                    continue
                w = nbrs[a]
                oriented[ei] = 1
                esrc[ei] = v
                edst[ei] = w
                lowpt[ei] = height[v]
                lowpt2[ei] = height[v]
                if height[w] == -1:  # tree edge: descend
                    parent_edge[w] = ei
                    height[w] = height[v] + 1
                    resume[v] = 1
                    stack[sp] = v
                    sp += 1
                    stack[sp] = w
                    sp += 1
                    descended = True
                    break
                # back edge
                lowpt[ei] = height[w]
                nd = 2 * lowpt[ei]
                if lowpt2[ei] < height[v]:
                    nd += 1
                nesting[ei] = nd
                if e != -1:
                    if lowpt[ei] < lowpt[e]:
                        lowpt2[e] = min(lowpt[e], lowpt2[ei])
                        lowpt[e] = lowpt[ei]
                    elif lowpt[ei] > lowpt[e]:
                        lowpt2[e] = min(lowpt2[e], lowpt[ei])
                    else:
                        lowpt2[e] = min(lowpt2[e], lowpt2[ei])
                ind[v] += 1
            if descended:
                continue

    # --- phase 2: outgoing adjacency in nesting order --------------------
    out_ptr = np.zeros(n + 1, dtype=np.int64)
    for ei in range(m):
        out_ptr[esrc[ei] + 1] += 1
    for v in range(n):
        out_ptr[v + 1] += out_ptr[v]
    fill = out_ptr[:n].copy()
    out_edges = np.empty(m, dtype=np.int64)
    for ei in range(m):
        v = esrc[ei]
        out_edges[fill[v]] = ei
        fill[v] += 1
    for v in range(n):  # stable insertion sort per bucket
        lo = out_ptr[v]
        hi = out_ptr[v + 1]
        for i in range(lo + 1, hi):
            x = out_edges[i]
            key = nesting[x]
            j = i - 1
            while j >= lo and nesting[out_edges[j]] > key:
                out_edges[j + 1] = out_edges[j]
                j -= 1
            out_edges[j + 1] = x

    # --- phase 3: LR partition test --------------------------------------
    ref = np.full(m, -1, dtype=np.int64)
    lowpt_edge = np.full(m, -1, dtype=np.int64)
    bottom = np.zeros(m, dtype=np.int64)
    cap = m + 2
    s_ll = np.empty(cap, dtype=np.int64)
    s_lh = np.empty(cap, dtype=np.int64)
    s_rl = np.empty(cap, dtype=np.int64)
    s_rh = np.empty(cap, dtype=np.int64)
    csp = 0

    ind2 = out_ptr[:n].copy()
    resume2 = np.zeros(n, dtype=np.uint8)

    for s in range(n):
        if parent_edge[s] != -1:
            continue
        sp = 0
        stack[sp] = s
        sp += 1
        while sp > 0:
            sp -= 1
            v = stack[sp]
            e = parent_edge[v]
            if resume2[v] == 1:
                resume2[v] = 0
                i = ind2[v]
                ei = out_edges[i]
                # integrate the return edges of the finished tree child
                if lowpt[ei] < height[v]:
                    if i == out_ptr[v]:
                        lowpt_edge[e] = lowpt_edge[ei]
                    else:
                        ok, csp = _add_constraints(
                            ei, e, csp, s_ll, s_lh, s_rl, s_rh, bottom, ref, lowpt, lowpt_edge
                        )
                        if not ok:
                            return False
                ind2[v] += 1
            descended = False
            while ind2[v] < out_ptr[v + 1]:
                i = ind2[v]
                ei = out_edges[i]
                w = edst[ei]
                bottom[ei] = csp
                if ei == parent_edge[w]:  # tree edge: descend
                    resume2[v] = 1
                    stack[sp] = v
                    sp += 1
                    stack[sp] = w
                    sp += 1
                    descended = True
                    break
                # back edge
                lowpt_edge[ei] = ei
                s_ll[csp] = -1
                s_lh[csp] = -1
                s_rl[csp] = ei
                s_rh[csp] = ei
                csp += 1
                if lowpt[ei] < height[v]:
                    if i == out_ptr[v]:
                        lowpt_edge[e] = lowpt_edge[ei]
                    else:
                        ok, csp = _add_constraints(
                            ei, e, csp, s_ll, s_lh, s_rl, s_rh, bottom, ref, lowpt, lowpt_edge
                        )
                        if not ok:
                            return False
                ind2[v] += 1
            if descended:
                continue
            # remove back edges returning to v's parent
            if e != -1:
                u = esrc[e]
                # drop conflict pairs whose lowest return point is u
                while csp > 0:
                    pll = s_ll[csp - 1]
                    plh = s_lh[csp - 1]
                    prl = s_rl[csp - 1]
                    if pll == -1 and plh == -1:
                        low = lowpt[prl]
                    elif prl == -1:
                        low = lowpt[pll]
                    else:
                        low = min(lowpt[pll], lowpt[prl])
                    if low != height[u]:
                        break
                    csp -= 1
                if csp > 0:  # trim the next conflict pair
                    csp -= 1
                    pll = s_ll[csp]
                    plh = s_lh[csp]
                    prl = s_rl[csp]
                    prh = s_rh[csp]
                    while plh != -1 and edst[plh] == u:
                        plh = ref[plh]
                    if plh == -1 and pll != -1:  # left interval just emptied
                        ref[pll] = prl
                        pll = np.int64(-1)
                    while prh != -1 and edst[prh] == u:
                        prh = ref[prh]
                    if prh == -1 and prl != -1:  # right interval just emptied
                        ref[prl] = pll
                        prl = np.int64(-1)
                    s_ll[csp] = pll
                    s_lh[csp] = plh
                    s_rl[csp] = prl
                    s_rh[csp] = prh
                    csp += 1
                if lowpt[e] < height[u] and csp > 0:  # e has a return edge
                    hl = s_lh[csp - 1]
                    hr = s_rh[csp - 1]
                    if hl != -1 and (hr == -1 or lowpt[hl] > lowpt[hr]):
                        ref[e] = hl
                    else:
                        ref[e] = hr
    return True


def _is_planar_arrays(n: int, edges: np.ndarray) -> bool:
    """Planarity on a raw (m, 2) edge array (u < v rows, no duplicates)."""
    m = int(edges.shape[0])
    if n >= 3 and m > 3 * n - 6:
        return False
    if m == 0 or n <= 3:
        return True
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return bool(
        _lr_planarity_kernel(np.int64(n), indptr, dst[order], eid[order], np.int64(m))
    )


def is_planar(g: Graph) -> bool:
    """True iff the graph admits a planar embedding.

    Any graph with more than 3n - 6 edges (n >= 3) is rejected by the Euler
    bound before the kernel runs.
    """
    return _is_planar_arrays(g.n, np.asarray(g.edges, dtype=np.int64))
