"""Shared pieces: Prim on dense matrices, metric closure with paths, thread pool, tree assembly."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..metric import Node, SteinerTree


def thread_count() -> int:
    raw = os.environ.get("STEINER_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items) -> list:
    """``list(map(fn, items))``, threaded when STEINER_LAB_THREADS > 1; order is preserved."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def prim(D: np.ndarray):
    """Minimum spanning tree of the complete graph with weights ``D``.

    Zero weights are ordinary edges here (scipy's sparse MST would drop them).
    Returns (edges, cost); ties go to the lowest index.
    """
    n = len(D)
    if n <= 1:
        return [], 0.0
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = D[0].astype(float).copy()
    parent = np.zeros(n, dtype=int)
    edges = []
    cost = 0.0
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        v = int(np.argmin(cand))
        edges.append((int(parent[v]), v))
        cost += float(best[v])
        in_tree[v] = True
        closer = D[v] < best
        best = np.where(closer, D[v], best)
        parent = np.where(closer, v, parent)
    return edges, cost


def metric_closure(D: np.ndarray):
    """Floyd–Warshall shortest paths; ``nxt[i, j]`` is the hop after i on a shortest i→j path."""
    D = np.array(D, dtype=float)
    n = len(D)
    nxt = np.tile(np.arange(n), (n, 1))
    for k in range(n):
        via = D[:, k, None] + D[None, k, :]
        better = via < D - 1e-15
        if better.any():
            D = np.where(better, via, D)
            nxt = np.where(better, nxt[:, k, None], nxt)
    return D, nxt


def expand_path(nxt, i, j) -> list:
    out = []
    while i != j:
        h = int(nxt[i, j])
        out.append((i, h))
        i = h
    return out


def prune_to_tree(edge_set, W, keep: set):
    """Spanning forest of ``edge_set`` (Kruskal by weight), then strip leaves not in ``keep``."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for u, v in sorted(edge_set, key=lambda e: (W[e[0], e[1]], e)):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
    changed = True
    while changed:
        changed = False
        deg = {}
        for u, v in chosen:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        leaves = {x for x, d in deg.items() if d == 1 and x not in keep}
        if leaves:
            chosen = [e for e in chosen if e[0] not in leaves and e[1] not in leaves]
            changed = True
    return chosen


def assemble_tree(edges, k: int, W) -> SteinerTree:
    """Tree over point indices (terminals 0..k-1, facilities k..) with facility nodes renumbered."""
    used = sorted({x for e in edges for x in e if x >= k})
    local = {i: i for i in range(k)}
    nodes = [Node.terminal(i) for i in range(k)]
    for x in used:
        local[x] = len(nodes)
        nodes.append(Node.facility(x - k))
    out = sorted(tuple(sorted((local[u], local[v]))) for u, v in edges)
    cost = float(sum(W[u, v] for u, v in edges))
    return SteinerTree(nodes, out, cost)
