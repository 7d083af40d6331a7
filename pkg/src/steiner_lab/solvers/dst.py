"""MST 2-approximation and exact discrete Steiner trees (Dreyfus–Wagner, subset brute force)."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..errors import CapExceeded, ValidationError
from ..instances import DstInstance
from ..metric import MetricKind, Node, SteinerTree, pairwise
from ._common import assemble_tree, expand_path, metric_closure, prim, prune_to_tree

MAX_DST_TERMINALS = 12
MAX_DST_FACILITIES = 64
MAX_BRUTE_FACILITIES = 20


def mst_tree(points, metric: MetricKind) -> SteinerTree:
    """Minimum spanning tree over ``points`` only (no Steiner nodes)."""
    pts = list(points) if metric.is_string else np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) == 0:
        raise ValidationError("mst_tree needs at least one point")
    D = pairwise(metric, pts)
    edges, cost = prim(D)
    return SteinerTree([Node.terminal(i) for i in range(len(pts))], sorted(tuple(sorted(e)) for e in edges), cost)


def _prepare(instance: DstInstance):
    D = instance.distance_matrix()
    return metric_closure(D), D


def exact_dst(
    instance: DstInstance, max_terminals: int = MAX_DST_TERMINALS, max_facilities: int = MAX_DST_FACILITIES
) -> SteinerTree:
    """Optimal tree spanning all terminals with any subset of facilities as Steiner nodes.

    Dreyfus–Wagner over the metric closure of terminals + facilities; the
    root terminal is the DP anchor and the other k-1 terminals index the
    subset lattice.
    """
    k, f = len(instance.terminals), len(instance.facilities)
    if k > max_terminals:
        raise CapExceeded("dst terminals", max_terminals, k)
    if f > max_facilities:
        raise CapExceeded("dst facilities", max_facilities, f)
    (C, nxt), D = _prepare(instance)
    if k == 1:
        return SteinerTree([Node.terminal(0)], [], 0.0, info={"states": 0})
    root = instance.root_index
    others = [i for i in range(k) if i != root]
    q = len(others)
    full = (1 << q) - 1
    N = len(C)
    dp = np.full((full + 1, N), np.inf)
    split = np.zeros((full + 1, N), dtype=np.int64)
    hop = np.zeros((full + 1, N), dtype=np.int64)
    for b, t in enumerate(others):
        dp[1 << b] = C[t]
        hop[1 << b] = t
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        low = mask & -mask
        rest = mask ^ low
        # submasks A of mask that contain the lowest bit, A != mask
        subs = []
        s = rest
        while True:
            a = s | low
            if a != mask:
                subs.append(a)
            if s == 0:
                break
            s = (s - 1) & rest
        subs = np.asarray(subs, dtype=np.int64)
        merged = dp[subs] + dp[mask ^ subs]
        j = np.argmin(merged, axis=0)
        g = merged[j, np.arange(N)]
        split[mask] = subs[j]
        tot = g[:, None] + C
        u = np.argmin(tot, axis=0)
        dp[mask] = tot[u, np.arange(N)]
        hop[mask] = u
    # reconstruct closure edges, then expand closure paths to point edges
    closure_edges = []
    stack = [(full, root)]
    while stack:
        mask, v = stack.pop()
        u = int(hop[mask, v])
        if u != v:
            closure_edges.append((u, v))
        if mask & (mask - 1) == 0:
            continue
        a = int(split[mask, u])
        stack.append((a, u))
        stack.append((mask ^ a, u))
    edge_set = set()
    for u, v in closure_edges:
        for a, b in expand_path(nxt, u, v):
            if a != b:
                edge_set.add((min(a, b), max(a, b)))
    edges = prune_to_tree(edge_set, D, set(range(k)))
    tree = assemble_tree(edges, k, D)
    tree.info = {"dp_value": float(dp[full, root]), "states": int((full + 1) * N)}
    return tree


def brute_force_dst(instance: DstInstance, max_facilities: int = MAX_BRUTE_FACILITIES) -> SteinerTree:
    """Minimum over facility subsets S of the MST over terminals ∪ S (closure distances)."""
    k, f = len(instance.terminals), len(instance.facilities)
    if f > max_facilities:
        raise CapExceeded("brute-force facilities", max_facilities, f)
    (C, nxt), D = _prepare(instance)
    best_cost, best_edges = np.inf, None
    base = list(range(k))
    for r in range(f + 1):
        for sub in combinations(range(k, k + f), r):
            idx = base + list(sub)
            edges, cost = prim(C[np.ix_(idx, idx)])
            if cost < best_cost - 1e-12:
                best_cost = cost
                best_edges = [(idx[a], idx[b]) for a, b in edges]
    edge_set = set()
    for u, v in best_edges:
        for a, b in expand_path(nxt, u, v):
            if a != b:
                edge_set.add((min(a, b), max(a, b)))
    edges = prune_to_tree(edge_set, D, set(range(k)))
    tree = assemble_tree(edges, k, D)
    tree.info = {"subsets": 2**f}
    return tree
