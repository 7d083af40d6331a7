"""Graph coloring → ℓ∞ continuous Steiner tree gadget, chromatic oracle and a cost-safe tree canonicalizer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, ValidationError
from .graphs import Graph
from .instances import CstInstance
from .metric import FREE, TERMINAL, INF, MetricKind, Node, SteinerTree, check_tree, lp_norm, node_point

MAX_CHROMATIC_VERTICES = 10


@dataclass(frozen=True)
class OrientedGraph:
    n: int
    arcs: tuple

    def __post_init__(self):
        arcs = tuple((int(i), int(j)) for i, j in self.arcs)
        seen = set()
        for i, j in arcs:
            if i == j:
                raise ValidationError(f"self-loop at {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"arc ({i}, {j}) outside [0, {self.n})")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValidationError(f"edge {key} oriented more than once")
            seen.add(key)
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_graph(cls, graph: Graph, flips=None) -> "OrientedGraph":
        """Lexicographic orientation (i < j gives arc (i, j)); ``flips[e]`` reverses edge e."""
        arcs = []
        for e, (u, v) in enumerate(graph.edges):
            arcs.append((v, u) if flips is not None and flips[e] else (u, v))
        return cls(graph.n, tuple(arcs))

    def underlying(self) -> Graph:
        return Graph(self.n, self.arcs)


@dataclass(frozen=True)
class Coloring:
    """``colors[v]`` is the color of vertex v (any hashable labels)."""

    colors: tuple

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))

    @property
    def classes(self) -> list:
        labels = sorted(set(self.colors), key=lambda c: self.colors.index(c))
        return [[v for v, c in enumerate(self.colors) if c == lab] for lab in labels]

    @property
    def n_colors(self) -> int:
        return len(set(self.colors))

    def is_proper(self, og: OrientedGraph) -> bool:
        return all(self.colors[i] != self.colors[j] for i, j in og.arcs)


def gadget_terminals(og: OrientedGraph) -> np.ndarray:
    """Row i is +1 on arcs leaving i and -1 on arcs entering i; the zero root is appended as row n."""
    T = np.zeros((og.n + 1, len(og.arcs)))
    for e, (i, j) in enumerate(og.arcs):
        T[i, e] = 1.0
        T[j, e] = -1.0
    return T


def build_cst_instance(graph: Graph, flips=None):
    """ℓ∞ instance (terminals Γ(0..n-1), root 0 at index n) and the orientation used.

    An isolated vertex maps onto the root itself, so graphs with isolated
    vertices are rejected; ``gadget_terminals`` still builds their point set.
    """
    if graph.m == 0:
        raise ValidationError("coloring gadget needs at least one edge")
    isolated = [v + 1 for v, a in enumerate(graph.neighbors()) if not a]
    if isolated:
        raise ValidationError(f"isolated vertices {isolated} coincide with the root")
    og = OrientedGraph.from_graph(graph, flips)
    return CstInstance(MetricKind.lp(INF), gadget_terminals(og), og.n), og


def class_point(og: OrientedGraph, members) -> np.ndarray:
    """±1/2 on every arc touching the class (sign follows the member's terminal), 0 elsewhere."""
    members = set(members)
    s = np.zeros(len(og.arcs))
    for e, (i, j) in enumerate(og.arcs):
        if i in members:
            s[e] = 0.5
        elif j in members:
            s[e] = -0.5
    return s


def completeness_tree_from_coloring(og: OrientedGraph, pi: Coloring) -> SteinerTree:
    """Terminal → its class point → root; every edge has ℓ∞ length 1/2, total (n + a)/2."""
    if len(pi.colors) != og.n:
        raise ValidationError(f"coloring has {len(pi.colors)} entries for {og.n} vertices")
    if not pi.is_proper(og):
        raise ValidationError("coloring is not proper")
    root = og.n
    nodes = [Node.terminal(i) for i in range(og.n + 1)]
    edges = []
    for members in pi.classes:
        nodes.append(Node.free(class_point(og, members)))
        c = len(nodes) - 1
        edges.append((c, root))
        edges.extend((v, c) for v in members)
    # half-integers are exact in floating point
    return SteinerTree(nodes, edges, (og.n + pi.n_colors) / 2)


def _clique_lower_bound(adj) -> int:
    n = len(adj)
    best = 1 if n else 0

    def grow(clique, cand):
        nonlocal best
        best = max(best, len(clique))
        for v in sorted(cand):
            if len(clique) + len(cand) <= best:
                return
            grow(clique + [v], cand & adj[v])
            cand = cand - {v}

    grow([], set(range(n)))
    return best


def _colorable(adj, k) -> bool:
    n = len(adj)
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    color = [-1] * n

    def place(idx):
        if idx == n:
            return True
        v = order[idx]
        used = {color[u] for u in adj[v] if color[u] >= 0}
        # symmetry break: never open more than one new color at a time
        top = max(color) + 1
        for c in range(min(k, top + 1)):
            if c not in used:
                color[v] = c
                if place(idx + 1):
                    return True
                color[v] = -1
        return False

    return place(0)


def exact_chromatic_number(graph: Graph, cap: int = MAX_CHROMATIC_VERTICES) -> int:
    """Smallest k admitting a proper coloring; search starts at the largest clique size."""
    if graph.n > cap:
        raise CapExceeded("chromatic vertices", cap, graph.n)
    if graph.n == 0:
        return 0
    adj = graph.neighbors()
    k = _clique_lower_bound(adj)
    while not _colorable(adj, k):
        k += 1
    return k


def optimal_coloring(graph: Graph) -> Coloring:
    adj = graph.neighbors()
    k = exact_chromatic_number(graph)
    n = graph.n
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    color = [-1] * n

    def place(idx):
        if idx == n:
            return True
        v = order[idx]
        used = {color[u] for u in adj[v] if color[u] >= 0}
        for c in range(k):
            if c not in used:
                color[v] = c
                if place(idx + 1):
                    return True
        color[v] = -1
        return False

    place(0)
    return Coloring(tuple(color))


# --- canonicalizer -----------------------------------------------------------


def _edge_len(P, u, v) -> float:
    return float(lp_norm(P[u] - P[v], INF))


def canonicalize_tree(tree: SteinerTree, instance: CstInstance) -> SteinerTree:
    """Apply cost-non-increasing rewrites until none fires.

    1. clamp Steiner coordinates into [-1, 1] (the box holds every terminal, so
       per-coordinate clamping shortens no edge);
    2. drop Steiner points of degree <= 2, splicing degree-2 neighbours together;
    3. an edge of length >= 1 between two non-root nodes is replaced by an edge
       from the endpoint cut off from the root to the root (length <= 1 after step 1).
    """
    problems = check_tree(tree, instance)
    if problems:
        raise ValidationError("input is not a spanning tree: " + "; ".join(problems))
    root = next(i for i, nd in enumerate(tree.nodes) if nd.kind == TERMINAL and nd.index == instance.root_index)
    kinds = [nd.kind for nd in tree.nodes]
    idx = [nd.index for nd in tree.nodes]
    P = [np.asarray(node_point(nd, instance), dtype=float).copy() for nd in tree.nodes]
    steiner = [k != TERMINAL for k in kinds]
    alive = set(range(len(P)))
    edges = {tuple(sorted(e)) for e in tree.edges}

    changed = True
    while changed:
        changed = False
        for v in alive:
            if steiner[v]:
                c = np.clip(P[v], -1.0, 1.0)
                if np.any(c != P[v]):
                    P[v] = c
                    kinds[v] = FREE
                    changed = True
        for v in sorted(alive):
            if not steiner[v]:
                continue
            inc = [e for e in edges if v in e]
            if len(inc) <= 2 and len(alive) > 1:
                nbrs = [e[0] if e[1] == v else e[1] for e in inc]
                edges -= set(inc)
                if len(nbrs) == 2:
                    edges.add(tuple(sorted(nbrs)))
                alive.discard(v)
                changed = True
                break
        if changed:
            continue
        for u, v in sorted(edges):
            if u == root or v == root or _edge_len(P, u, v) < 1.0:
                continue
            edges.discard((u, v))
            side = _component(edges, u)
            w = v if root in side else u
            edges.add(tuple(sorted((w, root))))
            changed = True
            break

    order = sorted(alive)
    local = {old: i for i, old in enumerate(order)}
    nodes = []
    for old in order:
        if kinds[old] == FREE:
            nodes.append(Node.free(P[old]))
        else:
            nodes.append(tree.nodes[old] if kinds[old] == TERMINAL else Node(kinds[old], idx[old]))
    out = sorted(tuple(sorted((local[u], local[v]))) for u, v in edges)
    cost = float(sum(_edge_len(P, u, v) for u, v in edges))
    return SteinerTree(nodes, out, cost)


def _component(edges, start) -> set:
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in adj.get(x, []):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def random_spanning_tree(instance: CstInstance, n_steiner: int, rng: np.random.Generator, spread: float = 1.5):
    """Uniform random labelled tree (Prüfer code) over the terminals plus random Steiner points."""
    k = len(instance.terminals)
    d = instance.terminals.shape[1]
    nodes = [Node.terminal(i) for i in range(k)]
    nodes += [Node.free(rng.uniform(-spread, spread, d)) for _ in range(n_steiner)]
    m = len(nodes)
    if m == 1:
        return SteinerTree(nodes, [], 0.0)
    if m == 2:
        edges = [(0, 1)]
    else:
        code = list(rng.integers(0, m, m - 2))
        degree = [1] * m
        for x in code:
            degree[x] += 1
        edges = []
        for x in code:
            leaf = min(i for i in range(m) if degree[i] == 1)
            edges.append((leaf, int(x)))
            degree[leaf] -= 1
            degree[x] -= 1
        a, b = [i for i in range(m) if degree[i] == 1]
        edges.append((a, b))
    tree = SteinerTree(nodes, edges)
    P = [np.asarray(node_point(nd, instance)) for nd in nodes]
    tree.cost = float(sum(_edge_len(P, u, v) for u, v in edges))
    return tree
