"""Simple undirected graphs (0-based internally, 1-based on the wire) and small exact oracles."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from .errors import CapExceeded, ValidationError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u}, {v}) outside vertex range [0, {self.n})")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ValidationError("parallel edges are not allowed")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.neighbors()), default=0)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[u + 1, v + 1] for u, v in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        try:
            return cls(int(obj["n"]), tuple((int(u) - 1, int(v) - 1) for u, v in obj["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed graph JSON: {exc}") from exc

    @classmethod
    def from_networkx(cls, g) -> "Graph":
        relabel = {v: i for i, v in enumerate(sorted(g.nodes()))}
        return cls(g.number_of_nodes(), tuple((relabel[u], relabel[v]) for u, v in g.edges()))

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def complete(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def small_graphs(max_vertices: int, min_edges: int = 1, connected: bool = False) -> list:
    """Every graph up to isomorphism on at most ``max_vertices`` vertices (networkx atlas)."""
    if max_vertices > 7:
        raise CapExceeded("atlas vertices", 7, max_vertices)
    out = []
    for g in nx.graph_atlas_g():
        if 0 < g.number_of_nodes() <= max_vertices and g.number_of_edges() >= min_edges:
            if connected and not nx.is_connected(g):
                continue
            out.append(Graph.from_networkx(g))
    return out


def min_vertex_cover_size(graph: Graph, cap: int = 20) -> int:
    """Exhaustive smallest vertex cover."""
    if graph.n > cap:
        raise CapExceeded("vertex cover vertices", cap, graph.n)
    for k in range(graph.n + 1):
        for cover in combinations(range(graph.n), k):
            c = set(cover)
            if all(u in c or v in c for u, v in graph.edges):
                return k
    return graph.n
