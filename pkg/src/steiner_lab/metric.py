"""Distances for every metric used by the gadgets, plus Steiner tree bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError

INF = math.inf

DENSE_LIMIT = 4096


def parse_p(value) -> float:
    """Accept 'inf', '∞', numbers or numeric strings; return a float with math.inf for infinity."""
    if isinstance(value, str):
        s = value.strip().lower()
        if s in ("inf", "infinity", "∞", "+inf"):
            return INF
        value = float(s)
    p = float(value)
    if math.isnan(p):
        raise ValidationError("p is NaN")
    return p


def format_p(p: float):
    return "inf" if math.isinf(p) else p


@dataclass(frozen=True)
class MetricKind:
    """Tag describing how two points are compared.

    ``lp`` carries ``p`` in [1, inf]; ``graph`` carries a dense symmetric weight
    matrix whose points are integer indices.
    """

    name: str
    p: float | None = None
    weights: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.name == "lp":
            if self.p is None or not (self.p >= 1 or math.isinf(self.p)):
                raise ValidationError(f"p out of range for lp metric: {self.p}")
        elif self.name == "graph":
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 2 or w.shape[0] != w.shape[1]:
                raise ValidationError("graph weights must be a square matrix")
            if not np.allclose(w, w.T, atol=1e-12):
                raise ValidationError("graph weights must be symmetric")
            if np.any(np.diag(w) != 0):
                raise ValidationError("graph weights must have zero diagonal")
            if np.any(w < 0):
                raise ValidationError("graph weights must be nonnegative")
            object.__setattr__(self, "weights", w)
        elif self.name not in ("hamming", "edit", "ulam"):
            raise ValidationError(f"unknown metric kind {self.name!r}")

    @classmethod
    def lp(cls, p) -> "MetricKind":
        p = parse_p(p)
        if p == 0:
            return cls("hamming")
        return cls("lp", p)

    @classmethod
    def hamming(cls) -> "MetricKind":
        return cls("hamming")

    @classmethod
    def graph(cls, weights) -> "MetricKind":
        return cls("graph", weights=np.asarray(weights, dtype=float))

    @classmethod
    def edit(cls) -> "MetricKind":
        return cls("edit")

    @classmethod
    def ulam(cls) -> "MetricKind":
        return cls("ulam")

    @property
    def is_vector(self) -> bool:
        return self.name in ("lp", "hamming")

    @property
    def is_string(self) -> bool:
        return self.name in ("edit", "ulam")

    def to_json(self) -> dict:
        if self.name == "lp":
            return {"kind": "lp", "p": format_p(self.p)}
        if self.name == "graph":
            return {"kind": "graph", "weights": self.weights.tolist()}
        return {"kind": self.name}

    @classmethod
    def from_json(cls, obj: dict) -> "MetricKind":
        if not isinstance(obj, dict):
            raise ValidationError(f"metric must be an object with a 'kind' key, got {obj!r}")
        kind = obj.get("kind")
        if kind == "lp":
            return cls.lp(obj["p"])
        if kind == "graph":
            return cls.graph(obj["weights"])
        if kind in ("hamming", "l0"):
            return cls.hamming()
        if kind == "l1":
            return cls.lp(1)
        if kind in ("edit", "ulam"):
            return cls(kind)
        raise ValidationError(f"unknown metric kind {kind!r}")


@dataclass(frozen=True)
class Point:
    """A dense real vector; ``from_sparse``/``sparse`` convert to index->value form (0-based)."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 1:
            raise ValidationError("a point needs dimension >= 1")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_sparse(cls, dim: int, entries: dict) -> "Point":
        if dim > DENSE_LIMIT:
            raise ValidationError(f"dense representation capped at d <= {DENSE_LIMIT}")
        v = np.zeros(dim)
        for i, a in entries.items():
            if not 0 <= i < dim:
                raise ValidationError(f"sparse index {i} outside [0, {dim})")
            v[i] = a
        return cls(tuple(v))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def sparse(self) -> dict:
        return {i: c for i, c in enumerate(self.coords) if c != 0}

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype or float)


def _as_vec(a) -> np.ndarray:
    return np.asarray(a, dtype=float).ravel()


def lp_norm(v: np.ndarray, p: float, axis=-1):
    """ℓp norm along ``axis`` (p=inf handled in closed form)."""
    v = np.abs(v)
    if math.isinf(p):
        return v.max(axis=axis, initial=0.0)
    if p == 1:
        return v.sum(axis=axis)
    if p == 2:
        return np.sqrt((v * v).sum(axis=axis))
    return (v**p).sum(axis=axis) ** (1.0 / p)


def distance(kind: MetricKind, a, b) -> float:
    """Distance between two points under ``kind``."""
    if kind.name == "graph":
        i, j = int(np.ravel(a)[0]), int(np.ravel(b)[0])
        n = kind.weights.shape[0]
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"graph point index out of range: {i}, {j}")
        return float(kind.weights[i, j])
    if kind.is_string:
        return float(string_distance(kind.name, a, b))
    a, b = _as_vec(a), _as_vec(b)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.size} vs {b.size}")
    if kind.name == "hamming":
        return float(np.count_nonzero(a != b))
    return float(lp_norm(a - b, kind.p))


def pairwise(kind: MetricKind, X, Y=None) -> np.ndarray:
    """Distance matrix between point lists ``X`` and ``Y`` (``Y`` defaults to ``X``)."""
    if Y is None:
        Y = X
    if kind.name == "graph":
        xi = [int(np.ravel(x)[0]) for x in X]
        yi = [int(np.ravel(y)[0]) for y in Y]
        return kind.weights[np.ix_(xi, yi)].copy()
    if kind.is_string:
        return np.array([[string_distance(kind.name, x, y) for y in Y] for x in X], dtype=float)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if len(X) == 0 or len(Y) == 0:
        return np.zeros((len(X), len(Y)))
    if X.shape[1] != Y.shape[1]:
        raise ValidationError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    diff = X[:, None, :] - Y[None, :, :]
    if kind.name == "hamming":
        return np.count_nonzero(diff, axis=-1).astype(float)
    return lp_norm(diff, kind.p)


def string_distance(kind: str, a: Sequence, b: Sequence) -> int:
    """Levenshtein distance (unit-cost insert/delete/substitute) by full DP.

    ``kind='ulam'`` additionally requires both inputs to be repetition-free.
    """
    if kind == "ulam":
        for s in (a, b):
            if len(set(s)) != len(s):
                raise ValidationError("ulam distance requires strings without repeated symbols")
    elif kind != "edit":
        raise ValidationError(f"unknown string metric {kind!r}")
    a, b = list(a), list(b)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
        prev = cur
    return prev[-1]


# --- Steiner trees -----------------------------------------------------------

TERMINAL, FACILITY, FREE = "terminal", "facility", "free"


@dataclass(frozen=True)
class Node:
    kind: str
    index: int | None = None
    point: tuple | None = None

    @classmethod
    def terminal(cls, i: int) -> "Node":
        return cls(TERMINAL, int(i))

    @classmethod
    def facility(cls, j: int) -> "Node":
        return cls(FACILITY, int(j))

    @classmethod
    def free(cls, point) -> "Node":
        return cls(FREE, point=tuple(float(c) for c in np.ravel(point)))

    def to_json(self) -> dict:
        if self.kind == FREE:
            return {"kind": FREE, "point": list(self.point)}
        return {"kind": self.kind, "index": self.index}

    @classmethod
    def from_json(cls, obj: dict) -> "Node":
        if obj["kind"] == FREE:
            return cls.free(obj["point"])
        if obj["kind"] not in (TERMINAL, FACILITY):
            raise ValidationError(f"unknown node kind {obj['kind']!r}")
        return cls(obj["kind"], int(obj["index"]))


@dataclass
class SteinerTree:
    nodes: list
    edges: list
    cost: float = 0.0
    # solver report (iterations, topologies tried, tolerances); not part of the wire format
    info: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "nodes": [n.to_json() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "cost": self.cost,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SteinerTree":
        return cls(
            [Node.from_json(n) for n in obj["nodes"]],
            [tuple(int(x) for x in e) for e in obj["edges"]],
            float(obj.get("cost", 0.0)),
        )

    @property
    def steiner_points(self) -> list:
        return [n for n in self.nodes if n.kind != TERMINAL]


def node_point(node: Node, instance):
    if node.kind == TERMINAL:
        return instance.terminals[node.index]
    if node.kind == FACILITY:
        facilities = getattr(instance, "facilities", ())
        if node.index >= len(facilities):
            raise ValidationError(f"facility index {node.index} out of range")
        return facilities[node.index]
    return np.asarray(node.point)


def check_tree(tree: SteinerTree, instance) -> list:
    """Structural violations of ``tree`` against ``instance`` (empty list when valid)."""
    problems = []
    k = len(tree.nodes)
    for u, v in tree.edges:
        if not (0 <= u < k and 0 <= v < k):
            problems.append(f"dangling node index in edge ({u}, {v})")
    if problems:
        return problems
    if len(tree.edges) != k - 1:
        problems.append(f"{len(tree.edges)} edges for {k} nodes")
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in tree.edges:
        parent[find(u)] = find(v)
    if k and len({find(x) for x in range(k)}) != 1:
        problems.append("tree is not connected")
    counts = {}
    for n in tree.nodes:
        if n.kind == TERMINAL:
            counts[n.index] = counts.get(n.index, 0) + 1
    for i in range(len(instance.terminals)):
        if counts.get(i, 0) != 1:
            problems.append(f"terminal {i} appears {counts.get(i, 0)} times")
    return problems


def tree_cost(tree: SteinerTree, instance) -> float:
    """Sum of edge lengths of ``tree`` measured in ``instance.metric``."""
    k = len(tree.nodes)
    total = 0.0
    for u, v in tree.edges:
        if not (0 <= u < k and 0 <= v < k):
            raise ValidationError(f"dangling node index in edge ({u}, {v})")
        total += distance(instance.metric, node_point(tree.nodes[u], instance), node_point(tree.nodes[v], instance))
    return total
