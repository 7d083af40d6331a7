"""Exact continuous Steiner trees at desk scale: full-topology enumeration + conic fixed-topology solves."""

from __future__ import annotations

import math
from dataclasses import dataclass

import clarabel
import numpy as np
from scipy import sparse

from ..errors import CapExceeded, SolverError, ValidationError
from ..instances import CstInstance
from ..metric import MetricKind, Node, SteinerTree, lp_norm, pairwise
from ._common import parallel_map, prim

COLLAPSE_TOL = 1e-6
MAX_CST_TERMINALS = 6


@dataclass(frozen=True)
class SteinerTopology:
    """Full topology: slots 0..k-1 are terminals (leaves), k..2k-3 Steiner slots of degree 3."""

    n_terminals: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges)))

    @property
    def n_steiner(self) -> int:
        return max(self.n_terminals - 2, 0)

    def validate(self):
        k, s = self.n_terminals, self.n_steiner
        if k <= 1:
            if self.edges:
                raise ValidationError("a single terminal has no edges")
            return
        if len(self.edges) != k + s - 1:
            raise ValidationError(f"topology has {len(self.edges)} edges, expected {k + s - 1}")
        deg = np.zeros(k + s, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        if k > 2 and (np.any(deg[:k] != 1) or np.any(deg[k:] != 3)):
            raise ValidationError("terminals must be leaves and Steiner slots must have degree 3")


def full_topologies(k: int) -> list:
    """All (2k-5)!! full Steiner topologies on k >= 3 terminals, sorted by edge encoding."""
    if k <= 1:
        return [SteinerTopology(k, ())]
    if k == 2:
        return [SteinerTopology(2, ((0, 1),))]
    # Steiner slot ids are assigned in insertion order and relabelled to k.. at the end
    trees = [[(("s", 0), ("t", 0)), (("s", 0), ("t", 1)), (("s", 0), ("t", 2))]]
    for t in range(3, k):
        nxt = []
        for edges in trees:
            s_new = ("s", t - 2)
            for i, (a, b) in enumerate(edges):
                rest = edges[:i] + edges[i + 1 :]
                nxt.append(rest + [(a, s_new), (s_new, b), (s_new, ("t", t))])
        trees = nxt
    out = []
    for edges in trees:
        lab = [(u[1] if u[0] == "t" else k + u[1], v[1] if v[0] == "t" else k + v[1]) for u, v in edges]
        out.append(SteinerTopology(k, tuple(lab)))
    return sorted(out, key=lambda t: t.edges)


def _ensure_lp(metric: MetricKind) -> float:
    if metric.name != "lp":
        raise ValidationError(f"continuous Steiner solver needs an lp metric, got {metric.name}")
    return metric.p


def topology_cost(topology: SteinerTopology, terminals, steiner, p: float) -> float:
    """Tree length for given Steiner coordinates (rows of ``steiner``)."""
    T = np.atleast_2d(np.asarray(terminals, dtype=float))
    S = np.asarray(steiner, dtype=float).reshape(-1, T.shape[1])
    P = np.vstack([T, S]) if len(S) else T
    if not topology.edges:
        return 0.0
    e = np.asarray(topology.edges)
    return float(lp_norm(P[e[:, 0]] - P[e[:, 1]], p).sum())


def _diff_rows(u, v, k, d, T, c):
    """Affine expression for coordinate c of point u minus point v: (column->coef, const)."""
    coef, const = {}, 0.0
    for node, sign in ((u, 1.0), (v, -1.0)):
        if node < k:
            const += sign * T[node, c]
        else:
            col = (node - k) * d + c
            coef[col] = coef.get(col, 0.0) + sign
    return coef, const


def optimize_fixed_topology(topology: SteinerTopology, terminals, metric: MetricKind, tol: float = 1e-9):
    """Steiner coordinates minimizing the tree length of ``topology`` and that length.

    Each edge length gets an epigraph variable; ℓ1/ℓ∞ epigraphs are linear,
    ℓ2 uses second-order cones and other p use 3-d power cones.
    """
    p = _ensure_lp(metric)
    T = np.atleast_2d(np.asarray(terminals, dtype=float))
    k, d = T.shape
    if topology.n_terminals != k:
        raise ValidationError(f"topology is for {topology.n_terminals} terminals, got {k}")
    topology.validate()
    s = topology.n_steiner
    if s == 0:
        return np.zeros((0, d)), topology_cost(topology, T, np.zeros((0, d)), p), {"iterations": 0}
    E = len(topology.edges)
    nx_ = s * d
    t0 = nx_
    rows, b, cones = [], [], []
    linear = p == 1 or math.isinf(p)
    if p == 1:
        aux0 = t0 + E  # one |diff| bound per edge coordinate
        nvar = aux0 + E * d
    elif math.isinf(p) or p == 2:
        nvar = t0 + E
    else:
        aux0 = t0 + E  # power-cone split r_{e,c}
        nvar = aux0 + E * d
    q = np.zeros(nvar)
    q[t0 : t0 + E] = 1.0

    def add(coef, const):
        # constraint row: const + coef·x  lies in the current cone, i.e. s = b - A x
        rows.append({c: -v for c, v in coef.items()})
        b.append(const)

    nonneg = 0
    if linear:
        for ei, (u, v) in enumerate(topology.edges):
            for c in range(d):
                coef, const = _diff_rows(u, v, k, d, T, c)
                bound = aux0 + ei * d + c if p == 1 else t0 + ei
                for sign in (1.0, -1.0):
                    row = {bound: 1.0}
                    for col, val in coef.items():
                        row[col] = row.get(col, 0.0) - sign * val
                    add(row, -sign * const)
                    nonneg += 1
            if p == 1:
                add({t0 + ei: 1.0, **{aux0 + ei * d + c: -1.0 for c in range(d)}}, 0.0)
                nonneg += 1
        cones.append(clarabel.NonnegativeConeT(nonneg))
    elif p == 2:
        for ei, (u, v) in enumerate(topology.edges):
            add({t0 + ei: 1.0}, 0.0)
            for c in range(d):
                coef, const = _diff_rows(u, v, k, d, T, c)
                add(coef, const)
            cones.append(clarabel.SecondOrderConeT(d + 1))
    else:
        for ei in range(E):
            add({t0 + ei: 1.0, **{aux0 + ei * d + c: -1.0 for c in range(d)}}, 0.0)
        cones.append(clarabel.NonnegativeConeT(E))
        for ei, (u, v) in enumerate(topology.edges):
            for c in range(d):
                coef, const = _diff_rows(u, v, k, d, T, c)
                add({aux0 + ei * d + c: 1.0}, 0.0)
                add({t0 + ei: 1.0}, 0.0)
                add(coef, const)
                cones.append(clarabel.PowerConeT(1.0 / p))
    data, ri, ci = [], [], []
    for r, row in enumerate(rows):
        for c, v in row.items():
            if v != 0.0:
                ri.append(r)
                ci.append(c)
                data.append(v)
    A = sparse.csc_matrix((data, (ri, ci)), shape=(len(rows), nvar))
    P = sparse.csc_matrix((nvar, nvar))
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.tol_gap_abs = tol
    settings.tol_gap_rel = tol
    settings.tol_feas = tol
    settings.max_iter = 500
    sol = clarabel.DefaultSolver(P, q, A, np.asarray(b, dtype=float), cones, settings).solve()
    status = str(sol.status)
    if "Solved" not in status:
        raise SolverError(f"fixed-topology solve ended with status {status}")
    X = np.asarray(sol.x[:nx_]).reshape(s, d)
    cost = topology_cost(topology, T, X, p)
    return X, cost, {"iterations": int(sol.iterations), "status": status, "objective": float(sol.obj_val)}


def _collapse(topology: SteinerTopology, T, X, p):
    """Contract edges whose Steiner endpoint sits within COLLAPSE_TOL of its neighbour."""
    k = len(T)
    pts = [tuple(r) for r in T] + [tuple(r) for r in X]
    edges = [list(e) for e in topology.edges]
    alive = set(range(len(pts)))
    changed = True
    P = np.asarray(pts, dtype=float)
    while changed:
        changed = False
        for e in edges:
            u, v = e
            if u == v:
                continue
            if max(u, v) >= k and lp_norm(P[u] - P[v], p) <= COLLAPSE_TOL:
                keep, drop = (u, v) if u < v else (v, u)
                if keep >= k and drop < k:
                    keep, drop = drop, keep
                for e2 in edges:
                    e2[0] = keep if e2[0] == drop else e2[0]
                    e2[1] = keep if e2[1] == drop else e2[1]
                alive.discard(drop)
                changed = True
                break
    edges = [tuple(sorted(e)) for e in edges if e[0] != e[1]]
    order = sorted(alive)
    local = {old: i for i, old in enumerate(order)}
    nodes = [Node.terminal(i) if i < k else Node.free(P[i]) for i in order]
    out = sorted((local[u], local[v]) for u, v in edges)
    cost = float(sum(lp_norm(P[u] - P[v], p) for u, v in edges))
    return SteinerTree(nodes, out, cost)


def _terminals_of(instance_or_points):
    if isinstance(instance_or_points, CstInstance):
        return instance_or_points.terminals, instance_or_points.metric
    return instance_or_points, None


def exact_cst(instance, metric: MetricKind | None = None, max_terminals: int = MAX_CST_TERMINALS) -> SteinerTree:
    """Best tree over every full topology (degenerate trees arise as Steiner slots collapse)."""
    pts, inst_metric = _terminals_of(instance)
    metric = metric or inst_metric
    if metric is None:
        raise ValidationError("exact_cst needs a metric")
    p = _ensure_lp(metric)
    T = np.atleast_2d(np.asarray(pts, dtype=float))
    k = len(T)
    if k > max_terminals:
        raise CapExceeded("cst terminals", max_terminals, k)
    if k == 0:
        raise ValidationError("exact_cst needs at least one terminal")
    if k <= 2:
        edges = [(0, 1)] if k == 2 else []
        cost = float(lp_norm(T[0] - T[1], p)) if k == 2 else 0.0
        return SteinerTree([Node.terminal(i) for i in range(k)], edges, cost, info={"topologies": 1})
    tops = full_topologies(k)
    results = parallel_map(lambda top: optimize_fixed_topology(top, T, metric), tops)
    best = None
    for top, (X, cost, info) in zip(tops, results):
        if best is None or cost < best[1] - 1e-12:
            best = (top, cost, X, info)
    top, cost, X, info = best
    tree = _collapse(top, T, X, p)
    mst_edges, mst_cost = prim(pairwise(metric, T))
    if mst_cost < tree.cost:
        # exact ties or solver noise in the other direction: the terminal MST is a valid Steiner tree
        tree = SteinerTree([Node.terminal(i) for i in range(k)], sorted(tuple(sorted(e)) for e in mst_edges), mst_cost)
    tree.info = {
        "topologies": len(tops),
        "best_topology": [list(e) for e in top.edges],
        "iterations": sum(r[2]["iterations"] for r in results),
        "tolerance": 1e-9,
    }
    return tree


def steiner_ratio(points, metric: MetricKind, max_terminals: int = MAX_CST_TERMINALS) -> float:
    T = np.atleast_2d(np.asarray(points, dtype=float))
    _, mst_cost = prim(pairwise(metric, T))
    if mst_cost == 0:
        return 1.0
    return exact_cst(T, metric, max_terminals).cost / mst_cost
