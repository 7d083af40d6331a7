"""CST → DST: harvest Steiner points of exact sub-solutions as facilities, then solve the DST exactly."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from ..errors import CapExceeded, ValidationError
from ..instances import DstInstance
from ..metric import FREE, MetricKind, SteinerTree, lp_norm
from ._common import parallel_map
from .cst import COLLAPSE_TOL, MAX_CST_TERMINALS, exact_cst
from .dst import exact_dst

DEDUP_TOL = 1e-9
MAX_POINTS = 12
MAX_SUBSETS = 5000


@dataclass(frozen=True)
class CstToDstConfig:
    """``subset_cap`` bounds the parts solved exactly; ``tol`` is the per-subset cost tolerance."""

    subset_cap: int = 3
    tol: float = 1e-6

    def __post_init__(self):
        if self.subset_cap < 2:
            raise ValidationError(f"subset_cap must be >= 2, got {self.subset_cap}")
        if self.subset_cap > MAX_CST_TERMINALS:
            raise CapExceeded("subset size", MAX_CST_TERMINALS, self.subset_cap)


def cst_to_dst_facilities(P, metric: MetricKind, cfg: CstToDstConfig) -> np.ndarray:
    """Union of the Steiner points used by exact_cst on every subset of at most ``subset_cap`` terminals."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    n = len(P)
    if n > MAX_POINTS:
        raise CapExceeded("cst-to-dst points", MAX_POINTS, n)
    cap = min(cfg.subset_cap, n)
    subsets = [q for r in range(3, cap + 1) for q in combinations(range(n), r)]
    if len(subsets) > MAX_SUBSETS:
        raise CapExceeded("cst-to-dst subsets", MAX_SUBSETS, len(subsets))
    trees = parallel_map(lambda q: exact_cst(P[list(q)], metric), subsets)
    p = metric.p
    out = []
    for tree in trees:
        for node in tree.nodes:
            if node.kind != FREE:
                continue
            x = np.asarray(node.point)
            if np.any(lp_norm(P - x, p) <= COLLAPSE_TOL):
                continue
            if any(lp_norm(y - x, p) <= DEDUP_TOL for y in out):
                continue
            out.append(x)
    return np.asarray(out).reshape(len(out), P.shape[1])


def facility_bound(n: int, cap: int) -> int:
    return sum((r - 2) * comb(n, r) for r in range(3, min(cap, n) + 1))


def approx_cst_via_dst(P, metric: MetricKind, cfg: CstToDstConfig) -> SteinerTree:
    """Exact DST over P with the harvested facilities; sandwiched between exact_cst(P) and mst(P)."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    X = cst_to_dst_facilities(P, metric, cfg)
    inst = DstInstance(metric, P, 0, X)
    tree = exact_dst(inst, max_facilities=max(len(X), 1))
    tree.info = {**tree.info, "facilities": len(X), "subset_cap": cfg.subset_cap}
    return tree
