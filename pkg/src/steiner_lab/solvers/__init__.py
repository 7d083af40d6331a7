from .cst import (
    MAX_CST_TERMINALS,
    SteinerTopology,
    exact_cst,
    full_topologies,
    optimize_fixed_topology,
    steiner_ratio,
    topology_cost,
)
from .dst import brute_force_dst, exact_dst, mst_tree
from .reduce import CstToDstConfig, approx_cst_via_dst, cst_to_dst_facilities, facility_bound

__all__ = [
    "MAX_CST_TERMINALS",
    "SteinerTopology",
    "exact_cst",
    "full_topologies",
    "optimize_fixed_topology",
    "steiner_ratio",
    "topology_cost",
    "brute_force_dst",
    "exact_dst",
    "mst_tree",
    "CstToDstConfig",
    "approx_cst_via_dst",
    "cst_to_dst_facilities",
    "facility_bound",
]
