"""Steiner tree hardness gadgets, exact small-instance solvers and their cross-checks."""

from .errors import CapExceeded, SolverError, SteinerLabError, ValidationError
from .instances import CstInstance, DstInstance, instance_from_json
from .metric import MetricKind, Node, Point, SteinerTree, distance, string_distance, tree_cost
from .reduction import EmbeddabilityTuple, build_space, is_metric_compatible, is_steiner_embeddable
from .setsystems import SetSystem, SoundnessParams

__all__ = [
    "CapExceeded",
    "SolverError",
    "SteinerLabError",
    "ValidationError",
    "CstInstance",
    "DstInstance",
    "instance_from_json",
    "MetricKind",
    "Node",
    "Point",
    "SteinerTree",
    "distance",
    "string_distance",
    "tree_cost",
    "EmbeddabilityTuple",
    "build_space",
    "is_metric_compatible",
    "is_steiner_embeddable",
    "SetSystem",
    "SoundnessParams",
]
