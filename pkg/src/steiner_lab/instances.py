"""DST / CST instances and their JSON wire format."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .metric import MetricKind, pairwise


def _points(metric: MetricKind, pts):
    if metric.is_string:
        return [tuple(p) for p in pts]
    arr = np.asarray(pts, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 0)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValidationError("points must form a 2-D array")
    return arr


def _points_json(metric: MetricKind, pts):
    if metric.is_string:
        return [list(p) for p in pts]
    if metric.name == "graph":
        return [[int(x) for x in p] for p in np.asarray(pts)]
    return [[float(x) for x in p] for p in np.asarray(pts)]


class _Base:
    def _check(self):
        k = len(self.terminals)
        if k == 0:
            raise ValidationError("instance has no terminals")
        if not 0 <= self.root_index < k:
            raise ValidationError(f"root_index {self.root_index} out of range")
        if self.metric.is_vector and len(self.facilities):
            if self.facilities.shape[1] != self.terminals.shape[1]:
                raise ValidationError("facility dimension differs from terminal dimension")

    @property
    def dim(self) -> int:
        if self.metric.is_string or self.metric.name == "graph":
            return 0
        return self.terminals.shape[1]

    def all_points(self):
        if self.metric.is_string:
            return list(self.terminals) + list(self.facilities)
        if len(self.facilities) == 0:
            return self.terminals
        return np.vstack([self.terminals, self.facilities])

    def distance_matrix(self) -> np.ndarray:
        return pairwise(self.metric, self.all_points())

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()


class DstInstance(_Base):
    """Terminals (one of them the root) plus a finite facility set."""

    def __init__(self, metric: MetricKind, terminals, root_index: int = 0, facilities=()):
        self.metric = metric
        self.terminals = _points(metric, terminals)
        self.root_index = int(root_index)
        if metric.is_string:
            self.facilities = [tuple(f) for f in facilities]
        else:
            f = np.asarray(facilities, dtype=float)
            if f.size == 0:
                d = self.terminals.shape[1] if self.terminals.ndim == 2 else 0
                f = np.zeros((0, d))
            self.facilities = _points(metric, f)
        self._check()

    def to_json(self) -> dict:
        return {
            "metric": self.metric.to_json(),
            "terminals": _points_json(self.metric, self.terminals),
            "root_index": self.root_index,
            "facilities": _points_json(self.metric, self.facilities),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DstInstance":
        metric = MetricKind.from_json(obj["metric"])
        return cls(metric, obj["terminals"], obj.get("root_index", 0), obj.get("facilities", []))

    def __repr__(self):
        return f"DstInstance({self.metric!r}, {len(self.terminals)} terminals, {len(self.facilities)} facilities)"


class CstInstance(_Base):
    """Terminals only; Steiner points may be any point of the space."""

    def __init__(self, metric: MetricKind, terminals, root_index: int = 0):
        self.metric = metric
        self.terminals = _points(metric, terminals)
        self.root_index = int(root_index)
        self.facilities = np.zeros((0, self.terminals.shape[1])) if metric.is_vector else []
        self._check()
        if metric.is_vector and len({tuple(t) for t in self.terminals}) != len(self.terminals):
            raise ValidationError("CST terminals must be distinct")

    def to_json(self) -> dict:
        return {
            "metric": self.metric.to_json(),
            "terminals": _points_json(self.metric, self.terminals),
            "root_index": self.root_index,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CstInstance":
        return cls(MetricKind.from_json(obj["metric"]), obj["terminals"], obj.get("root_index", 0))

    def __repr__(self):
        return f"CstInstance({self.metric!r}, {len(self.terminals)} terminals)"


def instance_from_json(obj: dict):
    """DST when a ``facilities`` key is present, else CST."""
    if "facilities" in obj:
        return DstInstance.from_json(obj)
    return CstInstance.from_json(obj)
