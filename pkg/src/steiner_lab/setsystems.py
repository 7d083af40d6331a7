"""SP3 set systems and the exhaustive packing / cover oracles behind (eps, delta)."""

from __future__ import annotations

import sys
import warnings
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded, ValidationError

MAX_UNIVERSE = 24


@dataclass(frozen=True)
class SetSystem:
    """Universe [n] (1-based) and a collection of 3-element subsets, each stored sorted."""

    n: int
    sets: tuple

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(tuple(sorted(int(x) for x in s)) for s in self.sets))

    @property
    def m(self) -> int:
        return len(self.sets)

    def masks(self) -> list:
        return [sum(1 << (x - 1) for x in s) for s in self.sets]

    def to_json(self) -> dict:
        return {"n": self.n, "sets": [list(s) for s in self.sets]}

    @classmethod
    def from_json(cls, obj: dict) -> "SetSystem":
        try:
            return cls(int(obj["n"]), tuple(obj["sets"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed set system: {exc}") from exc


@dataclass(frozen=True)
class SoundnessParams:
    eps: float
    delta: float

    def __post_init__(self):
        if not 0 <= self.eps <= 1:
            raise ValidationError(f"eps must lie in [0, 1], got {self.eps}")
        if self.delta < 0:
            raise ValidationError(f"delta must be nonnegative, got {self.delta}")


def validate(sys_: SetSystem) -> list:
    """Every cardinality / range / duplicate violation; an empty list means the system is valid."""
    out = []
    if sys_.n < 1:
        out.append(f"universe size must be positive, got {sys_.n}")
    seen = set()
    for j, s in enumerate(sys_.sets):
        if len(set(s)) != 3:
            out.append(f"set {j} has {len(set(s))} distinct elements, expected 3")
        bad = [x for x in s if not 1 <= x <= sys_.n]
        if bad:
            out.append(f"set {j} has elements outside [1, {sys_.n}]: {bad}")
        if s in seen:
            out.append(f"set {j} duplicates {list(s)}")
        seen.add(s)
    return out


def require_valid(sys_: SetSystem):
    problems = validate(sys_)
    if problems:
        raise ValidationError("; ".join(problems))


def _check_cap(sys_: SetSystem):
    if sys_.n > MAX_UNIVERSE:
        raise CapExceeded("universe size", MAX_UNIVERSE, sys_.n)


def _by_element(sys_: SetSystem) -> list:
    masks = sys_.masks()
    return [[mk for mk in masks if mk >> i & 1] for i in range(sys_.n)]


def max_packing_coverage(sys_: SetSystem) -> int:
    """Largest number of elements covered by pairwise-disjoint sets."""
    require_valid(sys_)
    _check_cap(sys_)
    n = sys_.n
    full = (1 << n) - 1
    containing = _by_element(sys_)

    # state: bitmask of elements already decided (covered or abandoned)
    @lru_cache(maxsize=None)
    def best(decided: int) -> int:
        if decided == full:
            return 0
        i = (~decided & (decided + 1)).bit_length() - 1
        value = best(decided | 1 << i)
        for mk in containing[i]:
            if not mk & decided:
                value = max(value, 3 + best(decided | mk))
        return value

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * n + 100))
    try:
        return best(0)
    finally:
        sys.setrecursionlimit(limit)


def min_set_cover_size(sys_: SetSystem):
    """Fewest sets whose union is [n], or ``None`` when no cover exists."""
    require_valid(sys_)
    _check_cap(sys_)
    n = sys_.n
    full = (1 << n) - 1
    containing = _by_element(sys_)
    if any(not c for c in containing):
        return None

    @lru_cache(maxsize=None)
    def best(covered: int) -> int:
        if covered == full:
            return 0
        i = (~covered & (covered + 1)).bit_length() - 1
        return 1 + min(best(covered | mk) for mk in containing[i])

    return best(0)


def measure_eps_delta(sys_: SetSystem) -> SoundnessParams:
    """Soundness parameters read off the exact oracles.

    eps = 1 - coverage/n and delta = 3 * cover/n - 1.
    """
    cover = min_set_cover_size(sys_)
    if cover is None:
        raise ValidationError("no set cover exists, delta is undefined")
    coverage = max_packing_coverage(sys_)
    eps = 1 - coverage / sys_.n
    delta = 3 * cover / sys_.n - 1
    if not eps / 2 - 1e-12 <= delta <= 2 * eps + 1e-12:
        warnings.warn(f"measured delta={delta:.6g} outside [eps/2, 2 eps] for eps={eps:.6g}", stacklevel=2)
    return SoundnessParams(eps, delta)


def perfect_packings(sys_: SetSystem) -> list:
    """All partitions of [n] into sets of the system, as lists of sets."""
    require_valid(sys_)
    _check_cap(sys_)
    full = (1 << sys_.n) - 1
    containing = _by_element(sys_)
    lookup = dict(zip(sys_.masks(), sys_.sets))
    out = []

    def walk(covered, chosen):
        if covered == full:
            out.append([lookup[mk] for mk in chosen])
            return
        i = (~covered & (covered + 1)).bit_length() - 1
        for mk in containing[i]:
            if not mk & covered:
                walk(covered | mk, chosen + [mk])

    walk(0, [])
    return out
