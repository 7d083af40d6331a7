"""Set-system spaces, the compatibility/embeddability checks and the completeness/soundness costs."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import ValidationError
from .instances import DstInstance
from .metric import MetricKind, Node, SteinerTree
from .setsystems import SetSystem, SoundnessParams, require_valid

STRICT_SLACK = 1e-12


@dataclass(frozen=True)
class EmbeddabilityTuple:
    alpha_x: float
    alpha_p: float
    beta_in: float
    beta_out: float
    gamma0: float
    gamma1: float
    gamma2: float
    tau: float

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))

    def require_positive(self):
        bad = [f.name for f in fields(self) if not getattr(self, f.name) > 0]
        if bad:
            raise ValidationError(f"tuple entries must be positive: {', '.join(bad)}")

    @property
    def gammas(self):
        return (self.gamma0, self.gamma1, self.gamma2)

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_json(cls, obj: dict) -> "EmbeddabilityTuple":
        try:
            return cls(**{f.name: obj[f.name] for f in fields(cls)})
        except KeyError as exc:
            raise ValidationError(f"tuple JSON missing key {exc}") from exc

    @classmethod
    def ones(cls) -> "EmbeddabilityTuple":
        return cls(*([1.0] * 8))

    def __iter__(self):
        return iter(astuple(self))


@dataclass
class CheckResult:
    """Outcome of a tuple check; ``status`` is 'pass', 'fail' or 'boundary'."""

    status: str
    violations: list
    boundary: list

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def __bool__(self):
        return self.ok


def _le(name, lhs, rhs, out):
    if lhs > rhs + STRICT_SLACK:
        out.append(name)


def realizable_gamma_triple(i: int, j: int, k: int) -> bool:
    """Can 3-sets A, B, C have |A∩C| = i, |A∩B| = j, |B∩C| = k?

    A common element count w must satisfy w <= min(i, j, k) and, for each set,
    the two intersections it carries fit inside it: w >= x + y - 3. Such a w
    exists exactly when every pair of sizes sums to at most 3 plus the third.
    """
    return j + k <= 3 + i and i + j <= 3 + k and i + k <= 3 + j


def metric_compatibility_violations(t: EmbeddabilityTuple, literal: bool = False) -> list:
    """Named inequalities that fail.

    The facility triangle group is checked only on intersection patterns that
    occur in some set system; ``literal=True`` checks every (i, j, k), which
    also rejects γ0 > 2γ2 although no three 3-sets realize that triangle.
    """
    t.require_positive()
    ax, ap, bi, bo, tau = t.alpha_x, t.alpha_p, t.beta_in, t.beta_out, t.tau
    g = t.gammas
    out = []
    _le("alpha_x <= alpha_p + beta_in", ax, ap + bi, out)
    _le("alpha_x <= alpha_p + beta_out", ax, ap + bo, out)
    _le("alpha_p <= alpha_x + beta_in", ap, ax + bi, out)
    _le("alpha_p <= alpha_x + beta_out", ap, ax + bo, out)
    _le("beta_in <= alpha_x + alpha_p", bi, ax + ap, out)
    _le("beta_in <= beta_out + tau", bi, bo + tau, out)
    for i in range(3):
        _le(f"beta_in <= gamma{i} + beta_out", bi, g[i] + bo, out)
    _le("beta_out <= alpha_x + alpha_p", bo, ax + ap, out)
    _le("beta_out <= beta_in + tau", bo, bi + tau, out)
    for i in range(3):
        _le(f"beta_out <= gamma{i} + beta_in", bo, g[i] + bi, out)
    for i in range(3):
        _le(f"gamma{i} <= 2 alpha_x", g[i], 2 * ax, out)
        for j in range(3):
            for k in range(j, 3):
                if literal or realizable_gamma_triple(i, j, k):
                    _le(f"gamma{i} <= gamma{j} + gamma{k}", g[i], g[j] + g[k], out)
        _le(f"gamma{i} <= 2 beta_in", g[i], 2 * bi, out)
        _le(f"gamma{i} <= 2 beta_out", g[i], 2 * bo, out)
    _le("tau <= 2 alpha_p", tau, 2 * ap, out)
    _le("tau <= 2 beta_in", tau, 2 * bi, out)
    _le("tau <= 2 beta_out", tau, 2 * bo, out)
    return out


def is_metric_compatible(t: EmbeddabilityTuple, literal: bool = False) -> CheckResult:
    """All triangle inequalities a set-system space needs, each violation named."""
    v = metric_compatibility_violations(t, literal)
    return CheckResult("fail" if v else "pass", v, [])


def is_steiner_embeddable(t: EmbeddabilityTuple) -> CheckResult:
    """Metric compatibility plus Steiner proximity, root proximity, Steiner utility and Steiner diameter.

    Steiner utility is a strict inequality; when it holds only within
    ``STRICT_SLACK`` the result is reported as 'boundary'.
    """
    t.require_positive()
    out = metric_compatibility_violations(t)
    ax = t.alpha_x
    for name, rhs in (
        ("3 gamma2 / 2", 1.5 * t.gamma2),
        ("alpha_p", t.alpha_p),
        ("beta_in", t.beta_in),
        ("beta_out", t.beta_out),
        ("gamma0", t.gamma0),
        ("gamma1", t.gamma1),
        ("tau", t.tau),
    ):
        _le(f"steiner proximity: alpha_x <= {name}", ax, rhs, out)
    _le("root proximity: alpha_p <= beta_out", t.alpha_p, t.beta_out, out)
    lhs, rhs = t.beta_in + ax / 3, min(t.alpha_p, t.tau)
    boundary = []
    if lhs > rhs + STRICT_SLACK:
        out.append("steiner utility: beta_in + alpha_x/3 < min(alpha_p, tau)")
    elif lhs >= rhs - STRICT_SLACK:
        boundary.append("steiner utility: beta_in + alpha_x/3 < min(alpha_p, tau)")
    _le("steiner diameter: min(alpha_p, tau) <= beta_in + gamma2", rhs, t.beta_in + t.gamma2, out)
    if out:
        return CheckResult("fail", out, boundary)
    return CheckResult("boundary" if boundary else "pass", out, boundary)


# --- set system spaces --------------------------------------------------------


@dataclass
class SetSystemSpace:
    """Points ordered t_1..t_n, r, s_1..s_m; ``gamma[j]`` is the 3-set of facility s_{j+1}."""

    n: int
    m: int
    gamma: tuple
    weights: np.ndarray
    tuple_: EmbeddabilityTuple

    @property
    def root(self) -> int:
        return self.n

    def universe_point(self, i: int) -> int:
        """Index of t_i for 1-based universe element i."""
        return i - 1

    def facility_point(self, j: int) -> int:
        return self.n + 1 + j

    def dst_instance(self) -> DstInstance:
        metric = MetricKind.graph(self.weights)
        terminals = [[i] for i in range(self.n + 1)]
        facilities = [[self.n + 1 + j] for j in range(self.m)]
        return DstInstance(metric, terminals, self.root, facilities)


def build_space(sys_: SetSystem, t: EmbeddabilityTuple) -> SetSystemSpace:
    require_valid(sys_)
    t.require_positive()
    n, m = sys_.n, sys_.m
    size = n + m + 1
    W = np.zeros((size, size))
    r = n
    fac = n + 1
    for i in range(n):
        for k in range(n):
            if i != k:
                W[i, k] = t.tau
        W[i, r] = W[r, i] = t.alpha_p
    for j, s in enumerate(sys_.sets):
        W[r, fac + j] = W[fac + j, r] = t.alpha_x
        for i in range(1, n + 1):
            w = t.beta_in if i in s else t.beta_out
            W[i - 1, fac + j] = W[fac + j, i - 1] = w
        for j2, s2 in enumerate(sys_.sets):
            if j2 != j:
                W[fac + j, fac + j2] = t.gammas[len(set(s) & set(s2))]
    return SetSystemSpace(n, m, sys_.sets, W, t)


def triangle_violations(W: np.ndarray, tol: float = 1e-9) -> int:
    """Number of ordered triples (i, j, k) with W[i,k] > W[i,j] + W[j,k] + tol."""
    via = W[:, :, None] + W[None, :, :]  # via[i, j, k] = W[i,j] + W[j,k]
    return int(np.count_nonzero(W[:, None, :] > via + tol))


def build_completeness_tree(sys_: SetSystem, partition, space: SetSystemSpace) -> SteinerTree:
    """Each partition set joins its three universe elements to its facility, which joins the root."""
    require_valid(sys_)
    if sys_.n % 3:
        raise ValidationError("a perfect packing needs 3 | n")
    parts = [tuple(sorted(s)) for s in partition]
    covered = [x for s in parts for x in s]
    if sorted(covered) != list(range(1, sys_.n + 1)):
        raise ValidationError("partition is not a perfect packing of [n]")
    index = {s: j for j, s in enumerate(sys_.sets)}
    nodes = [Node.terminal(i) for i in range(sys_.n + 1)]
    edges = []
    root = sys_.n
    for s in parts:
        if s not in index:
            raise ValidationError(f"partition set {list(s)} is not in the system")
        nodes.append(Node.facility(index[s]))
        f = len(nodes) - 1
        edges.append((f, root))
        edges.extend((x - 1, f) for x in s)
    tree = SteinerTree(nodes, edges)
    W = space.weights
    point = [i for i in range(sys_.n + 1)] + [space.facility_point(nd.index) for nd in nodes[sys_.n + 1 :]]
    tree.cost = float(sum(W[point[u], point[v]] for u, v in edges))
    return tree


def _require_embeddable(t: EmbeddabilityTuple):
    res = is_steiner_embeddable(t)
    if res.status == "fail":
        raise ValidationError("tuple is not Steiner embeddable: " + "; ".join(res.violations))


def completeness_cost(n: int, t: EmbeddabilityTuple) -> float:
    _require_embeddable(t)
    if n % 3:
        raise ValidationError("completeness cost needs 3 | n")
    return n * (t.alpha_x / 3 + t.beta_in)


def soundness_ratio(t: EmbeddabilityTuple, sp: SoundnessParams) -> float:
    """Soundness lower bound divided by the completeness cost."""
    eps, delta = sp.eps, sp.delta
    per = t.alpha_x / 3 + t.beta_in
    near = min(t.alpha_p, t.tau, t.beta_in + t.alpha_x / 2)
    far = min(t.alpha_p, t.tau)
    return 1 - eps + (4 * eps - 2 * delta) / 3 * near / per + (2 * delta - eps) / 3 * far / per


def soundness_bound(n: int, t: EmbeddabilityTuple, sp: SoundnessParams) -> float:
    """Lower bound on every Steiner tree of the space when coverage/cover are bounded by (eps, delta).

    Evaluated for any n (the bound is used on instances with 3 not dividing n);
    the formula is exposed for all parameter ranges.
    """
    _require_embeddable(t)
    return n * (t.alpha_x / 3 + t.beta_in) * soundness_ratio(t, sp)


def gap_factor(t: EmbeddabilityTuple, sp: SoundnessParams) -> float:
    _require_embeddable(t)
    return soundness_ratio(t, sp)


def general_metric_gap(sp: SoundnessParams) -> float:
    return 1 + sp.delta / 4
