"""ℓp embedding of SP3 instances, θ selection and the closed-form gap factors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import Graph
from .instances import DstInstance
from .metric import INF, MetricKind, parse_p
from .reduction import STRICT_SLACK, EmbeddabilityTuple
from .setsystems import SetSystem, SoundnessParams, require_valid

# smallest p for which θ = 1/2 keeps the two-element Steiner option no cheaper than the root edge
TIGHT_P = 1 / math.log(4 / 3, 3)
# smallest p for which θ = 1/2 is a valid choice at all
HALF_VALID_P = 1 / math.log(3 / 2, 3)

GOLDEN = (math.sqrt(5) - 1) / 2
EUC_CONST = 5 * math.sqrt(3) / 9 - 1


@dataclass(frozen=True)
class LpGadgetParams:
    p: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "p", parse_p(self.p))
        object.__setattr__(self, "theta", float(self.theta))

    def require_valid(self):
        if not theta_valid(self.p, self.theta):
            raise ValidationError(f"theta={self.theta} is not valid for p={self.p}")


def _root3(p: float) -> float:
    return 1.0 if math.isinf(p) else 3 ** (1 / p)


def beta_in(p: float, theta: float) -> float:
    if math.isinf(p):
        return max(1 - theta, theta)
    return ((1 - theta) ** p + 2 * theta**p) ** (1 / p)


def theta_margin(p, theta: float) -> float:
    """3 minus the left side of the validity inequality; positive means strictly valid."""
    p = parse_p(p)
    return 3 - (3 * beta_in(p, theta) + _root3(p) * theta)


def theta_valid(p, theta: float) -> bool:
    """0 < θ <= 1/2 and the strict validity inequality holds (after the strictness slack, scaled by 3)."""
    p = parse_p(p)
    if not p > 1:
        raise ValidationError(f"theta validity needs p > 1, got {p}")
    if not 0 < theta <= 0.5:
        return False
    return theta_margin(p, theta) > 3 * STRICT_SLACK


def lp_tuple(p, theta: float, check: bool = True) -> EmbeddabilityTuple:
    """Pairwise-distance classes of the ℓp point configuration."""
    p = parse_p(p)
    if check and not theta_valid(p, theta):
        raise ValidationError(f"theta={theta} is not valid for p={p}")
    if math.isinf(p):
        return EmbeddabilityTuple(theta, 1.0, 1 - theta, 1.0, theta, theta, theta, 1.0)
    return EmbeddabilityTuple(
        alpha_x=3 ** (1 / p) * theta,
        alpha_p=1.0,
        beta_in=beta_in(p, theta),
        beta_out=(1 + 3 * theta**p) ** (1 / p),
        gamma0=6 ** (1 / p) * theta,
        gamma1=4 ** (1 / p) * theta,
        gamma2=2 ** (1 / p) * theta,
        tau=2 ** (1 / p),
    )


def build_lp_dst_instance(sys_: SetSystem, params: LpGadgetParams, check: bool = True) -> DstInstance:
    """Terminals e_1..e_n then the root 0 (root_index = n); facilities θ·(e_i + e_j + e_k)."""
    require_valid(sys_)
    if check:
        params.require_valid()
    n = sys_.n
    terminals = np.vstack([np.eye(n), np.zeros((1, n))])
    facilities = np.zeros((sys_.m, n))
    for j, s in enumerate(sys_.sets):
        facilities[j, [x - 1 for x in s]] = params.theta
    return DstInstance(MetricKind.lp(params.p), terminals, n, facilities)


def lp_gap_factor(p, theta: float, sp: SoundnessParams) -> float:
    """Inapproximability factor of the ℓp embedding in closed form."""
    p = parse_p(p)
    if not theta_valid(p, theta):
        raise ValidationError(f"theta={theta} is not valid for p={p}")
    eps, delta = sp.eps, sp.delta
    b = beta_in(p, theta)
    c = _root3(p)
    per = b + c * theta / 3
    near = min(1.0, b + c * theta / 2)
    return (1 - eps) + (4 * eps - 2 * delta) / 3 * near / per + (2 * delta - eps) / 3 / per


def tight_lp_gap(p, sp: SoundnessParams) -> float:
    """Closed form at θ = 1/2, valid for p >= TIGHT_P (including p = inf)."""
    p = parse_p(p)
    if p < TIGHT_P * (1 - 1e-12):
        raise ValidationError(f"closed form needs p >= {TIGHT_P:.6f}, got {p}")
    h = 1 / (2 * _root3(p))
    return 1 + sp.eps * (0.5 - h) + 2 * sp.delta * (h - 0.375)


def intro_gamma(p, sp: SoundnessParams) -> float:
    """Headline hardness excess γ as a piecewise function of p."""
    p = parse_p(p)
    if p < 1:
        raise ValidationError(f"p must be >= 1, got {p}")
    if math.isinf(p):
        return sp.delta / 4
    if math.isclose(p, TIGHT_P, rel_tol=1e-12):
        return sp.eps / 8
    if p > TIGHT_P:
        return sp.eps / 2 * (1 - 1 / 3 ** (1 / p)) + 2 * sp.delta * (1 / (2 * 3 ** (1 / p)) - 3 / 8)
    return sp.eps / 26


def gap_report(p, sp: SoundnessParams) -> dict:
    """Certified gap: the θ = 1/2 closed form from TIGHT_P on, otherwise the closed form at the optimal θ."""
    p = parse_p(p)
    if p >= TIGHT_P:
        return {"p": p, "theta": 0.5, "gap": tight_lp_gap(p, sp)}
    theta = optimal_theta(p, sp)
    return {"p": p, "theta": theta, "gap": lp_gap_factor(p, theta, sp)}


def _golden_max(f, lo, hi, tol):
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (a + b) / 2


def optimal_theta(p, sp: SoundnessParams, step: float = 1e-4, tol: float = 1e-6) -> float:
    """θ maximizing the ℓp gap factor; 1/2 whenever p >= TIGHT_P.

    Below that threshold a validity scan on a grid (plus a log grid near 0)
    locates the best valid cell, then golden-section search refines it.
    Ties go to the larger θ.
    """
    p = parse_p(p)
    if not p > 1:
        raise ValidationError(f"p must exceed 1, got {p}")
    if p >= TIGHT_P:
        return 0.5
    grid = np.unique(np.concatenate([np.logspace(-16, -4, 121), np.arange(step, 0.5 + step / 2, step)]))
    grid = grid[grid <= 0.5]
    valid = [t for t in grid if theta_valid(p, t)]
    if not valid:
        raise ValidationError(f"no valid theta for p={p} at working precision")

    def score(t):
        return lp_gap_factor(p, t, sp) if theta_valid(p, t) else -np.inf

    scores = [score(t) for t in valid]
    best = max(scores)
    k = max(i for i, s in enumerate(scores) if s >= best - 1e-15)
    t0 = valid[k]
    lo = valid[k - 1] if k > 0 else t0 / 2
    hi = valid[k + 1] if k + 1 < len(valid) else t0
    if hi - lo <= tol:
        return float(t0)
    t1 = _golden_max(score, lo, hi, tol)
    return float(t1) if score(t1) > best else float(t0)


def valid_theta_range(p, samples: int = 20001):
    """(smallest, largest) valid θ on a uniform grid, or None."""
    ts = np.linspace(0.5 / samples, 0.5, samples)
    ok = [t for t in ts if theta_valid(p, t)]
    return (ok[0], ok[-1]) if ok else None


def build_vc_dst_instance(graph: Graph, metric: str = "l1") -> DstInstance:
    """Edges become weight-2 indicator terminals (root 0 last), vertices weight-1 facilities."""
    if graph.m == 0:
        raise ValidationError("vertex-cover gadget needs at least one edge")
    kind = MetricKind.hamming() if metric in ("hamming", "l0") else MetricKind.lp(1)
    n = graph.n
    terminals = np.zeros((graph.m + 1, n))
    for e, (u, v) in enumerate(graph.edges):
        terminals[e, [u, v]] = 1.0
    return DstInstance(kind, terminals, graph.m, np.eye(n))


def vc_gap_factor(max_degree: int, a: float, b: float) -> float:
    if a > b:
        raise ValidationError(f"need a <= b, got a={a}, b={b}")
    return (max_degree / 2 + b) / (max_degree / 2 + a)


def euclidean_ab_gap(a: float, b: float) -> float:
    """Euclidean factor from an (a, b)-Gap SP3 instance.

    ``a`` and ``b`` are the uncovered fractions in the completeness and
    soundness cases (so a <= b); coverage 0.979 vs 0.969 is (0.021, 0.031).
    """
    if not 0 <= a <= b <= 1:
        raise ValidationError(f"need 0 <= a <= b <= 1, got a={a}, b={b}")
    return ((1 - b) * EUC_CONST + 1) / ((1 - a) * EUC_CONST + 1)


__all__ = [
    "INF",
    "TIGHT_P",
    "HALF_VALID_P",
    "LpGadgetParams",
    "theta_valid",
    "theta_margin",
    "lp_tuple",
    "build_lp_dst_instance",
    "lp_gap_factor",
    "tight_lp_gap",
    "intro_gamma",
    "optimal_theta",
    "gap_report",
    "valid_theta_range",
    "build_vc_dst_instance",
    "vc_gap_factor",
    "euclidean_ab_gap",
]
