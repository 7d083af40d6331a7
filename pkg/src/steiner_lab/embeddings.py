"""Hamming → Ulam pair-swap embedding and code-based dimension reduction for sparse bounded points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import CapExceeded, ValidationError
from .io import to_csv
from .metric import lp_norm


def ulam_embed(x, separators: int = 1) -> tuple:
    """Pair-swap embedding of a bit vector into repetition-free strings.

    Bit i becomes a block of two fresh symbols, in order when 0 and swapped
    when 1. ``separators`` fresh symbols go between consecutive blocks: with
    none, two adjacent swapped blocks are 3 edits apart (1234 vs 2143), so the
    doubling identity needs at least one. Symbols are 1..(2 + s)n - s.
    """
    bits = [int(b) for b in x]
    if not bits:
        raise ValidationError("ulam_embed needs n >= 1")
    if any(b not in (0, 1) for b in bits):
        raise ValidationError("ulam_embed expects a 0/1 vector")
    if separators < 0:
        raise ValidationError("separators must be nonnegative")
    out = []
    width = 2 + separators
    for i, b in enumerate(bits):
        a = width * i + 1
        out.extend((a + 1, a) if b else (a, a + 1))
        if i < len(bits) - 1:
            out.extend(range(a + 2, a + width))
    return tuple(out)


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % r for r in range(2, math.isqrt(q) + 1))


@dataclass(frozen=True)
class LinearCode:
    """Reed–Solomon code over the prime field F_q: degree < K polynomials evaluated at 0..N-1."""

    q: int
    K: int
    N: int

    def __post_init__(self):
        if not _is_prime(self.q):
            raise ValidationError(f"only prime fields are supported, got q={self.q}")
        if not 1 <= self.K <= self.N <= self.q:
            raise ValidationError(f"need 1 <= K <= N <= q, got K={self.K}, N={self.N}, q={self.q}")

    @property
    def min_distance(self) -> int:
        return self.N - self.K + 1

    @property
    def capacity(self) -> int:
        return self.q**self.K

    def message(self, i: int) -> tuple:
        """Base-q digits of i-1 (most significant first), K digits; i is 1-based."""
        if not 1 <= i <= self.capacity:
            raise ValidationError(f"index {i} outside [1, {self.capacity}]")
        v, digits = i - 1, []
        for _ in range(self.K):
            digits.append(v % self.q)
            v //= self.q
        return tuple(reversed(digits))

    def encode(self, msg) -> tuple:
        msg = [int(c) % self.q for c in msg]
        if len(msg) != self.K:
            raise ValidationError(f"message length {len(msg)} != K={self.K}")
        out = []
        for a in range(self.N):
            acc = 0
            for c in msg:  # Horner, most significant coefficient first
                acc = (acc * a + c) % self.q
            out.append(acc)
        return tuple(out)

    def to_json(self) -> dict:
        return {"q": self.q, "K": self.K, "N": self.N}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        try:
            return cls(int(obj["q"]), int(obj["K"]), int(obj["N"]))
        except KeyError as exc:
            raise ValidationError(f"code JSON missing key {exc}") from exc


def one_hot_blocks(word, q: int) -> np.ndarray:
    """Each symbol e in 0..q-1 becomes a length-q block with its single 1 at 0-based offset e."""
    word = [int(c) for c in word]
    if any(not 0 <= c < q for c in word):
        raise ValidationError(f"symbols must lie in [0, {q})")
    out = np.zeros(len(word) * q, dtype=np.int8)
    for t, c in enumerate(word):
        out[t * q + c] = 1
    return out


def bitstring(v) -> str:
    return "".join(str(int(b)) for b in v)


@dataclass(frozen=True)
class DimReductionParams:
    code: LinearCode
    support_bound: int
    magnitude_bound: float
    alpha: float = field(default=None)

    def __post_init__(self):
        if self.support_bound < 1 or not self.magnitude_bound > 0:
            raise ValidationError("support and magnitude bounds must be positive")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 1.0 / self.code.N)
        if not self.alpha > 0:
            raise ValidationError("alpha must be positive")

    @property
    def out_dim(self) -> int:
        return self.code.q * self.code.N


def sigma_basis(i: int, params: DimReductionParams) -> np.ndarray:
    """Image of the 1-based basis vector e_i: index → message → codeword → one-hot blocks."""
    code = params.code
    return one_hot_blocks(code.encode(code.message(i)), code.q).astype(float)


def _support(x) -> dict:
    """1-based index → nonzero value, from a dense vector or an index dict."""
    if isinstance(x, dict):
        return {int(i): float(a) for i, a in x.items() if a != 0}
    return {i + 1: float(a) for i, a in enumerate(np.ravel(x)) if a != 0}


def sigma_extend(x, params: DimReductionParams) -> np.ndarray:
    """Coordinate j carries a_i when exactly one support index lands on j, else 0."""
    supp = _support(x)
    if len(supp) > params.support_bound:
        raise ValidationError(f"support {len(supp)} exceeds bound {params.support_bound}")
    if supp and max(abs(a) for a in supp.values()) > params.magnitude_bound:
        raise ValidationError(f"magnitude exceeds bound {params.magnitude_bound}")
    out = np.zeros(params.out_dim)
    hits = np.zeros(params.out_dim, dtype=int)
    for i, a in supp.items():
        b = sigma_basis(i, params)
        out += a * b
        hits += (b != 0).astype(int)
    out[hits != 1] = 0.0
    return out


@dataclass
class DistortionReport:
    min_ratio: float
    max_ratio: float
    lower_bound: float
    upper_bound: float
    ok: bool
    witness: tuple | None
    rows: list

    def to_csv(self) -> str:
        return to_csv(["pair", "original", "embedded", "ratio"], [(f"{i}-{j}", o, e, r) for i, j, o, e, r in self.rows])

    def to_json(self) -> dict:
        return {
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "ok": self.ok,
            "witness": list(self.witness) if self.witness else None,
        }


def distortion_bounds(params: DimReductionParams, p: float, min_dist_p: float):
    """Generalized band [1 - 2C(N-d)/N, 1 + 2C(N-d)B^p / min ||x-y||_p^p]."""
    code = params.code
    overlap = code.N - code.min_distance
    C, B = params.support_bound, params.magnitude_bound
    lower = 1 - 2 * C * overlap / code.N
    upper = 1 + 2 * C * overlap * B**p / min_dist_p if min_dist_p > 0 else math.inf
    return lower, upper


def measure_distortion(P, p: float, params: DimReductionParams, max_pairs: int = 200_000) -> DistortionReport:
    """α||σx - σy||_p^p / ||x - y||_p^p over every unordered pair of distinct points."""
    if math.isinf(p):
        raise ValidationError("p = inf is not supported by the code-based reduction")
    P = np.atleast_2d(np.asarray(P, dtype=float))
    n = len(P)
    if n * (n - 1) // 2 > max_pairs:
        raise CapExceeded("distortion pairs", max_pairs, n * (n - 1) // 2)
    images = np.array([sigma_extend(x, params) for x in P])
    rows = []
    for i, j in combinations(range(n), 2):
        orig = float(lp_norm(P[i] - P[j], p) ** p)
        if orig == 0:
            continue
        emb = params.alpha * float(lp_norm(images[i] - images[j], p) ** p)
        rows.append((i, j, orig, emb, emb / orig))
    if not rows:
        raise ValidationError("need at least two distinct points")
    min_orig = min(r[2] for r in rows)
    lower, upper = distortion_bounds(params, p, min_orig)
    witness = None
    for i, j, _, _, r in rows:
        if r < lower - 1e-12 or r > upper + 1e-12:
            witness = (i, j)
            break
    ratios = [r[4] for r in rows]
    return DistortionReport(min(ratios), max(ratios), lower, upper, witness is None, witness, rows)
