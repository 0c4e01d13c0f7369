"""Splitting criteria for two-class decision nodes.

All entropies use log base 2, so a balanced two-class node scores exactly 1.
The Renyi family H_a(p) = log2(p^a + (1-p)^a) / (1 - a) generalizes the
Shannon entropy: it tends to Shannon as a -> 1, and at a = 0 it degenerates
to the Hartley entropy log2(support size). ``find_alpha`` walks a from 1
toward 0 and returns the largest grid value whose entropy is maximal (within
tolerance) on a node's class prior; strongly skewed priors therefore receive
small a, balanced priors keep a = 1.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClassDistribution:
    """Class counts at a node; label 1 is the (typically rare) positive."""

    count0: int
    count1: int

    def __post_init__(self):
        if self.count0 < 0 or self.count1 < 0:
            raise ValueError("class counts must be nonnegative")
        if self.count0 + self.count1 < 1:
            raise ValueError("a class distribution needs at least one instance")

    @property
    def total(self) -> int:
        return self.count0 + self.count1

    @property
    def p1(self) -> float:
        return self.count1 / self.total

    @classmethod
    def from_labels(cls, labels) -> "ClassDistribution":
        labels = np.asarray(labels)
        c1 = int(np.sum(labels == 1))
        return cls(count0=int(labels.size) - c1, count1=c1)

    def __add__(self, other: "ClassDistribution") -> "ClassDistribution":
        return ClassDistribution(self.count0 + other.count0, self.count1 + other.count1)


@dataclass(frozen=True)
class RenyiAlpha:
    """Entropy-order parameter; alpha = 1 denotes the Shannon limit."""

    alpha: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")


@dataclass(frozen=True)
class SplitCandidate:
    """A binary partition of a node: numeric threshold or category equality."""

    feature_index: int
    kind: str  # "numeric" | "categorical"
    value: float  # threshold (numeric) or category code (categorical)
    gain: float
    left_dist: ClassDistribution
    right_dist: ClassDistribution


def _alpha_value(a) -> float:
    return a.alpha if isinstance(a, RenyiAlpha) else float(a)


# Vectorized kernels. Both class probabilities are passed explicitly
# (computed as count/total each) so class-swap symmetry is bit-exact;
# deriving q as 1-p would lose that.


def _shannon_vec(p, q) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    out = np.zeros(np.broadcast(p, q).shape)
    for part in (p, q):
        pos = part > 0.0
        out = np.where(pos, out - part * np.log2(np.where(pos, part, 0.5)), out)
    return np.clip(out, 0.0, 1.0)  # rounding may overshoot the peak by one ulp


def _renyi_vec(p, q, alpha: float) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if abs(alpha - 1.0) < 1e-12:
        return _shannon_vec(p, q)
    mixed = (p > 0.0) & (q > 0.0)
    if alpha == 0.0:
        return np.where(mixed, 1.0, 0.0)
    safe_p = np.where(mixed, p, 0.5)
    safe_q = np.where(mixed, q, 0.5)
    total = safe_p**alpha + safe_q**alpha
    out = np.where(mixed, np.log2(total) / (1.0 - alpha), 0.0)
    return np.clip(out, 0.0, 1.0)  # rounding may overshoot the peak by one ulp


def _dkm_vec(p, q) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    return np.clip(2.0 * np.sqrt(p * q), 0.0, 1.0)


def shannon_entropy(dist: ClassDistribution) -> float:
    """-p*log2(p) - (1-p)*log2(1-p), with 0*log2(0) = 0."""
    t = dist.total
    return float(_shannon_vec(dist.count1 / t, dist.count0 / t))


def renyi_entropy(dist: ClassDistribution, a) -> float:
    """Renyi entropy of order ``a`` in bits; exactly Shannon at a = 1."""
    t = dist.total
    return float(_renyi_vec(dist.count1 / t, dist.count0 / t, _alpha_value(a)))


def dkm_impurity(dist: ClassDistribution) -> float:
    """2*sqrt(p*(1-p)): the impurity behind DKM-criterion trees."""
    t = dist.total
    return float(_dkm_vec(dist.count1 / t, dist.count0 / t))


def expected_child_entropy(children, entropy=shannon_entropy) -> float:
    """Size-weighted mean entropy over (ClassDistribution, weight) pairs.

    Information gain is the parent's entropy minus this value.
    """
    children = list(children)
    if not children:
        raise ValueError("expected_child_entropy needs at least one child")
    total = float(sum(w for _, w in children))
    if total <= 0:
        raise ValueError("child weights must sum to a positive value")
    return sum(w * entropy(dist) for dist, w in children) / total


def hellinger_split_value(
    left: ClassDistribution,
    right: ClassDistribution,
    parent: ClassDistribution,
) -> float:
    """Hellinger distance between the per-class branch distributions.

    With P+ and P- the parent's class counts and L/R the branch counts,
    d = sqrt((sqrt(L+/P+) - sqrt(L-/P-))^2 + (sqrt(R+/P+) - sqrt(R-/P-))^2).
    Ranges from 0 (identical branch proportions) to sqrt(2) (perfect
    separation); higher is better.
    """
    if parent.count0 == 0 or parent.count1 == 0:
        raise ValueError("Hellinger split value needs both classes in the parent")
    if left + right != parent:
        raise ValueError("left and right must partition the parent")
    lp, ln = left.count1 / parent.count1, left.count0 / parent.count0
    rp, rn = right.count1 / parent.count1, right.count0 / parent.count0
    return math.sqrt(
        (math.sqrt(lp) - math.sqrt(ln)) ** 2 + (math.sqrt(rp) - math.sqrt(rn)) ** 2
    )


def _hellinger_vec(l1, l0, r1, r0, n1: int, n0: int) -> np.ndarray:
    """Vectorized Hellinger value for candidate splits of one parent."""
    lp = np.sqrt(l1 / n1) - np.sqrt(l0 / n0)
    rp = np.sqrt(r1 / n1) - np.sqrt(r0 / n0)
    return np.sqrt(lp**2 + rp**2)


def alpha_grid(step: float) -> np.ndarray:
    """The search grid {1, 1-step, ..., step, 0}, descending."""
    if not 0.0 < step < 1.0:
        raise ValueError(f"step must lie in (0,1), got {step}")
    count = int(math.floor(1.0 / step - 1e-9)) + 1
    grid = 1.0 - step * np.arange(count, dtype=np.float64)
    return np.append(grid, 0.0)


def find_alpha(prior: ClassDistribution, step: float = 0.01, tol: float = 1e-3) -> RenyiAlpha:
    """Largest grid alpha whose Renyi entropy of ``prior`` is 1 within tol.

    Walks the grid from 1 downward and stops at the first satisfying value;
    alpha = 0 always satisfies the condition for a two-class prior, so the
    search terminates. A balanced prior returns alpha = 1 (the Shannon
    criterion).
    """
    if prior.count0 == 0 or prior.count1 == 0:
        raise ValueError("find_alpha needs both classes present at the node")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    t = prior.total
    p, q = prior.count1 / t, prior.count0 / t
    for a in alpha_grid(step):
        if abs(float(_renyi_vec(p, q, float(a))) - 1.0) <= tol:
            return RenyiAlpha(alpha=float(a))
    raise AssertionError("unreachable: alpha = 0 satisfies the condition")
