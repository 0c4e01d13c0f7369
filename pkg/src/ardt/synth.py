"""Seeded synthetic imbalanced datasets.

Class counts are realized exactly (positives = round(mu * n)) so tests on the
imbalance ratio are sharp. ``linear-gaussian`` is linearly separable up to
class overlap; ``xor`` and ``annulus`` have boundaries no linear classifier
can represent. Label noise is applied as an exact count-preserving exchange:
round(noise * minority_count) rows of each class swap labels.
"""

import csv
from dataclasses import dataclass

import numpy as np

from ardt.dataset import Dataset, FeatureMeta

BOUNDARIES = ("linear-gaussian", "xor", "annulus")


@dataclass(frozen=True)
class SynthSpec:
    n: int
    m: int
    mu: float
    boundary: str = "linear-gaussian"
    separation: float = 2.0
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if not 0.0 < self.mu < 1.0:
            raise ValueError(f"mu must lie in (0,1), got {self.mu}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}; expected {BOUNDARIES}")
        if self.boundary in ("xor", "annulus") and self.m < 2:
            raise ValueError(f"{self.boundary} data needs at least 2 features")
        if not 0.0 <= self.noise < 0.5:
            raise ValueError(f"noise must lie in [0, 0.5), got {self.noise}")


def generate(spec: SynthSpec) -> Dataset:
    rng = np.random.default_rng(spec.seed)
    n_pos = int(round(spec.mu * spec.n))
    n_pos = min(max(n_pos, 1), spec.n - 1)
    labels = np.zeros(spec.n, dtype=np.int64)
    labels[:n_pos] = 1
    X = rng.standard_normal((spec.n, spec.m))

    if spec.boundary == "linear-gaussian":
        # spherical class-conditional Gaussians, means separation apart
        direction = np.ones(spec.m) / np.sqrt(spec.m)
        offset = (spec.separation / 2.0) * direction
        X[labels == 1] += offset
        X[labels == 0] -= offset
    elif spec.boundary == "xor":
        # positives in the (+,+)/(-,-) quadrants of the first two features
        mag = rng.uniform(0.05, 1.0, size=(spec.n, 2))
        s0 = rng.choice([-1.0, 1.0], size=spec.n)
        same = np.where(labels == 1, 1.0, -1.0)
        X[:, 0] = s0 * mag[:, 0]
        X[:, 1] = s0 * same * mag[:, 1]
    else:  # annulus: positives in an outer ring around the negatives
        angle = rng.uniform(0.0, 2.0 * np.pi, size=spec.n)
        radius = np.where(
            labels == 1,
            rng.uniform(1.0, 1.5, size=spec.n),
            rng.uniform(0.0, 0.8, size=spec.n),
        )
        X[:, 0] = radius * np.cos(angle)
        X[:, 1] = radius * np.sin(angle)

    if spec.noise > 0:
        n_swap = int(round(spec.noise * min(n_pos, spec.n - n_pos)))
        if n_swap > 0:
            pos_rows = np.flatnonzero(labels == 1)
            neg_rows = np.flatnonzero(labels == 0)
            labels[rng.choice(pos_rows, size=n_swap, replace=False)] = 0
            labels[rng.choice(neg_rows, size=n_swap, replace=False)] = 1

    perm = rng.permutation(spec.n)
    meta = tuple(FeatureMeta(f"f{j}", "numeric") for j in range(spec.m))
    name = f"synth-{spec.boundary}-n{spec.n}-mu{spec.mu:g}-s{spec.seed}"
    return Dataset(features=X[perm], labels=labels[perm], feature_meta=meta, name=name)


def generate_daily_blocks(
    days: int,
    rows_per_day: int,
    m: int = 16,
    boundary: str = "xor",
    mu_range=(0.06, 0.16),
    noise: float = 0.0,
    seed: int = 0,
) -> Dataset:
    """Concatenated per-day blocks with the day's positive rate drawn
    uniformly from ``mu_range`` — a stand-in for a production line whose
    scrap rate fluctuates day to day."""
    if days < 1 or rows_per_day < 2:
        raise ValueError("need at least one day of at least two rows")
    rng = np.random.default_rng(seed)
    blocks = []
    for day in range(days):
        mu = float(rng.uniform(*mu_range))
        spec = SynthSpec(
            n=rows_per_day, m=m, mu=mu, boundary=boundary, noise=noise,
            seed=int(rng.integers(2**62)),
        )
        blocks.append(generate(spec))
    features = np.vstack([b.features for b in blocks])
    labels = np.concatenate([b.labels for b in blocks])
    return Dataset(
        features=features, labels=labels, feature_meta=blocks[0].feature_meta,
        name=f"synth-daily-{boundary}-{days}x{rows_per_day}-s{seed}")


def write_csv(d: Dataset, path) -> None:
    """Write a dataset as a CSV file that ``load_csv`` reads back
    (label column ``label``, positive value ``1``)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([fm.name for fm in d.feature_meta] + ["label"])
        for i in range(d.n):
            row = []
            for j, fm in enumerate(d.feature_meta):
                if fm.kind == "numeric":
                    row.append(repr(float(d.features[i, j])))
                else:
                    row.append(fm.categories[int(d.features[i, j])])
            row.append(str(int(d.labels[i])))
            writer.writerow(row)
