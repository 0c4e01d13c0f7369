"""Binary-labeled tabular datasets: loading, validation, stratified folds,
and the two random rebalancing schemes (majority under-sampling and minority
over-sampling).

A Dataset is immutable after construction; every randomized operation here is
a pure function of (input, seed).
"""

import csv
import re
from dataclasses import dataclass

import numpy as np


class DatasetError(ValueError):
    """Raised for malformed files or operations whose preconditions fail."""


@dataclass(frozen=True)
class FeatureMeta:
    """Per-column metadata. ``categories`` is the lexicon for categorical
    columns, in first-appearance order; codes index into it."""

    name: str
    kind: str  # "numeric" | "categorical"
    categories: tuple = None

    def __post_init__(self):
        if self.kind not in ("numeric", "categorical"):
            raise DatasetError(f"unknown feature kind {self.kind!r}")
        if self.kind == "categorical" and not self.categories:
            raise DatasetError(f"categorical column {self.name!r} needs a lexicon")


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray  # (n, m) float64; categorical cells hold integer codes
    labels: np.ndarray  # (n,) int64 in {0, 1}
    feature_meta: tuple = ()
    name: str = "dataset"

    def __post_init__(self):
        features = np.ascontiguousarray(self.features, dtype=np.float64)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if features.ndim != 2 or features.shape[0] < 1 or features.shape[1] < 1:
            raise DatasetError("features must be a nonempty 2-D matrix")
        if labels.shape != (features.shape[0],):
            raise DatasetError("labels length must match feature rows")
        if not np.all((labels == 0) | (labels == 1)):
            raise DatasetError("labels must be exactly 0 or 1")
        meta = tuple(self.feature_meta) or tuple(
            FeatureMeta(f"f{j}", "numeric") for j in range(features.shape[1])
        )
        if len(meta) != features.shape[1]:
            raise DatasetError("feature_meta length must match feature columns")
        for j, fm in enumerate(meta):
            if fm.kind == "categorical":
                col = features[:, j]
                codes = col.astype(np.int64)
                if np.any(codes != col) or codes.min() < 0 or codes.max() >= len(fm.categories):
                    raise DatasetError(
                        f"column {fm.name!r} has codes outside its lexicon")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_meta", meta)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def m(self) -> int:
        return self.features.shape[1]

    def subset(self, indices, name=None) -> "Dataset":
        """Row-subset (or re-ordered / repeated rows) of this dataset."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            features=self.features[idx],
            labels=self.labels[idx],
            feature_meta=self.feature_meta,
            name=name or self.name,
        )


@dataclass(frozen=True)
class ImbalanceRatio:
    """Fraction of instances carrying label 1."""

    mu: float

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise DatasetError(f"imbalance ratio must lie in [0,1], got {self.mu}")


@dataclass(frozen=True)
class FoldAssignment:
    fold_index_per_row: np.ndarray
    k: int

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_index_per_row == fold)


def imbalance_ratio(d: Dataset) -> ImbalanceRatio:
    return ImbalanceRatio(mu=float(np.sum(d.labels == 1)) / d.n)


# ---------------------------------------------------------------------------
# loading


def _parse_rows(rows, header, label_column, positive_label, name):
    ncol = len(header)
    if isinstance(label_column, int):
        label_idx = label_column if label_column >= 0 else ncol + label_column
        if not 0 <= label_idx < ncol:
            raise DatasetError(f"label column index {label_column} out of range")
    else:
        matches = [j for j, h in enumerate(header) if h == label_column]
        if len(matches) == 0:
            raise DatasetError(f"label column {label_column!r} not in header {header}")
        if len(matches) > 1:
            raise DatasetError(f"label column {label_column!r} is ambiguous")
        label_idx = matches[0]

    if not rows:
        raise DatasetError("file contains a header but no data rows")
    for rownum, row in rows:
        if len(row) != ncol:
            raise DatasetError(
                f"row {rownum}: expected {ncol} fields, found {len(row)}")
        for j, cell in enumerate(row):
            if cell == "":
                raise DatasetError(
                    f"row {rownum}, column {header[j]!r}: missing value")

    label_values = []
    for _, row in rows:
        if row[label_idx] not in label_values:
            label_values.append(row[label_idx])
    if len(label_values) != 2:
        raise DatasetError(
            f"label column must have exactly 2 distinct values, found {label_values}")
    if positive_label not in label_values:
        raise DatasetError(
            f"positive label {positive_label!r} not among label values {label_values}")
    labels = np.array(
        [1 if row[label_idx] == positive_label else 0 for _, row in rows],
        dtype=np.int64,
    )

    feature_cols = [j for j in range(ncol) if j != label_idx]
    n = len(rows)
    features = np.empty((n, len(feature_cols)), dtype=np.float64)
    meta = []
    for out_j, j in enumerate(feature_cols):
        cells = [row[j] for _, row in rows]
        try:
            features[:, out_j] = [float(c) for c in cells]
            meta.append(FeatureMeta(header[j], "numeric"))
        except ValueError:
            lexicon = []
            codes = np.empty(n, dtype=np.float64)
            for i, c in enumerate(cells):
                if c not in lexicon:
                    lexicon.append(c)
                codes[i] = lexicon.index(c)
            features[:, out_j] = codes
            meta.append(FeatureMeta(header[j], "categorical", tuple(lexicon)))
    return Dataset(features=features, labels=labels, feature_meta=tuple(meta), name=name)


def load_csv(path, label_column, positive_label: str) -> Dataset:
    """Load a comma-separated file (header row, UTF-8, '.' decimal point).

    ``label_column`` selects the label by header name or integer position;
    ``positive_label`` is the raw token mapped to 1. Columns where every cell
    parses as a float become numeric; all others become categorical with a
    first-appearance lexicon.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise DatasetError(f"no such file: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        rows = [
            (i, [c.strip() for c in row])
            for i, row in enumerate(reader, start=2)
            if row
        ]
    name = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return _parse_rows(rows, header, label_column, positive_label, name)


def load_keel(path, label_column=None, positive_label: str = "positive") -> Dataset:
    """Load a KEEL ``.dat`` file.

    Lines starting with ``@`` are header directives: ``@attribute`` lines name
    the columns (in order) and ``@output``/``@outputs`` names the label
    column. Data lines after the header parse exactly like CSV rows.
    """
    attributes = []
    output_name = None
    data_rows = []
    rownum = 0
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise DatasetError(f"no such file: {path}") from None
    with fh:
        for line in fh:
            rownum += 1
            line = line.strip()
            if not line:
                continue
            if line.startswith("@"):
                token = line.split(None, 1)[0].lower()
                if token == "@attribute":
                    # "@attribute Name real [0.0, 1.0]" or "@attribute Class {a, b}"
                    rest = line.split(None, 1)[1].strip()
                    attributes.append(re.split(r"[\s{]", rest, maxsplit=1)[0])
                elif token in ("@output", "@outputs"):
                    output_name = line.split(None, 1)[1].strip()
                continue
            data_rows.append((rownum, [c.strip() for c in line.split(",")]))
    if not attributes:
        raise DatasetError(f"{path}: no @attribute lines found")
    if label_column is None:
        label_column = output_name if output_name is not None else len(attributes) - 1
    name = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return _parse_rows(data_rows, attributes, label_column, positive_label, name)


# ---------------------------------------------------------------------------
# folds and resampling


def _class_indices(d: Dataset):
    pos = np.flatnonzero(d.labels == 1)
    neg = np.flatnonzero(d.labels == 0)
    return pos, neg


def stratified_k_fold(d: Dataset, k: int, seed: int) -> FoldAssignment:
    """Partition rows into k stratified folds, deterministic per seed.

    Fold sizes differ by at most one row and each fold's class-1 count is
    within one of n1/k.
    """
    if k < 2:
        raise DatasetError(f"fold count must be >= 2, got {k}")
    pos, neg = _class_indices(d)
    for label, idx in ((1, pos), (0, neg)):
        if len(idx) < k:
            raise DatasetError(
                f"class {label} has {len(idx)} members, fewer than k={k}")
    rng = np.random.default_rng(seed)
    assignment = np.empty(d.n, dtype=np.int64)
    # Positives hand their remainder to the lowest fold numbers; negatives
    # continue from there (cyclically) so total sizes stay within one.
    offset = 0
    for idx in (pos, neg):
        shuffled = rng.permutation(idx)
        base, rem = divmod(len(idx), k)
        counts = np.full(k, base, dtype=np.int64)
        counts[[(offset + r) % k for r in range(rem)]] += 1
        fold_of = np.repeat(np.arange(k), counts)
        assignment[shuffled] = fold_of
        offset += rem
    return FoldAssignment(fold_index_per_row=assignment, k=k)


def undersample_majority(d: Dataset, seed: int) -> Dataset:
    """Drop random majority rows until both classes have minority size."""
    pos, neg = _class_indices(d)
    if len(pos) == 0 or len(neg) == 0:
        raise DatasetError("undersampling requires both classes present")
    minority, majority = (pos, neg) if len(pos) <= len(neg) else (neg, pos)
    rng = np.random.default_rng(seed)
    kept = rng.choice(majority, size=len(minority), replace=False)
    idx = np.sort(np.concatenate([minority, kept]))
    return d.subset(idx, name=f"{d.name}+US")


def oversample_minority(d: Dataset, seed: int) -> Dataset:
    """Append random minority duplicates until both classes have majority
    size. All original rows are kept."""
    pos, neg = _class_indices(d)
    if len(pos) == 0 or len(neg) == 0:
        raise DatasetError("oversampling requires both classes present")
    minority, majority = (pos, neg) if len(pos) <= len(neg) else (neg, pos)
    rng = np.random.default_rng(seed)
    extra = rng.choice(minority, size=len(majority) - len(minority), replace=True)
    idx = np.concatenate([np.arange(d.n), extra])
    return d.subset(idx, name=f"{d.name}+OS")


def split_holdout(d: Dataset, fraction: float, seed: int):
    """Stratified (train, holdout) split with |holdout| = round(fraction*n)."""
    if not 0.0 < fraction < 1.0:
        raise DatasetError(f"holdout fraction must lie in (0,1), got {fraction}")
    pos, neg = _class_indices(d)
    if len(pos) < 2 or len(neg) < 2:
        raise DatasetError("both classes need >= 2 members to split")
    h = int(round(fraction * d.n))
    h_pos = min(max(int(round(fraction * len(pos))), 1), len(pos) - 1)
    h_neg = min(max(h - h_pos, 1), len(neg) - 1)
    if h_pos + h_neg < 2 or (d.n - h_pos - h_neg) < 2:
        raise DatasetError("classes too small for the requested split")
    rng = np.random.default_rng(seed)
    hold = np.concatenate([
        rng.permutation(pos)[:h_pos],
        rng.permutation(neg)[:h_neg],
    ])
    mask = np.zeros(d.n, dtype=bool)
    mask[hold] = True
    train_idx = np.flatnonzero(~mask)
    hold_idx = np.flatnonzero(mask)
    return (
        d.subset(train_idx, name=f"{d.name}/train"),
        d.subset(hold_idx, name=f"{d.name}/holdout"),
    )
