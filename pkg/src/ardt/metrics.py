"""Confusion-matrix metrics for binary classification.

The positive class is label 1 throughout. Any ratio with a zero denominator
is defined as 0 so that degenerate predictors score worst instead of raising.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(actual, predicted) -> ConfusionMatrix:
    """Count TP/FP/TN/FN for two equal-length binary label sequences."""
    a = np.asarray(actual, dtype=np.int64)
    p = np.asarray(predicted, dtype=np.int64)
    if a.shape != p.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {p.shape}")
    if a.size == 0:
        raise ValueError("empty label sequences")
    return ConfusionMatrix(
        tp=int(np.sum((a == 1) & (p == 1))),
        fp=int(np.sum((a == 0) & (p == 1))),
        tn=int(np.sum((a == 0) & (p == 0))),
        fn=int(np.sum((a == 1) & (p == 0))),
    )


def _ratio(num: int, den: int) -> float:
    return num / den if den > 0 else 0.0


def precision(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fp)


def sensitivity(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fn)


def specificity(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tn, cm.tn + cm.fp)


def accuracy(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp + cm.tn, cm.total)


def fscore(cm: ConfusionMatrix) -> float:
    """F1 = 2*TP / (2*TP + FP + FN); 0 when the denominator vanishes."""
    return _ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn)


def bcr(cm: ConfusionMatrix) -> float:
    """Balanced classification rate: arithmetic mean of sensitivity and
    specificity."""
    return 0.5 * (sensitivity(cm) + specificity(cm))


def bcr_geometric(cm: ConfusionMatrix) -> float:
    """Geometric-mean variant of the balanced classification rate."""
    return float(np.sqrt(sensitivity(cm) * specificity(cm)))
