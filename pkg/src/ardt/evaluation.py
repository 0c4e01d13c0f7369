"""Cross-validation harness and the rank-based statistical comparison.

Each method is scored by stratified k-fold cross-validation; everything the
method learns from (resampling, cost weights, thresholds, pruning slices)
is computed inside its training fold only. Per-dataset scores are converted
to tie-averaged ranks, compared with the Friedman chi-square test, and the
pairwise comparisons against a control method are screened with Holm's
step-down procedure.
"""

import time
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from ardt.dataset import Dataset, stratified_k_fold
from ardt.metrics import ConfusionMatrix, accuracy, confusion, fscore
from ardt.seeding import derive_seed


@dataclass(frozen=True)
class ExperimentResult:
    dataset: str
    method: str
    fold_confusions: tuple
    fold_fscores: tuple
    fold_accuracies: tuple
    mean_fscore: float
    mean_accuracy: float
    wall_time: float


@dataclass(frozen=True)
class RankTable:
    """Tie-averaged ranks (rank 1 = best) per dataset row and method column."""

    ranks: np.ndarray  # (datasets, methods)
    average: np.ndarray  # (methods,)


def cross_validate(method, d: Dataset, k: int, seed: int) -> ExperimentResult:
    """Stratified k-fold evaluation of one method pipeline on one dataset.

    The fold split depends only on (dataset, seed), so different methods are
    compared on identical folds; the per-fold fit seed also carries the
    method name, so adding a method never disturbs another's draws.
    """
    folds = stratified_k_fold(d, k, derive_seed(seed, "fold"))
    cms = []
    t0 = time.perf_counter()
    for fold in range(k):
        test_idx = folds.fold_indices(fold)
        train_idx = np.flatnonzero(folds.fold_index_per_row != fold)
        if np.intersect1d(test_idx, train_idx).size:
            raise AssertionError("leakage guard: train and test folds overlap")
        model = method.fit(
            d.subset(train_idx, name=f"{d.name}/fold{fold}"),
            derive_seed(seed, d.name, method.name, "fold", fold),
        )
        predicted = model.predict_matrix(d.features[test_idx])
        cms.append(confusion(d.labels[test_idx], predicted))
    wall = time.perf_counter() - t0
    fscores = tuple(fscore(cm) for cm in cms)
    accuracies = tuple(accuracy(cm) for cm in cms)
    return ExperimentResult(
        dataset=d.name,
        method=method.name,
        fold_confusions=tuple(cms),
        fold_fscores=fscores,
        fold_accuracies=accuracies,
        mean_fscore=float(np.mean(fscores)),
        mean_accuracy=float(np.mean(accuracies)),
        wall_time=wall,
    )


def average_ranks(scores, higher_is_better: bool = True) -> RankTable:
    """Rank methods within each dataset row, averaging ties.

    With ``higher_is_better`` the best score gets rank 1; tied scores share
    the mean of the ranks they span (two methods tied for 8th and 9th both
    rank 8.5).
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[0] < 1 or scores.shape[1] < 1:
        raise ValueError("scores must be a (datasets x methods) matrix")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must have no missing cells")
    oriented = -scores if higher_is_better else scores
    ranks = np.vstack([sps.rankdata(row, method="average") for row in oriented])
    return RankTable(ranks=ranks, average=ranks.mean(axis=0))


def friedman_test(ranks: RankTable):
    """Friedman chi-square over a rank table.

    chi2_F = 12N/(k(k+1)) * (sum_j Rbar_j^2 - k(k+1)^2/4), compared against
    the chi-square distribution with k-1 degrees of freedom.
    """
    n, k = ranks.ranks.shape
    if n < 2 or k < 2:
        raise ValueError(f"need >= 2 datasets and >= 2 methods, got {n}x{k}")
    rbar = ranks.average
    statistic = 12.0 * n / (k * (k + 1.0)) * (float(np.sum(rbar**2)) - k * (k + 1.0) ** 2 / 4.0)
    p_value = float(sps.chi2.sf(statistic, df=k - 1))
    return statistic, p_value


def holm_stepdown(p_values, control_index=None, alpha: float = 0.05):
    """Holm's step-down screen over pairwise p-values.

    Sorts ascending and rejects while p_(i) <= alpha/(m-i+1), stopping at the
    first failure. Returns per-entry rejection flags in input order; when
    ``control_index`` is given, that entry is the control itself and is never
    rejected (its p-value is ignored).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    p_values = list(p_values)
    if not p_values:
        raise ValueError("no p-values to screen")
    compared = [i for i in range(len(p_values)) if i != control_index]
    order = sorted(compared, key=lambda i: p_values[i])
    m = len(order)
    rejected = [False] * len(p_values)
    for step, i in enumerate(order):
        if p_values[i] <= alpha / (m - step):
            rejected[i] = True
        else:
            break
    return rejected


def compare_to_control(ranks: RankTable, control_index: int, alpha: float = 0.05):
    """Pairwise z-tests of every method against a control, Holm-screened.

    z_i = (Rbar_i - Rbar_control) / sqrt(k(k+1)/(6N)); two-sided p-values.
    Methods not rejected are statistically equivalent to the control at
    level ``alpha``.
    """
    n, k = ranks.ranks.shape
    rbar = ranks.average
    se = np.sqrt(k * (k + 1.0) / (6.0 * n))
    z = (rbar - rbar[control_index]) / se
    p = 2.0 * sps.norm.sf(np.abs(z))
    p[control_index] = 1.0
    rejected = holm_stepdown(list(p), control_index=control_index, alpha=alpha)
    return {
        "z": z.tolist(),
        "p": p.tolist(),
        "rejected": rejected,
        "equivalent_to_control": [not r for r in rejected],
    }
