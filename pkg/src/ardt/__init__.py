"""Imbalance-aware classification: threshold selection for linear models and
adaptive Renyi decision trees, with the cross-validation benchmark harness
used to compare them."""

__version__ = "0.1.0"

from ardt.dataset import (
    Dataset,
    FeatureMeta,
    FoldAssignment,
    ImbalanceRatio,
    imbalance_ratio,
    load_csv,
    load_keel,
    oversample_minority,
    split_holdout,
    stratified_k_fold,
    undersample_majority,
)
from ardt.criteria import (
    ClassDistribution,
    RenyiAlpha,
    SplitCandidate,
    dkm_impurity,
    expected_child_entropy,
    find_alpha,
    hellinger_split_value,
    renyi_entropy,
    shannon_entropy,
)
from ardt.metrics import (
    ConfusionMatrix,
    accuracy,
    bcr,
    bcr_geometric,
    confusion,
    fscore,
    precision,
    sensitivity,
    specificity,
)
from ardt.linear import (
    LinearModel,
    LinearTrainConfig,
    classify,
    cost_weights,
    fit_linear_regression,
    fit_logistic_regression,
    threshold_from_imbalance,
)
from ardt.tree import (
    DecisionNode,
    DecisionTree,
    EnsembleModel,
    Leaf,
    TreeConfig,
    predict_ensemble,
    prune_bcr,
    train,
    train_eat,
)
from ardt.methods import METHOD_NAMES, MethodPipeline, build_method
from ardt.synth import SynthSpec, generate, generate_daily_blocks
from ardt.evaluation import (
    ExperimentResult,
    RankTable,
    average_ranks,
    compare_to_control,
    cross_validate,
    friedman_test,
    holm_stepdown,
)
