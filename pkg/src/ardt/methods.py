"""The benchmark method roster.

Linear track: plain linear/logistic regression, their cost-sensitive,
under-sampled, and over-sampled variants (all at the conventional 0.5
cutoff), plus +TH variants that instead move the cutoff to the training
fold's imbalance ratio. Tree track: Shannon (CDT), DKM (DKMDT), Hellinger
(HDDT), the fixed-alpha ensemble (EAT), and the adaptive-Renyi tree (ARDT).

Each pipeline's ``fit`` derives all of its randomness (resampling, pruning
split) from the seed it is handed, so pipelines never perturb one another.
"""

from dataclasses import dataclass, replace

from ardt.dataset import (
    Dataset,
    imbalance_ratio,
    oversample_minority,
    undersample_majority,
)
from ardt.linear import (
    LinearTrainConfig,
    cost_weights,
    fit_linear_regression,
    fit_logistic_regression,
    threshold_from_imbalance,
)
from ardt.seeding import derive_seed
from ardt.tree import DEFAULT_EAT_GRID, TreeConfig, train, train_eat

LINEAR_METHOD_NAMES = (
    "LinR", "LinR+CS", "LinR+US", "LinR+OS", "LinR+TH",
    "LogR", "LogR+CS", "LogR+US", "LogR+OS", "LogR+TH",
)
TREE_METHOD_NAMES = ("CDT", "DKMDT", "HDDT", "EAT", "ARDT")
METHOD_NAMES = LINEAR_METHOD_NAMES + TREE_METHOD_NAMES

# the paper-style comparison roster: plain/CS/US/OS linear variants + trees
BENCHMARK_METHODS = (
    "LinR", "LinR+CS", "LinR+US", "LinR+OS",
    "LogR", "LogR+CS", "LogR+US", "LogR+OS",
    "CDT", "DKMDT", "HDDT", "EAT", "ARDT",
)

_TREE_CRITERIA = {
    "CDT": "shannon",
    "DKMDT": "dkm",
    "HDDT": "hellinger",
    "ARDT": "adaptive-renyi",
}


@dataclass(frozen=True)
class MethodPipeline:
    """A named train/predict recipe; ``fit`` returns a model exposing
    ``predict_matrix`` over raw feature rows."""

    name: str
    _fit: object

    def fit(self, train_data: Dataset, seed: int):
        return self._fit(train_data, seed)


def _linear_fit(base: str, variant: str, cfg: LinearTrainConfig):
    fit_fn = fit_linear_regression if base == "LinR" else fit_logistic_regression

    def fit(train_data: Dataset, seed: int):
        mu = imbalance_ratio(train_data)
        local = cfg
        if variant == "CS":
            local = replace(local, instance_weights=cost_weights(mu))
        elif variant == "US":
            train_data = undersample_majority(train_data, derive_seed(seed, "resample"))
        elif variant == "OS":
            train_data = oversample_minority(train_data, derive_seed(seed, "resample"))
        model = fit_fn(train_data, local)
        if variant == "TH":
            model = model.with_threshold(threshold_from_imbalance(mu))
        return model

    return fit


def _tree_fit(criterion: str, cfg: TreeConfig):
    def fit(train_data: Dataset, seed: int):
        return train(train_data, replace(cfg, criterion=criterion, seed=seed))

    return fit


def _eat_fit(cfg: TreeConfig, grid):
    def fit(train_data: Dataset, seed: int):
        return train_eat(train_data, grid, replace(cfg, seed=seed))

    return fit


def build_method(
    spec: str,
    tree_config: TreeConfig | None = None,
    linear_config: LinearTrainConfig | None = None,
    eat_grid=DEFAULT_EAT_GRID,
) -> MethodPipeline:
    """Wire the named method into a pipeline.

    ``spec`` is one of METHOD_NAMES, or ``fixed-renyi(a)`` for a single
    Renyi tree at entropy order ``a``.
    """
    tree_cfg = tree_config or TreeConfig()
    if spec in _TREE_CRITERIA:
        return MethodPipeline(spec, _tree_fit(_TREE_CRITERIA[spec], tree_cfg))
    if spec == "EAT":
        return MethodPipeline(spec, _eat_fit(tree_cfg, tuple(eat_grid)))
    if spec.startswith("fixed-renyi(") and spec.endswith(")"):
        try:
            alpha = float(spec[len("fixed-renyi(") : -1])
        except ValueError:
            raise ValueError(f"bad alpha in method spec {spec!r}") from None
        cfg = replace(tree_cfg, fixed_alpha=alpha)
        return MethodPipeline(spec, _tree_fit("fixed-renyi", cfg))
    if spec in LINEAR_METHOD_NAMES:
        base, _, variant = spec.partition("+")
        default = LinearTrainConfig(
            method="closed-form-least-squares" if base == "LinR" else "gradient-descent")
        return MethodPipeline(spec, _linear_fit(base, variant, linear_config or default))
    raise ValueError(f"unknown method spec {spec!r}; expected one of {METHOD_NAMES}")
