import numpy as np
import pytest

from ardt.dataset import imbalance_ratio
from ardt.linear import LinearModel
from ardt.methods import BENCHMARK_METHODS, METHOD_NAMES, build_method
from ardt.synth import SynthSpec, generate
from ardt.tree import DecisionTree, EnsembleModel


def test_roster_names():
    assert len(BENCHMARK_METHODS) == 13
    assert set(BENCHMARK_METHODS) <= set(METHOD_NAMES)
    for extra in ("LinR+TH", "LogR+TH"):
        assert extra in METHOD_NAMES


def test_unknown_method_rejected():
    with pytest.raises(ValueError, match="NoSuchMethod"):
        build_method("NoSuchMethod")


def test_logr_cs_uses_fold_cost_weights():
    d = generate(SynthSpec(n=300, m=2, mu=0.25, seed=0))
    model = build_method("LogR+CS").fit(d, seed=1)
    assert model.link == "logistic"
    # the weighted stationarity pins the weighted mean of p at 1/2
    p = model.estimates(d.features)
    mu = imbalance_ratio(d).mu
    w = np.where(d.labels == 1, 1 / (2 * mu), 1 / (2 * (1 - mu)))
    assert abs((w * p).sum() / w.sum() - 0.5) < 1e-3


def test_cdt_is_a_shannon_tree():
    d = generate(SynthSpec(n=200, m=2, mu=0.3, seed=1))
    model = build_method("CDT").fit(d, seed=2)
    assert isinstance(model, DecisionTree)
    assert model.config.criterion == "shannon"


def test_logr_th_threshold_is_fold_imbalance():
    d = generate(SynthSpec(n=400, m=2, mu=0.1, seed=2))
    model = build_method("LogR+TH").fit(d, seed=3)
    assert isinstance(model, LinearModel)
    assert model.threshold == imbalance_ratio(d).mu


def test_plain_variants_use_half_threshold():
    d = generate(SynthSpec(n=300, m=2, mu=0.2, seed=3))
    for name in ("LinR", "LogR", "LinR+US", "LogR+OS", "LinR+CS"):
        model = build_method(name).fit(d, seed=4)
        assert model.threshold == 0.5


def test_eat_pipeline():
    d = generate(SynthSpec(n=250, m=2, mu=0.2, seed=4))
    model = build_method("EAT").fit(d, seed=5)
    assert isinstance(model, EnsembleModel)
    assert len(model.trees) == 7


def test_fixed_renyi_spec_string():
    d = generate(SynthSpec(n=200, m=2, mu=0.3, seed=5))
    model = build_method("fixed-renyi(0.5)").fit(d, seed=6)
    assert isinstance(model, DecisionTree)
    assert model.config.fixed_alpha == 0.5
    with pytest.raises(ValueError, match="bad alpha"):
        build_method("fixed-renyi(x)")


def test_resampled_fits_are_seed_deterministic():
    d = generate(SynthSpec(n=300, m=3, mu=0.15, seed=6))
    for name in ("LinR+US", "LinR+OS"):
        a = build_method(name).fit(d, seed=7)
        b = build_method(name).fit(d, seed=7)
        assert np.array_equal(a.weights, b.weights)
        assert a.intercept == b.intercept
