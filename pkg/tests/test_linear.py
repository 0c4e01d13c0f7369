import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ardt.dataset import Dataset, FeatureMeta, imbalance_ratio
from ardt.linear import (
    LinearModel,
    LinearTrainConfig,
    classify,
    cost_weights,
    fit_linear_regression,
    fit_logistic_regression,
    model_from_json,
    model_to_json,
    threshold_from_imbalance,
)
from ardt.metrics import confusion, sensitivity, specificity
from ardt.synth import SynthSpec, generate

CONVERGED = LinearTrainConfig(
    method="gradient-descent", learning_rate=0.5, max_iters=60000, grad_tol=1e-9)


def test_identity_line_fit():
    d = Dataset(np.array([[0.0], [1.0]]), np.array([0, 1]))
    model = fit_linear_regression(d)
    assert model.weights[0] == pytest.approx(1.0, abs=1e-9)
    assert model.intercept == pytest.approx(0.0, abs=1e-9)


def test_linear_regression_mean_match():
    d = generate(SynthSpec(n=400, m=3, mu=0.2, seed=1))
    model = fit_linear_regression(d)
    assert abs(model.estimates(d.features).mean() - imbalance_ratio(d).mu) < 1e-8


def test_linear_regression_residual_identity():
    d = generate(SynthSpec(n=300, m=2, mu=0.5, separation=3.0, seed=7))
    model = fit_linear_regression(d)
    residual = model.estimates(d.features) - d.labels
    assert abs(residual.mean()) < 1e-8


def test_logistic_balanced_symmetric():
    x = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    d = Dataset(x, np.array([0, 0, 1, 1]))
    model = fit_logistic_regression(d, LinearTrainConfig(
        method="gradient-descent", learning_rate=0.5, max_iters=20000, grad_tol=1e-10))
    assert model.intercept == pytest.approx(0.0, abs=1e-6)
    assert model.estimates(np.array([[0.0]]))[0] == pytest.approx(0.5, abs=1e-6)


def test_logistic_mean_match():
    d = generate(SynthSpec(n=800, m=3, mu=0.1, seed=3))
    model = fit_logistic_regression(d, CONVERGED)
    assert model.converged
    assert abs(model.estimates(d.features).mean() - imbalance_ratio(d).mu) < 1e-4


def test_logistic_weighted_mean_match():
    d = generate(SynthSpec(n=800, m=3, mu=0.1, seed=4))
    mu = imbalance_ratio(d).mu
    c1, c0 = cost_weights(mu)
    cfg = LinearTrainConfig(
        method="gradient-descent", learning_rate=0.2, max_iters=60000,
        grad_tol=1e-9, instance_weights=(c1, c0))
    model = fit_logistic_regression(d, cfg)
    p = model.estimates(d.features)
    w = np.where(d.labels == 1, c1, c0)
    assert abs((w * p).sum() / w.sum() - 0.5) < 1e-4


def test_nonconvergence_reported():
    d = generate(SynthSpec(n=100, m=2, mu=0.3, seed=5))
    with pytest.warns(RuntimeWarning, match="gradient norm"):
        model = fit_logistic_regression(d, LinearTrainConfig(
            method="gradient-descent", max_iters=3))
    assert not model.converged
    assert model.final_grad_norm > 0


def test_separable_data_stays_finite():
    x = np.array([[-1.0], [-0.5], [0.5], [1.0]])
    d = Dataset(x, np.array([0, 0, 1, 1]))
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        model = fit_logistic_regression(d, LinearTrainConfig(
            method="gradient-descent", max_iters=500))
    assert np.all(np.isfinite(model.weights)) and np.isfinite(model.intercept)


def test_singular_system_falls_back():
    rng = np.random.default_rng(0)
    col = rng.standard_normal(50)
    X = np.column_stack([col, col])  # exactly collinear
    d = Dataset(X, (col > 0).astype(int))
    with pytest.warns(RuntimeWarning, match="singular"):
        model = fit_linear_regression(d)
    assert model.link == "identity"


def test_closed_form_needs_enough_rows():
    d = Dataset(np.random.default_rng(1).standard_normal((3, 4)), np.array([0, 1, 0]))
    with pytest.raises(ValueError, match="more rows"):
        fit_linear_regression(d)


def test_duplication_invariance():
    d = generate(SynthSpec(n=200, m=3, mu=0.3, seed=6))
    doubled = Dataset(
        np.vstack([d.features, d.features]), np.concatenate([d.labels, d.labels]))
    a = fit_linear_regression(d)
    b = fit_linear_regression(doubled)
    assert np.allclose(a.weights, b.weights, atol=1e-10)
    assert a.intercept == pytest.approx(b.intercept, abs=1e-10)


def test_threshold_from_imbalance():
    assert threshold_from_imbalance(0.5) == 0.5
    assert threshold_from_imbalance(0.16) == 0.16
    assert threshold_from_imbalance(0.03) == 0.03
    for bad in (0.0, 1.0):
        with pytest.raises(ValueError):
            threshold_from_imbalance(bad)


def test_cost_weights():
    c1, c0 = cost_weights(0.25)
    assert c1 == pytest.approx(2.0)
    assert c0 == pytest.approx(2.0 / 3.0)
    assert cost_weights(0.5) == (1.0, 1.0)


@given(st.floats(0.01, 0.99))
def test_cost_weight_identities(mu):
    c1, c0 = cost_weights(mu)
    assert c1 * mu + c0 * (1 - mu) == pytest.approx(1.0, abs=1e-12)
    assert c1 * mu == pytest.approx(c0 * (1 - mu), abs=1e-12)


def _bare_model(link, weights, intercept, threshold):
    return LinearModel(
        weights=np.array(weights), intercept=intercept, link=link,
        threshold=threshold, feature_meta=(FeatureMeta("f0", "numeric"),))


def test_classify_threshold_rules():
    m = _bare_model("identity", [0.0], 0.4, 0.5)
    assert classify(m, np.array([0.0])) == 0       # score below threshold
    m = _bare_model("identity", [0.0], 0.5, 0.5)
    assert classify(m, np.array([0.0])) == 1       # score at threshold
    m = _bare_model("identity", [0.0], 1.3, 1.0)
    assert classify(m, np.array([0.0])) == 1       # raw 1.3 clamps to 1.0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_threshold_monotonicity(seed):
    rng = np.random.default_rng(seed)
    scores = rng.uniform(0, 1, 60)
    labels = rng.integers(0, 2, 60)
    model = _bare_model("identity", [1.0], 0.0, 0.5)
    X = scores[:, None]
    prev_sens, prev_spec = None, None
    for threshold in (0.9, 0.6, 0.3, 0.1):
        cm = confusion(labels, model.with_threshold(threshold).predict_matrix(X))
        if prev_sens is not None:
            assert sensitivity(cm) >= prev_sens - 1e-12
            assert specificity(cm) <= prev_spec + 1e-12
        prev_sens, prev_spec = sensitivity(cm), specificity(cm)


def test_one_hot_categorical_fit():
    rng = np.random.default_rng(2)
    codes = rng.integers(0, 3, 60).astype(float)
    noise = rng.standard_normal(60)
    labels = (codes == 2).astype(int)
    meta = (
        FeatureMeta("c", "categorical", ("a", "b", "z")),
        FeatureMeta("x", "numeric"),
    )
    d = Dataset(np.column_stack([codes, noise]), labels, meta)
    model = fit_linear_regression(d)
    assert len(model.weights) == 3  # two indicators + one numeric column
    assert (model.predict_matrix(d.features) == labels).mean() > 0.9


def test_model_json_round_trip():
    d = generate(SynthSpec(n=120, m=3, mu=0.3, seed=8))
    model = fit_linear_regression(d).with_threshold(0.3)
    loaded = model_from_json(model_to_json(model))
    assert np.array_equal(loaded.predict_matrix(d.features), model.predict_matrix(d.features))
    assert loaded.threshold == model.threshold
    assert loaded.link == model.link


def test_model_json_rejects_bad_documents():
    d = generate(SynthSpec(n=60, m=2, mu=0.4, seed=9))
    text = model_to_json(fit_linear_regression(d))
    import json
    doc = json.loads(text)
    del doc["weights"]
    with pytest.raises(ValueError, match="weights"):
        model_from_json(json.dumps(doc))
    doc = json.loads(text)
    doc["format_version"] = 99
    with pytest.raises(ValueError, match="format_version"):
        model_from_json(json.dumps(doc))
