import numpy as np
import pytest

from ardt.dataset import imbalance_ratio, load_csv
from ardt.metrics import accuracy, confusion
from ardt.methods import build_method
from ardt.synth import SynthSpec, generate, generate_daily_blocks, write_csv


def test_exact_positive_count():
    d = generate(SynthSpec(n=1000, m=2, mu=0.1, seed=0))
    assert int(d.labels.sum()) == 100


def test_determinism():
    spec = SynthSpec(n=300, m=3, mu=0.2, boundary="annulus", noise=0.1, seed=42)
    a, b = generate(spec), generate(spec)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.labels, b.labels)


def test_values_finite_all_boundaries():
    for boundary in ("linear-gaussian", "xor", "annulus"):
        d = generate(SynthSpec(n=200, m=4, mu=0.3, boundary=boundary, seed=1))
        assert np.all(np.isfinite(d.features))


def test_noise_preserves_class_counts():
    clean = generate(SynthSpec(n=500, m=2, mu=0.2, seed=3))
    noisy = generate(SynthSpec(n=500, m=2, mu=0.2, noise=0.2, seed=3))
    assert clean.labels.sum() == noisy.labels.sum() == 100


def test_xor_defeats_linear_models_but_not_trees():
    train = generate(SynthSpec(n=600, m=2, mu=0.5, boundary="xor", seed=10))
    test = generate(SynthSpec(n=600, m=2, mu=0.5, boundary="xor", seed=11))
    tree_acc = accuracy(confusion(
        test.labels, build_method("CDT").fit(train, 0).predict_matrix(test.features)))
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        logr_acc = accuracy(confusion(
            test.labels, build_method("LogR").fit(train, 0).predict_matrix(test.features)))
    assert tree_acc > 0.95
    assert 0.3 < logr_acc < 0.7


def test_spec_validation():
    with pytest.raises(ValueError):
        SynthSpec(n=10, m=2, mu=0.0)
    with pytest.raises(ValueError):
        SynthSpec(n=10, m=1, mu=0.2, boundary="xor")
    with pytest.raises(ValueError):
        SynthSpec(n=10, m=2, mu=0.2, noise=0.5)
    with pytest.raises(ValueError):
        SynthSpec(n=10, m=2, mu=0.2, boundary="spiral")


def test_daily_blocks_shape_and_determinism():
    a = generate_daily_blocks(days=5, rows_per_day=100, m=3, seed=7)
    b = generate_daily_blocks(days=5, rows_per_day=100, m=3, seed=7)
    assert a.n == 500 and a.m == 3
    assert np.array_equal(a.features, b.features)
    mu = imbalance_ratio(a).mu
    assert 0.05 <= mu <= 0.17  # fluctuating daily rate stays in its band


def test_csv_round_trip(tmp_path):
    d = generate(SynthSpec(n=150, m=3, mu=0.2, seed=9))
    path = tmp_path / "synth.csv"
    write_csv(d, path)
    loaded = load_csv(path, "label", "1")
    assert loaded.n == d.n and loaded.m == d.m
    assert np.array_equal(loaded.labels, d.labels)
    assert np.allclose(loaded.features, d.features, rtol=0, atol=0)
