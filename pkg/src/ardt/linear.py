"""Linear and logistic regression with imbalance-derived decision thresholds.

Both learners estimate p_i = g(w . x_i + w0) with g either the identity or
the logistic function. Minimizing either loss drives the intercept gradient
sum(p_i - y_i) to zero, so a converged unweighted fit has mean(p) equal to
the positive-class fraction mu. That is what makes the direct threshold rule
work: classifying scores at cutoff mu (instead of 0.5) realigns the decision
boundary with the class distribution. The indirect remedies are also here:
per-class cost weights c1 = 1/(2*mu), c0 = 1/(2*(1-mu)) rebalance the loss so
the weighted mean of p returns to 1/2.
"""

import json
import warnings
from dataclasses import dataclass

import numpy as np

from ardt.dataset import Dataset, ImbalanceRatio
from ardt.serialize import meta_from_dict, meta_to_dict, require

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray  # per expanded column
    intercept: float
    link: str  # "identity" | "logistic"
    threshold: float = 0.5
    feature_meta: tuple = ()  # pre-expansion metadata, for one-hot at predict
    converged: bool = True
    final_grad_norm: float = 0.0

    def __post_init__(self):
        if self.link not in ("identity", "logistic"):
            raise ValueError(f"unknown link {self.link!r}")
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def estimates(self, X) -> np.ndarray:
        """Raw estimates p = g(w . x + w0); identity-link values may leave
        [0, 1]. The mean of these over the training data matches the class
        prior for a converged unweighted fit."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.feature_meta):
            raise ValueError(
                f"expected (n, {len(self.feature_meta)}) features, got {X.shape}")
        theta = one_hot_expand(X, self.feature_meta) @ self.weights + self.intercept
        if self.link == "logistic":
            return _sigmoid(theta)
        return theta

    def scores(self, X) -> np.ndarray:
        """Estimates clamped to [0, 1]; what the threshold is compared to."""
        p = self.estimates(X)
        return np.clip(p, 0.0, 1.0) if self.link == "identity" else p

    def predict_matrix(self, X) -> np.ndarray:
        return (self.scores(X) >= self.threshold).astype(np.int64)

    def with_threshold(self, threshold: float) -> "LinearModel":
        return LinearModel(
            weights=self.weights, intercept=self.intercept, link=self.link,
            threshold=float(threshold), feature_meta=self.feature_meta,
            converged=self.converged, final_grad_norm=self.final_grad_norm)


@dataclass(frozen=True)
class LinearTrainConfig:
    method: str = "closed-form-least-squares"  # or "gradient-descent"
    learning_rate: float = 0.1
    max_iters: int = 5000
    grad_tol: float = 1e-8
    instance_weights: tuple | None = None  # (c1, c0)
    l2: float = 0.0  # optional ridge term for separable data, off by default
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("closed-form-least-squares", "gradient-descent"):
            raise ValueError(f"unknown fit method {self.method!r}")
        if self.learning_rate <= 0 or self.max_iters < 1 or self.grad_tol <= 0:
            raise ValueError("learning_rate, max_iters, and grad_tol must be positive")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")


def one_hot_expand(X, feature_meta) -> np.ndarray:
    """Expand categorical columns to indicator columns (lexicon order,
    reference level dropped); numeric columns pass through."""
    X = np.asarray(X, dtype=np.float64)
    cols = []
    for j, fm in enumerate(feature_meta):
        if fm.kind == "numeric":
            cols.append(X[:, j : j + 1])
        else:
            for code in range(1, len(fm.categories)):
                cols.append((X[:, j : j + 1] == code).astype(np.float64))
    return np.hstack(cols)


def _sigmoid(theta):
    out = np.empty_like(theta)
    pos = theta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-theta[pos]))
    e = np.exp(theta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _check_two_classes(d: Dataset):
    if np.all(d.labels == d.labels[0]):
        raise ValueError("fitting requires both classes present")


def _row_weights(d: Dataset, cfg: LinearTrainConfig) -> np.ndarray:
    if cfg.instance_weights is None:
        return np.ones(d.n)
    c1, c0 = cfg.instance_weights
    return np.where(d.labels == 1, float(c1), float(c0))


def _gradient_descent(X, y, c, link: str, cfg: LinearTrainConfig):
    """Full-batch gradient descent with a fixed learning rate.

    Features are standardized internally (a diagonal preconditioner) so one
    learning rate behaves across datasets; the returned weights are mapped
    back to the raw feature scale, which leaves the fitted model unchanged.
    Stops when the max-norm of the mean gradient falls below grad_tol.
    """
    n = X.shape[0]
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0] = 1.0
    Z = (X - mean) / std
    w = np.zeros(Z.shape[1])
    w0 = 0.0
    grad_norm = np.inf
    converged = False
    for _ in range(cfg.max_iters):
        theta = Z @ w + w0
        p = _sigmoid(theta) if link == "logistic" else theta
        r = c * (p - y)
        gw = Z.T @ r / n + cfg.l2 * w
        g0 = r.sum() / n
        grad_norm = max(float(np.abs(gw).max(initial=0.0)), abs(g0))
        if grad_norm <= cfg.grad_tol:
            converged = True
            break
        w -= cfg.learning_rate * gw
        w0 -= cfg.learning_rate * g0
    if not converged:
        warnings.warn(
            f"gradient descent stopped at max_iters={cfg.max_iters} "
            f"with gradient norm {grad_norm:.3e} (> {cfg.grad_tol:.1e})",
            RuntimeWarning,
            stacklevel=3,
        )
    raw_w = w / std
    raw_w0 = w0 - float(raw_w @ mean)
    return raw_w, raw_w0, converged, grad_norm


def fit_linear_regression(d: Dataset, cfg: LinearTrainConfig | None = None) -> LinearModel:
    """Least-squares fit of p = w . x + w0 to the 0/1 labels.

    The closed form solves the (weighted) normal equations; a singular
    system is reported and handed to gradient descent. At the optimum the
    intercept condition sum(c_y * (p - y)) = 0 holds, so unweighted fits
    match the class prior in mean.
    """
    cfg = cfg or LinearTrainConfig()
    _check_two_classes(d)
    X = one_hot_expand(d.features, d.feature_meta)
    y = d.labels.astype(np.float64)
    c = _row_weights(d, cfg)
    if cfg.method == "closed-form-least-squares":
        n, m = X.shape
        if n <= m:
            raise ValueError(
                f"closed-form fit needs more rows ({n}) than expanded columns ({m})")
        A = np.hstack([np.ones((n, 1)), X])
        G = A.T @ (c[:, None] * A)
        if cfg.l2 > 0:
            G += cfg.l2 * n * np.eye(m + 1)
        b = A.T @ (c * y)
        try:
            sol = np.linalg.solve(G, b)
        except np.linalg.LinAlgError:
            warnings.warn(
                "normal equations are singular; falling back to gradient descent",
                RuntimeWarning,
                stacklevel=2,
            )
            w, w0, converged, gnorm = _gradient_descent(X, y, c, "identity", cfg)
            return LinearModel(w, w0, "identity", feature_meta=d.feature_meta,
                               converged=converged, final_grad_norm=gnorm)
        return LinearModel(sol[1:], float(sol[0]), "identity",
                           feature_meta=d.feature_meta)
    w, w0, converged, gnorm = _gradient_descent(X, y, c, "identity", cfg)
    return LinearModel(w, w0, "identity", feature_meta=d.feature_meta,
                       converged=converged, final_grad_norm=gnorm)


def fit_logistic_regression(d: Dataset, cfg: LinearTrainConfig | None = None) -> LinearModel:
    """Gradient-descent fit of the (weighted) logistic log-likelihood.

    Perfectly separable data is capped by max_iters, which keeps the weights
    finite; non-convergence is reported as a RuntimeWarning carrying the
    final gradient norm.
    """
    cfg = cfg or LinearTrainConfig(method="gradient-descent")
    _check_two_classes(d)
    X = one_hot_expand(d.features, d.feature_meta)
    y = d.labels.astype(np.float64)
    c = _row_weights(d, cfg)
    w, w0, converged, gnorm = _gradient_descent(X, y, c, "logistic", cfg)
    return LinearModel(w, w0, "logistic", feature_meta=d.feature_meta,
                       converged=converged, final_grad_norm=gnorm)


def threshold_from_imbalance(mu) -> float:
    """The direct thresholding rule: the cutoff equals the class-1 fraction."""
    value = mu.mu if isinstance(mu, ImbalanceRatio) else float(mu)
    if not 0.0 < value < 1.0:
        raise ValueError(f"threshold is undefined for degenerate imbalance {value}")
    return value


def cost_weights(mu):
    """Per-class loss weights (c1, c0) = (1/(2*mu), 1/(2*(1-mu))).

    These satisfy c1*mu = c0*(1-mu) = 1/2: both classes carry equal total
    weight, as if the data were balanced.
    """
    value = mu.mu if isinstance(mu, ImbalanceRatio) else float(mu)
    if not 0.0 < value < 1.0:
        raise ValueError(f"cost weights are undefined for degenerate imbalance {value}")
    return 1.0 / (2.0 * value), 1.0 / (2.0 * (1.0 - value))


def classify(model: LinearModel, x) -> int:
    """1 iff the (clamped) score reaches the model's threshold."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("classify expects a single feature vector")
    return int(model.predict_matrix(x[None, :])[0])


# ---------------------------------------------------------------------------
# serialization


def model_to_json(model: LinearModel) -> str:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "model": "linear",
        "link": model.link,
        "weights": list(model.weights),
        "intercept": model.intercept,
        "threshold": model.threshold,
        "feature_meta": meta_to_dict(model.feature_meta),
    }
    return json.dumps(doc, indent=1)


def model_from_json(text: str) -> LinearModel:
    doc = json.loads(text)
    version = require(doc, "format_version", "model document")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {version!r}")
    if require(doc, "model", "model document") != "linear":
        raise ValueError("model file does not contain a linear model")
    return LinearModel(
        weights=np.asarray(require(doc, "weights", "model document"), dtype=np.float64),
        intercept=float(require(doc, "intercept", "model document")),
        link=require(doc, "link", "model document"),
        threshold=float(require(doc, "threshold", "model document")),
        feature_meta=meta_from_dict(require(doc, "feature_meta", "model document")),
    )
