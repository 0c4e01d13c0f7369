"""Top-down induction of binary decision trees, parameterized by splitting
criterion.

Criteria: ``shannon`` (classic information gain), ``dkm``, ``hellinger``,
``fixed-renyi`` (Renyi gain at one alpha), and ``adaptive-renyi``, which
re-selects alpha at every node from that node's class prior before scoring
candidate splits. Trees are pruned bottom-up against a held-out slice using
the balanced classification rate, so pruning cannot quietly trade away the
minority class the way error-rate pruning does.
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from ardt.criteria import (
    ClassDistribution,
    SplitCandidate,
    _dkm_vec,
    _hellinger_vec,
    _renyi_vec,
    _shannon_vec,
    find_alpha,
)
from ardt.dataset import Dataset, split_holdout
from ardt.metrics import bcr, bcr_geometric, confusion
from ardt.seeding import derive_seed
from ardt.serialize import meta_from_dict, meta_to_dict, require

TREE_FORMAT_VERSION = 1

CRITERIA = ("shannon", "dkm", "hellinger", "adaptive-renyi", "fixed-renyi")

DEFAULT_EAT_GRID = (0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class TreeConfig:
    criterion: str = "shannon"
    fixed_alpha: float = 1.0  # only read when criterion == "fixed-renyi"
    min_node_size: int = 2
    max_depth: int | None = 30
    min_gain: float = 0.0
    find_alpha_step: float = 0.01
    find_alpha_tol: float = 1e-3
    prune: bool = True
    prune_fraction: float = 0.2
    geometric_pruning_rate: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}; expected one of {CRITERIA}")
        if self.min_node_size < 1:
            raise ValueError("min_node_size must be >= 1")
        if not 0.0 < self.prune_fraction < 1.0:
            raise ValueError("prune_fraction must lie in (0,1)")
        if self.min_gain < 0:
            raise ValueError("min_gain must be >= 0")


@dataclass(frozen=True)
class Leaf:
    label: int
    counts: ClassDistribution


@dataclass(frozen=True)
class DecisionNode:
    feature: int
    kind: str  # "numeric" | "categorical"
    value: float  # threshold (numeric) or category code (categorical)
    left: object
    right: object
    prior: ClassDistribution
    alpha_used: float | None = None


def _majority_label(dist: ClassDistribution) -> int:
    # ties go to the positive class
    return 1 if dist.count1 >= dist.count0 else 0


def _goes_left(node: DecisionNode, value: float) -> bool:
    if node.kind == "numeric":
        return value <= node.value
    return value == node.value


@dataclass(frozen=True)
class DecisionTree:
    root: object
    config: TreeConfig
    feature_meta: tuple

    @property
    def n_features(self) -> int:
        return len(self.feature_meta)

    def predict(self, x) -> int:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_features,):
            raise ValueError(
                f"expected a feature vector of length {self.n_features}, got shape {x.shape}")
        node = self.root
        while isinstance(node, DecisionNode):
            node = node.left if _goes_left(node, x[node.feature]) else node.right
        return node.label

    def predict_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected (n, {self.n_features}) features, got {X.shape}")
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if isinstance(node, Leaf):
                out[idx] = node.label
                continue
            col = X[idx, node.feature]
            mask = col <= node.value if node.kind == "numeric" else col == node.value
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
        return out

    def node_count(self) -> int:
        def count(node):
            if isinstance(node, Leaf):
                return 1
            return 1 + count(node.left) + count(node.right)

        return count(self.root)

    def depth(self) -> int:
        def d(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(d(node.left), d(node.right))

        return d(self.root)


# ---------------------------------------------------------------------------
# induction


def _gain_function(cfg: TreeConfig, prior: ClassDistribution):
    """Returns (vectorized split scorer, alpha_used) for one node.

    The scorer maps candidate count arrays (l1, l0, r1, r0) to the value that
    induction maximizes: information gain for the entropy-family criteria,
    the raw Hellinger distance for ``hellinger``.
    """
    alpha_used = None
    if cfg.criterion == "shannon":
        entropy_vec = _shannon_vec
    elif cfg.criterion == "dkm":
        entropy_vec = _dkm_vec
    elif cfg.criterion == "fixed-renyi":
        entropy_vec = lambda p, q: _renyi_vec(p, q, cfg.fixed_alpha)
    elif cfg.criterion == "adaptive-renyi":
        alpha_used = find_alpha(prior, cfg.find_alpha_step, cfg.find_alpha_tol).alpha
        a = alpha_used
        entropy_vec = lambda p, q: _renyi_vec(p, q, a)
    else:  # hellinger
        n1, n0 = prior.count1, prior.count0

        def hellinger_score(l1, l0, r1, r0):
            return _hellinger_vec(l1, l0, r1, r0, n1, n0)

        return hellinger_score, None

    t = prior.total
    parent_value = float(entropy_vec(prior.count1 / t, prior.count0 / t))

    def gain(l1, l0, r1, r0):
        ln = l1 + l0
        rn = r1 + r0
        child = (
            ln * entropy_vec(l1 / ln, l0 / ln) + rn * entropy_vec(r1 / rn, r0 / rn)
        ) / t
        return parent_value - child

    return gain, alpha_used


def _best_split(X, y, idx, feature_meta, score_fn, prior):
    """Best SplitCandidate at a node, or None when no split separates rows.

    Ties in score resolve to the lower feature index, then the lower
    threshold / category code, so induction is deterministic.
    """
    n1 = prior.count1
    n0 = prior.count0
    best = None
    for j, meta in enumerate(feature_meta):
        col = X[idx, j]
        yv = y[idx]
        if meta.kind == "numeric":
            order = np.argsort(col, kind="stable")
            v = col[order]
            cum1 = np.cumsum(yv[order])
            cuts = np.flatnonzero(v[:-1] != v[1:])
            if cuts.size == 0:
                continue
            l_n = cuts + 1
            l1 = cum1[cuts]
            l0 = l_n - l1
            scores = score_fn(l1.astype(np.float64), l0.astype(np.float64),
                              np.float64(n1) - l1, np.float64(n0) - l0)
            i = int(np.argmax(scores))  # first max = lowest threshold
            score = float(scores[i])
            if best is None or score > best.gain:
                b = cuts[i]
                best = SplitCandidate(
                    feature_index=j,
                    kind="numeric",
                    value=float((v[b] + v[b + 1]) / 2.0),
                    gain=score,
                    left_dist=ClassDistribution(count0=int(l0[i]), count1=int(l1[i])),
                    right_dist=ClassDistribution(
                        count0=n0 - int(l0[i]), count1=n1 - int(l1[i])),
                )
        else:
            codes, inverse = np.unique(col, return_inverse=True)
            if codes.size < 2:
                continue
            group_n = np.bincount(inverse)
            group_1 = np.bincount(inverse, weights=yv).astype(np.float64)
            l1 = group_1
            l0 = group_n - group_1
            scores = score_fn(l1, l0, np.float64(n1) - l1, np.float64(n0) - l0)
            i = int(np.argmax(scores))  # codes ascend, first max wins
            score = float(scores[i])
            if best is None or score > best.gain:
                best = SplitCandidate(
                    feature_index=j,
                    kind="categorical",
                    value=float(codes[i]),
                    gain=score,
                    left_dist=ClassDistribution(count0=int(l0[i]), count1=int(l1[i])),
                    right_dist=ClassDistribution(
                        count0=n0 - int(l0[i]), count1=n1 - int(l1[i])),
                )
    return best


def _grow(X, y, idx, feature_meta, cfg, depth):
    dist = ClassDistribution.from_labels(y[idx])
    if (
        dist.count0 == 0
        or dist.count1 == 0
        or dist.total < cfg.min_node_size
        or (cfg.max_depth is not None and depth >= cfg.max_depth)
    ):
        return Leaf(label=_majority_label(dist), counts=dist)
    score_fn, alpha_used = _gain_function(cfg, dist)
    best = _best_split(X, y, idx, feature_meta, score_fn, dist)
    if best is None or best.gain <= cfg.min_gain:
        return Leaf(label=_majority_label(dist), counts=dist)
    col = X[idx, best.feature_index]
    if best.kind == "numeric":
        mask = col <= best.value
    else:
        mask = col == best.value
    return DecisionNode(
        feature=best.feature_index,
        kind=best.kind,
        value=best.value,
        left=_grow(X, y, idx[mask], feature_meta, cfg, depth + 1),
        right=_grow(X, y, idx[~mask], feature_meta, cfg, depth + 1),
        prior=dist,
        alpha_used=alpha_used,
    )


def train(d: Dataset, cfg: TreeConfig) -> DecisionTree:
    """Grow (and, unless disabled, BCR-prune) a decision tree on ``d``.

    When pruning is on, a stratified ``prune_fraction`` slice is carved off
    ``d`` first; induction never sees it. Deterministic for fixed
    (dataset, config).
    """
    if np.all(d.labels == d.labels[0]):
        raise ValueError("training requires both classes present")
    if cfg.prune:
        grow_part, prune_part = split_holdout(
            d, cfg.prune_fraction, derive_seed(cfg.seed, "prune-split"))
    else:
        grow_part, prune_part = d, None
    root = _grow(
        grow_part.features, grow_part.labels,
        np.arange(grow_part.n), grow_part.feature_meta, cfg, depth=0)
    tree = DecisionTree(root=root, config=cfg, feature_meta=grow_part.feature_meta)
    if prune_part is not None:
        tree = prune_bcr(tree, prune_part)
    return tree


def prune_bcr(tree: DecisionTree, prune_set: Dataset) -> DecisionTree:
    """Bottom-up subtree replacement judged by balanced classification rate.

    Each internal node (post-order) is replaced by its training-majority leaf
    whenever that does not decrease the BCR over the whole pruning set; ties
    keep the pruned form. The result never has more nodes and never scores a
    lower pruning-set BCR than the input.
    """
    if prune_set.n < 1:
        raise ValueError("prune set must be nonempty")
    rate = bcr_geometric if tree.config.geometric_pruning_rate else bcr
    X = prune_set.features
    y = prune_set.labels
    pred = tree.predict_matrix(X)

    def walk(node, idx):
        if isinstance(node, Leaf):
            return node
        col = X[idx, node.feature]
        mask = col <= node.value if node.kind == "numeric" else col == node.value
        new_left = walk(node.left, idx[mask])
        new_right = walk(node.right, idx[~mask])
        node = replace(node, left=new_left, right=new_right)
        leaf = Leaf(label=_majority_label(node.prior), counts=node.prior)
        if idx.size == 0:
            return leaf  # unreachable by pruning data: tie, keep simpler form
        before = rate(confusion(y, pred))
        saved = pred[idx].copy()
        pred[idx] = leaf.label
        after = rate(confusion(y, pred))
        if after >= before:
            return leaf
        pred[idx] = saved
        return node

    root = walk(tree.root, np.arange(prune_set.n))
    return DecisionTree(root=root, config=tree.config, feature_meta=tree.feature_meta)


# ---------------------------------------------------------------------------
# ensembles of fixed-alpha trees


@dataclass(frozen=True)
class EnsembleModel:
    trees: tuple
    alphas: tuple

    def __post_init__(self):
        if len(self.trees) != len(self.alphas) or not self.trees:
            raise ValueError("ensemble needs one alpha per tree and at least one tree")

    @property
    def n_features(self) -> int:
        return self.trees[0].n_features

    def predict_matrix(self, X) -> np.ndarray:
        votes = np.stack([t.predict_matrix(X) for t in self.trees])
        # majority vote; exact ties go to the positive class
        return (2 * votes.sum(axis=0) >= len(self.trees)).astype(np.int64)


def train_eat(d: Dataset, alpha_grid=DEFAULT_EAT_GRID, cfg: TreeConfig | None = None) -> EnsembleModel:
    """Train one fixed-alpha Renyi tree per grid value on the same data.

    All member trees share the same seed-derived pruning split, so they
    differ only through their entropy order.
    """
    alphas = tuple(float(a) for a in alpha_grid)
    if not alphas:
        raise ValueError("alpha grid must be nonempty")
    cfg = cfg or TreeConfig()
    if cfg.prune:
        grow_part, prune_part = split_holdout(
            d, cfg.prune_fraction, derive_seed(cfg.seed, "prune-split"))
    else:
        grow_part, prune_part = d, None
    trees = []
    for a in alphas:
        member_cfg = replace(cfg, criterion="fixed-renyi", fixed_alpha=a, prune=False)
        tree = train(grow_part, member_cfg)
        if prune_part is not None:
            tree = prune_bcr(tree, prune_part)
        trees.append(tree)
    return EnsembleModel(trees=tuple(trees), alphas=alphas)


def predict_ensemble(e: EnsembleModel, x) -> int:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (e.n_features,):
        raise ValueError(
            f"expected a feature vector of length {e.n_features}, got shape {x.shape}")
    return int(e.predict_matrix(x[None, :])[0])


# ---------------------------------------------------------------------------
# serialization


def _node_to_dict(node):
    if isinstance(node, Leaf):
        return {
            "type": "leaf",
            "label": node.label,
            "counts": [node.counts.count0, node.counts.count1],
        }
    return {
        "type": "split",
        "feature": node.feature,
        "kind": node.kind,
        "value": node.value,
        "alpha_used": node.alpha_used,
        "counts": [node.prior.count0, node.prior.count1],
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(obj):
    kind = require(obj, "type", "tree node")
    counts = require(obj, "counts", "tree node")
    dist = ClassDistribution(count0=int(counts[0]), count1=int(counts[1]))
    if kind == "leaf":
        return Leaf(label=int(require(obj, "label", "leaf")), counts=dist)
    if kind != "split":
        raise ValueError(f"malformed model file: unknown node type {kind!r}")
    alpha = obj.get("alpha_used")
    return DecisionNode(
        feature=int(require(obj, "feature", "split node")),
        kind=require(obj, "kind", "split node"),
        value=float(require(obj, "value", "split node")),
        left=_node_from_dict(require(obj, "left", "split node")),
        right=_node_from_dict(require(obj, "right", "split node")),
        prior=dist,
        alpha_used=None if alpha is None else float(alpha),
    )


def tree_to_json(tree: DecisionTree) -> str:
    doc = {
        "format_version": TREE_FORMAT_VERSION,
        "model": "decision-tree",
        "criterion": tree.config.criterion,
        "fixed_alpha": tree.config.fixed_alpha,
        "feature_meta": meta_to_dict(tree.feature_meta),
        "root": _node_to_dict(tree.root),
    }
    return json.dumps(doc, indent=1)


def tree_from_json(text: str) -> DecisionTree:
    doc = json.loads(text)
    version = require(doc, "format_version", "model document")
    if version != TREE_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {version!r}")
    if require(doc, "model", "model document") != "decision-tree":
        raise ValueError("model file does not contain a decision tree")
    cfg = TreeConfig(
        criterion=require(doc, "criterion", "model document"),
        fixed_alpha=float(doc.get("fixed_alpha", 1.0)),
    )
    return DecisionTree(
        root=_node_from_dict(require(doc, "root", "model document")),
        config=cfg,
        feature_meta=meta_from_dict(require(doc, "feature_meta", "model document")),
    )


def ensemble_to_json(e: EnsembleModel) -> str:
    doc = {
        "format_version": TREE_FORMAT_VERSION,
        "model": "ensemble",
        "alphas": list(e.alphas),
        "trees": [json.loads(tree_to_json(t)) for t in e.trees],
    }
    return json.dumps(doc, indent=1)


def ensemble_from_json(text: str) -> EnsembleModel:
    doc = json.loads(text)
    version = require(doc, "format_version", "model document")
    if version != TREE_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {version!r}")
    if require(doc, "model", "model document") != "ensemble":
        raise ValueError("model file does not contain an ensemble")
    trees = tuple(
        tree_from_json(json.dumps(t)) for t in require(doc, "trees", "model document"))
    return EnsembleModel(trees=trees, alphas=tuple(require(doc, "alphas", "model document")))
