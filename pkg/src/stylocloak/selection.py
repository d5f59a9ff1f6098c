"""Entropy, information-gain split search, feature ranking, and
decision-tree / random-forest classification.

Everything is measured in bits (log base 2), so a perfect split of a
balanced binary dataset reads exactly 1.0 and the keep/discard ranking
thresholds (0.5 / 0.1) sit on a natural scale.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArityMismatchError,
    EmptyInputError,
    LengthMismatchError,
    SingleClassError,
)
from .hashing import position_hash
from .stylometry import FEATURE_NAMES

KEEP = "KEEP"
MID = "MID"
UNINFORMATIVE = "UNINFORMATIVE"

KEEP_THRESHOLD = 0.5
DISCARD_THRESHOLD = 0.1

DEFAULT_MAX_DEPTH = 16
DEFAULT_MIN_GAIN = 1e-12
DEFAULT_TREES = 32

MODEL_VERSION = 1


@dataclass
class LabeledMatrix:
    x: np.ndarray                  # (n_rows, n_features) float
    y: np.ndarray                  # (n_rows,) int in {0, 1}
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=int)
        if self.x.ndim != 2:
            raise ValueError("feature matrix must be 2-dimensional")
        if len(self.x) != len(self.y):
            raise LengthMismatchError(f"{len(self.x)} rows vs {len(self.y)} labels")
        if len(self.x) == 0:
            raise EmptyInputError("matrix has no rows")
        if self.x.shape[1] != len(self.feature_names):
            raise ArityMismatchError(
                f"{self.x.shape[1]} columns vs {len(self.feature_names)} feature names"
            )

    @classmethod
    def from_feature_vectors(cls, vectors) -> "LabeledMatrix":
        missing = [v.text_id for v in vectors if v.label is None]
        if missing:
            raise ValueError(f"unlabeled rows: {', '.join(missing[:5])}")
        x = np.array([v.values() for v in vectors], dtype=float)
        y = np.array([v.label for v in vectors], dtype=int)
        return cls(x, y, FEATURE_NAMES)


def entropy(labels) -> float:
    """Shannon entropy of a 0/1 label list, in bits."""
    labels = list(labels)
    if not labels:
        raise EmptyInputError("entropy of an empty label list is undefined")
    n = len(labels)
    ones = sum(1 for v in labels if v == 1)
    h = 0.0
    for count in (ones, n - ones):
        if count:
            p = count / n
            h -= p * math.log2(p)
    return h


@dataclass(frozen=True)
class SplitResult:
    threshold: float
    gain_bits: float
    feature_index: int
    degenerate: bool = False       # all feature values equal; no real split


def best_split(xs, ys, feature_index: int = 0) -> SplitResult:
    """Exhaustive search over midpoints between consecutive distinct values.

    The split is ``x <= threshold`` versus ``x > threshold``; ties in gain
    resolve toward the smallest threshold.
    """
    xs = list(xs)
    ys = list(ys)
    if len(xs) != len(ys):
        raise LengthMismatchError(f"{len(xs)} values vs {len(ys)} labels")
    if len(xs) < 2:
        raise EmptyInputError("need at least 2 rows to split")
    n = len(xs)
    distinct = sorted(set(xs))
    if len(distinct) == 1:
        return SplitResult(distinct[0], 0.0, feature_index, degenerate=True)
    parent = entropy(ys)
    pairs = sorted(zip(xs, ys))
    best_gain = -1.0
    best_threshold = None
    for a, b in zip(distinct, distinct[1:]):
        theta = (a + b) / 2
        left = [y for x, y in pairs if x <= theta]
        right = [y for x, y in pairs if x > theta]
        gain = parent - (len(left) / n) * entropy(left) - (len(right) / n) * entropy(right)
        if gain > best_gain:
            best_gain = gain
            best_threshold = theta
    return SplitResult(best_threshold, best_gain, feature_index)


@dataclass(frozen=True)
class RankedFeature:
    name: str
    gain_bits: float
    threshold: float
    verdict: str


def _verdict(gain: float) -> str:
    if gain > KEEP_THRESHOLD:
        return KEEP
    if gain < DISCARD_THRESHOLD:
        return UNINFORMATIVE
    return MID


def rank_features(m: LabeledMatrix) -> list[RankedFeature]:
    """Best split per feature, sorted by gain descending.

    Equal gains keep the matrix's feature order (stable sort).
    """
    if len(m.x) < 2:
        raise EmptyInputError("ranking needs at least 2 rows")
    if len(set(m.y.tolist())) < 2:
        raise SingleClassError("both labels must be present to rank features")
    ranked = []
    for j, name in enumerate(m.feature_names):
        split = best_split(m.x[:, j].tolist(), m.y.tolist(), j)
        ranked.append(RankedFeature(name, split.gain_bits, split.threshold, _verdict(split.gain_bits)))
    ranked.sort(key=lambda r: -r.gain_bits)
    return ranked


# --- decision tree ------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    """Internal node (feature, threshold, children) or leaf (label)."""
    leaf: int | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    def is_leaf(self) -> bool:
        return self.leaf is not None


def _majority(ys) -> int:
    ones = int(np.sum(ys == 1))
    zeros = len(ys) - ones
    return 1 if ones > zeros else 0    # tie -> 0


def _best_split_over(x, y, feature_indices):
    """Best split among the given features; ties resolve to the lowest
    feature index, then the smallest threshold."""
    best = None
    for j in sorted(feature_indices):
        split = best_split(x[:, j].tolist(), y.tolist(), j)
        if split.degenerate:
            continue
        if best is None or split.gain_bits > best.gain_bits:
            best = split
    return best


def _grow(x, y, depth, max_depth, min_gain, feature_picker):
    if len(set(y.tolist())) == 1:
        return TreeNode(leaf=int(y[0]))
    if depth >= max_depth:
        return TreeNode(leaf=_majority(y))
    split = _best_split_over(x, y, feature_picker(x.shape[1]))
    if split is None or split.gain_bits < min_gain:
        return TreeNode(leaf=_majority(y))
    mask = x[:, split.feature_index] <= split.threshold
    left = _grow(x[mask], y[mask], depth + 1, max_depth, min_gain, feature_picker)
    right = _grow(x[~mask], y[~mask], depth + 1, max_depth, min_gain, feature_picker)
    return TreeNode(feature=split.feature_index, threshold=split.threshold, left=left, right=right)


def train_tree(m: LabeledMatrix, max_depth: int = DEFAULT_MAX_DEPTH,
               min_gain: float = DEFAULT_MIN_GAIN) -> TreeNode:
    """Recursive best-split tree; stops on purity, the depth limit, or when
    the best gain drops below min_gain.  A pure training set yields a
    single-leaf root."""
    return _grow(m.x, m.y, 0, max_depth, min_gain, lambda d: range(d))


def predict_tree(node: TreeNode, features) -> int:
    while not node.is_leaf():
        node = node.left if features[node.feature] <= node.threshold else node.right
    return node.leaf


# --- random forest -------------------------------------------------------------


@dataclass
class ForestModel:
    trees: list[tuple[int, TreeNode]]          # (per-tree seed, root)
    feature_names: tuple[str, ...]
    features_per_split: int
    n_features: int = field(init=False)

    def __post_init__(self):
        self.n_features = len(self.feature_names)


def train_forest(
    m: LabeledMatrix,
    n_trees: int = DEFAULT_TREES,
    features_per_split: int | None = None,
    seed: int = 0,
    max_depth: int = DEFAULT_MAX_DEPTH,
    min_gain: float = DEFAULT_MIN_GAIN,
    identity_bootstrap: bool = False,
) -> ForestModel:
    """Bagged trees over bootstrap resamples.

    Each tree draws n rows with replacement using its own seed (derived from
    the master seed by index, never from scheduling order) and each split
    searches a random feature subset of size ``features_per_split``
    (default: ceil(sqrt(d))).  ``identity_bootstrap`` replaces resampling
    with the identity sample for degenerate-forest tests.
    """
    n, d = m.x.shape
    if features_per_split is None:
        features_per_split = math.ceil(math.sqrt(d))
    features_per_split = max(1, min(d, features_per_split))
    trees = []
    for i in range(n_trees):
        tree_seed = position_hash(seed, i)
        rng = random.Random(tree_seed)
        if identity_bootstrap:
            idx = np.arange(n)
        else:
            idx = np.array([rng.randrange(n) for _ in range(n)])
        if features_per_split >= d:
            picker = lambda dd: range(dd)                                  # noqa: E731
        else:
            picker = lambda dd, r=rng, k=features_per_split: r.sample(range(dd), k)  # noqa: E731
        root = _grow(m.x[idx], m.y[idx], 0, max_depth, min_gain, picker)
        trees.append((tree_seed, root))
    return ForestModel(trees, tuple(m.feature_names), features_per_split)


def predict(model, features) -> int:
    """Deterministic prediction: tree traversal, or majority vote over the
    forest with ties going to label 0."""
    if isinstance(model, TreeNode):
        return predict_tree(model, features)
    if len(features) != model.n_features:
        raise ArityMismatchError(f"expected {model.n_features} features, got {len(features)}")
    votes = sum(predict_tree(root, features) for _, root in model.trees)
    return 1 if votes > len(model.trees) - votes else 0


# --- model persistence -----------------------------------------------------------


def _node_to_json(node: TreeNode):
    if node.is_leaf():
        return {"leaf": node.leaf}
    return {
        "f": node.feature,
        "t": node.threshold,
        "l": _node_to_json(node.left),
        "r": _node_to_json(node.right),
    }


def _node_from_json(obj) -> TreeNode:
    if "leaf" in obj:
        return TreeNode(leaf=int(obj["leaf"]))
    return TreeNode(
        feature=int(obj["f"]),
        threshold=float(obj["t"]),
        left=_node_from_json(obj["l"]),
        right=_node_from_json(obj["r"]),
    )


def model_to_json(model: ForestModel) -> dict:
    return {
        "version": MODEL_VERSION,
        "feature_names": list(model.feature_names),
        "features_per_split": model.features_per_split,
        "forest": [{"seed": s, "root": _node_to_json(r)} for s, r in model.trees],
        "ties": "zero",
    }


def model_from_json(obj) -> ForestModel:
    if obj.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version: {obj.get('version')!r}")
    trees = [(int(t["seed"]), _node_from_json(t["root"])) for t in obj["forest"]]
    return ForestModel(trees, tuple(obj["feature_names"]), int(obj["features_per_split"]))


def save_model(model: ForestModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> ForestModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(json.load(fh))
