"""scikit-learn style wrappers so the toolkit composes with the wider
ecosystem (``sklearn.pipeline.Pipeline``, ``clone``, grid search).

The functional core stays in the sibling modules; these classes only adapt
it to the fit/transform/predict protocol and add input validation.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, ClusterMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import selection
from .attribution import cut, delta_matrix, upgma
from .pipeline import PRESETS, LexiconPaths, PayloadPolicy, PipelineConfig, Resources, run_corpus
from .stylometry import FEATURE_NAMES, extract_features
from .textcore import Document, TokenMode


def _check_texts(X) -> list[str]:
    texts = list(X)
    bad = [i for i, t in enumerate(texts) if not isinstance(t, str)]
    if bad:
        raise TypeError(f"X must be a sequence of strings; non-string at index {bad[0]}")
    return texts


def _check_matrix(X) -> np.ndarray:
    x = np.asarray(X, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.ndim != 2:
        raise ValueError(f"X must be 2-dimensional, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise ValueError("X contains non-finite values")
    return x


def _check_binary_labels(y, n_rows) -> np.ndarray:
    y = np.asarray(y, dtype=int)
    if y.ndim != 1 or len(y) != n_rows:
        raise ValueError(f"y must be 1-dimensional with {n_rows} entries")
    if not set(np.unique(y)) <= {0, 1}:
        raise ValueError("y must contain only labels 0 and 1")
    return y


class StyloFeaturizer(TransformerMixin, BaseEstimator):
    """Texts -> matrix of the five retained stylometric ratios.

    Stateless apart from lexicon loading, which happens in fit.
    """

    def __init__(self, mode="raw", function_words=None, lemmas=None,
                 synonyms=None, drift=None):
        self.mode = mode
        self.function_words = function_words
        self.lemmas = lemmas
        self.synonyms = synonyms
        self.drift = drift

    def _paths(self) -> LexiconPaths:
        return LexiconPaths(function_words=self.function_words, lemmas=self.lemmas,
                            synonyms=self.synonyms, drift=self.drift)

    def fit(self, X, y=None):
        _check_texts(X)
        self.resources_ = Resources.load(self._paths())
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "resources_"):
            raise NotFittedError("StyloFeaturizer is not fitted; call fit first")
        texts = _check_texts(X)
        mode = TokenMode(self.mode)
        rows = []
        for i, text in enumerate(texts):
            vec = extract_features(Document(f"txt_{i + 1:05d}", text), mode,
                                   self.resources_.fwl, self.resources_.lemmas)
            rows.append(vec.values())
        return np.array(rows, dtype=float).reshape(len(texts), len(FEATURE_NAMES))

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURE_NAMES, dtype=object)


class TextAnonymizer(TransformerMixin, BaseEstimator):
    """Texts -> anonymized texts via the staged pipeline (preset v1 or v2)."""

    def __init__(self, preset="v2", seed=0, payload_bytes=8, payload_hex=None,
                 pivots=("de",), function_words=None, lemmas=None,
                 synonyms=None, drift=None):
        self.preset = preset
        self.seed = seed
        self.payload_bytes = payload_bytes
        self.payload_hex = payload_hex
        self.pivots = pivots
        self.function_words = function_words
        self.lemmas = lemmas
        self.synonyms = synonyms
        self.drift = drift

    def _config(self) -> PipelineConfig:
        from .translate import RoundTripConfig

        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset: {self.preset!r}")
        if self.payload_hex is not None:
            payload = PayloadPolicy(fixed=bytes.fromhex(self.payload_hex), random_len=None)
        else:
            payload = PayloadPolicy(random_len=self.payload_bytes)
        return PipelineConfig(
            steps=PRESETS[self.preset],
            master_seed=self.seed,
            translate=RoundTripConfig(pivots=list(self.pivots)),
            payload=payload,
            lexicons=LexiconPaths(function_words=self.function_words, lemmas=self.lemmas,
                                  synonyms=self.synonyms, drift=self.drift),
        )

    def fit(self, X, y=None):
        _check_texts(X)
        self.config_ = self._config()
        return self

    def transform(self, X) -> list[str]:
        if not hasattr(self, "config_"):
            raise NotFittedError("TextAnonymizer is not fitted; call fit first")
        texts = _check_texts(X)
        docs = [Document(f"txt_{i + 1:05d}", t) for i, t in enumerate(texts)]
        results = run_corpus(docs, self.config_)
        failed = [r for r in results if not r.ok]
        if failed:
            first = failed[0]
            raise RuntimeError(
                f"record {first.record_id} failed at {first.error.stage.value}: {first.error.message}"
            )
        return [r.final_text for r in results]


class InfoGainTreeClassifier(ClassifierMixin, BaseEstimator):
    """Binary decision tree split on information gain (bits)."""

    def __init__(self, max_depth=selection.DEFAULT_MAX_DEPTH,
                 min_gain=selection.DEFAULT_MIN_GAIN):
        self.max_depth = max_depth
        self.min_gain = min_gain

    def fit(self, X, y):
        x = _check_matrix(X)
        labels = _check_binary_labels(y, len(x))
        names = tuple(f"x{j}" for j in range(x.shape[1]))
        m = selection.LabeledMatrix(x, labels, names)
        self.tree_ = selection.train_tree(m, self.max_depth, self.min_gain)
        self.n_features_in_ = x.shape[1]
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "tree_"):
            raise NotFittedError("InfoGainTreeClassifier is not fitted; call fit first")
        x = _check_matrix(X)
        if x.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {x.shape[1]}")
        return np.array([selection.predict_tree(self.tree_, row) for row in x])


class InfoGainForestClassifier(ClassifierMixin, BaseEstimator):
    """Bagged information-gain trees with per-split feature subsampling."""

    def __init__(self, n_trees=selection.DEFAULT_TREES, features_per_split=None,
                 seed=0, max_depth=selection.DEFAULT_MAX_DEPTH,
                 min_gain=selection.DEFAULT_MIN_GAIN):
        self.n_trees = n_trees
        self.features_per_split = features_per_split
        self.seed = seed
        self.max_depth = max_depth
        self.min_gain = min_gain

    def fit(self, X, y):
        x = _check_matrix(X)
        labels = _check_binary_labels(y, len(x))
        names = tuple(f"x{j}" for j in range(x.shape[1]))
        m = selection.LabeledMatrix(x, labels, names)
        self.forest_ = selection.train_forest(
            m, n_trees=self.n_trees, features_per_split=self.features_per_split,
            seed=self.seed, max_depth=self.max_depth, min_gain=self.min_gain,
        )
        self.n_features_in_ = x.shape[1]
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "forest_"):
            raise NotFittedError("InfoGainForestClassifier is not fitted; call fit first")
        x = _check_matrix(X)
        return np.array([selection.predict(self.forest_, row) for row in x])


class BurrowsDeltaClusters(ClusterMixin, BaseEstimator):
    """Burrows's Delta + UPGMA, cut into n_clusters groups."""

    def __init__(self, n_clusters=2, n_mfw=150):
        self.n_clusters = n_clusters
        self.n_mfw = n_mfw

    def fit(self, X, y=None):
        texts = _check_texts(X)
        docs = [Document(f"txt_{i + 1:05d}", t) for i, t in enumerate(texts)]
        matrix = delta_matrix(docs, self.n_mfw)
        self.tree_ = upgma(matrix)
        clusters = cut(self.tree_, self.n_clusters)
        labels = np.zeros(len(texts), dtype=int)
        for cluster_index, members in enumerate(clusters):
            for doc_id in members:
                labels[int(doc_id.split("_")[1]) - 1] = cluster_index
        self.labels_ = labels
        self.matrix_ = matrix
        return self
