"""Burrows's Delta over most-frequent words and UPGMA dendrograms.

Delta is the mean absolute difference of z-scored relative word frequencies;
z-scores use the population standard deviation so that even a two-document
corpus is well defined.  Words whose frequency never varies are excluded
rather than erroring, since short anonymized fragments produce plenty of
them.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCorpusError, EmptyCorpusError, InvalidMatrixError
from .textcore import Document, TokenMode, surfaces

DEFAULT_MFW = 150

_SYMMETRY_TOL = 1e-12


def mfw(corpus: list[Document], n: int) -> list[str]:
    """Top-n words by summed raw counts over SANITIZED tokens.

    Count ties resolve lexicographically; n is capped at the vocabulary.
    """
    if not corpus:
        raise EmptyCorpusError("most-frequent-words of an empty corpus")
    counts = Counter()
    for doc in corpus:
        counts.update(surfaces(doc.text, TokenMode.SANITIZED))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ranked[:n]]


@dataclass
class DeltaMatrix:
    ids: list[str]
    values: np.ndarray      # square, symmetric, zero diagonal

    def pair(self, a: str, b: str) -> float:
        return float(self.values[self.ids.index(a), self.ids.index(b)])


def delta_matrix(corpus: list[Document], n_mfw: int = DEFAULT_MFW,
                 cull: float = 0.0) -> DeltaMatrix:
    """Pairwise Burrows's Delta over the corpus MFW list.

    ``cull`` optionally restricts the list to words present in at least that
    fraction of documents (0 disables culling); with tiny documents this
    suppresses words whose support is a single text.
    """
    if not corpus:
        raise EmptyCorpusError("delta over an empty corpus")
    if len(corpus) < 2:
        raise DegenerateCorpusError("delta needs at least 2 documents")
    if not 0.0 <= cull <= 1.0:
        raise ValueError("cull must be within [0, 1]")
    words = mfw(corpus, n_mfw)
    doc_tokens = [surfaces(doc.text, TokenMode.SANITIZED) for doc in corpus]
    if any(len(toks) == 0 for toks in doc_tokens):
        empty = [doc.id for doc, toks in zip(corpus, doc_tokens) if not toks]
        raise DegenerateCorpusError(f"documents without tokens: {', '.join(empty)}")

    if cull > 0.0:
        threshold = cull * len(corpus)
        doc_vocab = [set(toks) for toks in doc_tokens]
        words = [w for w in words
                 if sum(w in vocab for vocab in doc_vocab) >= threshold]
        if not words:
            raise DegenerateCorpusError("culling removed every word")

    freqs = np.zeros((len(corpus), len(words)))
    index = {w: j for j, w in enumerate(words)}
    for i, toks in enumerate(doc_tokens):
        counts = Counter(toks)
        total = len(toks)
        for w, c in counts.items():
            j = index.get(w)
            if j is not None:
                freqs[i, j] = c / total

    mu = freqs.mean(axis=0)
    sigma = freqs.std(axis=0)          # population std
    included = sigma > 0
    if not included.any():
        raise DegenerateCorpusError("every word has constant frequency; delta undefined")
    z = (freqs[:, included] - mu[included]) / sigma[included]

    n = len(corpus)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.mean(np.abs(z[i] - z[j])))
            values[i, j] = values[j, i] = d
    return DeltaMatrix([doc.id for doc in corpus], values)


# --- UPGMA -----------------------------------------------------------------------


@dataclass(frozen=True)
class DendrogramNode:
    """Leaf (id set, height 0) or internal merge of two children."""
    id: str | None = None
    left: "DendrogramNode | None" = None
    right: "DendrogramNode | None" = None
    height: float = 0.0

    def is_leaf(self) -> bool:
        return self.id is not None

    def leaves(self) -> list[str]:
        if self.is_leaf():
            return [self.id]
        return self.left.leaves() + self.right.leaves()


def _validate_matrix(m: DeltaMatrix) -> None:
    v = m.values
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] != len(m.ids):
        raise InvalidMatrixError("matrix shape does not match the id list")
    if np.any(np.diag(v) != 0):
        raise InvalidMatrixError("diagonal must be exactly zero")
    if np.any(v < 0):
        raise InvalidMatrixError("distances must be non-negative")
    if np.max(np.abs(v - v.T)) > _SYMMETRY_TOL:
        raise InvalidMatrixError("matrix is not symmetric")


def upgma(m: DeltaMatrix) -> DendrogramNode:
    """Average-linkage agglomeration.

    Each step merges the closest pair (distance ties resolve to the
    lexicographically smallest pair of cluster keys, a cluster's key being
    its smallest member id); the new cluster's distances are size-weighted
    averages and the merge height is the merged pair's distance.
    """
    _validate_matrix(m)
    if len(m.ids) < 2:
        raise InvalidMatrixError("agglomeration needs at least 2 documents")

    clusters = {i: DendrogramNode(id=doc_id) for i, doc_id in enumerate(m.ids)}
    sizes = {i: 1 for i in clusters}
    keys = {i: doc_id for i, doc_id in enumerate(m.ids)}
    dist = {}
    for i in range(len(m.ids)):
        for j in range(i + 1, len(m.ids)):
            dist[(i, j)] = float(m.values[i, j])
    next_index = len(m.ids)

    while len(clusters) > 1:
        best_pair = None
        best = None
        for (i, j), d in dist.items():
            pair_key = tuple(sorted((keys[i], keys[j])))
            if best is None or d < best[0] or (d == best[0] and pair_key < best[1]):
                best = (d, pair_key)
                best_pair = (i, j)
        i, j = best_pair
        d = best[0]
        left, right = clusters[i], clusters[j]
        if keys[j] < keys[i]:
            left, right = right, left
        merged = DendrogramNode(left=left, right=right, height=d)
        for k in list(clusters):
            if k in (i, j):
                continue
            dik = dist[tuple(sorted((i, k)))]
            djk = dist[tuple(sorted((j, k)))]
            dist[tuple(sorted((next_index, k)))] = (
                (sizes[i] * dik + sizes[j] * djk) / (sizes[i] + sizes[j])
            )
        for k in list(dist):
            if i in k or j in k:
                del dist[k]
        clusters[next_index] = merged
        sizes[next_index] = sizes.pop(i) + sizes.pop(j)
        keys[next_index] = min(keys.pop(i), keys.pop(j))
        del clusters[i], clusters[j]
        next_index += 1

    return next(iter(clusters.values()))


def cut(tree: DendrogramNode, k: int) -> list[set[str]]:
    """Partition leaves into k clusters by undoing the k-1 highest merges.

    Height ties split the earlier cluster first; children replace their
    parent in place, so the result order is stable.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    clusters = [tree]
    while len(clusters) < k:
        best_i = None
        for i, node in enumerate(clusters):
            if node.is_leaf():
                continue
            if best_i is None or node.height > clusters[best_i].height:
                best_i = i
        if best_i is None:
            break
        node = clusters.pop(best_i)
        clusters[best_i:best_i] = [node.left, node.right]
    return [set(c.leaves()) for c in clusters]


def _fmt(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(float(x))


def to_newick(tree: DendrogramNode) -> str:
    """Parenthesized Newick with branch lengths = parent height - child height."""

    def render(node: DendrogramNode) -> str:
        if node.is_leaf():
            return node.id
        parts = []
        for child in (node.left, node.right):
            parts.append(f"{render(child)}:{_fmt(node.height - child.height)}")
        return "(" + ",".join(parts) + ")"

    return render(tree) + ";"


def tree_to_json(tree: DendrogramNode) -> dict:
    if tree.is_leaf():
        return {"id": tree.id}
    return {
        "children": [tree_to_json(tree.left), tree_to_json(tree.right)],
        "height": tree.height,
    }


def write_matrix_csv(m: DeltaMatrix, out) -> None:
    """Square CSV with a header row/column of document ids."""
    from pathlib import Path

    close = False
    if isinstance(out, (str, Path)):
        out = open(out, "w", encoding="utf-8", newline="")
        close = True
    try:
        writer = csv.writer(out)
        writer.writerow(["id", *m.ids])
        for i, doc_id in enumerate(m.ids):
            writer.writerow([doc_id, *(f"{m.values[i, j]:.6f}" for j in range(len(m.ids)))])
    finally:
        if close:
            out.close()
