from __future__ import annotations

import math
import random
from collections import Counter

import numpy as np
import pytest

from stylocloak.attribution import (
    DeltaMatrix,
    DendrogramNode,
    cut,
    delta_matrix,
    mfw,
    to_newick,
    tree_to_json,
    upgma,
    write_matrix_csv,
)
from stylocloak.errors import DegenerateCorpusError, EmptyCorpusError, InvalidMatrixError
from stylocloak.textcore import Document


def docs_from(texts):
    return [Document(f"doc{i:02d}", t) for i, t in enumerate(texts)]


# --- independent oracle -----------------------------------------------------------

def oracle_delta(texts, n_mfw):
    def words_of(text):
        out, run = [], []
        for ch in text:
            if ch.isalpha():
                run.append(ch.lower())
            elif run:
                out.append("".join(run))
                run = []
        if run:
            out.append("".join(run))
        return out

    token_lists = [words_of(t) for t in texts]
    totals = Counter()
    for toks in token_lists:
        totals.update(toks)
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))[:n_mfw]
    words = [w for w, _ in ranked]

    rel = []
    for toks in token_lists:
        c = Counter(toks)
        rel.append([c[w] / len(toks) for w in words])

    n = len(texts)
    included = []
    for j in range(len(words)):
        col = [rel[i][j] for i in range(n)]
        mu = sum(col) / n
        var = sum((v - mu) ** 2 for v in col) / n
        if var > 0:
            included.append((j, mu, math.sqrt(var)))

    out = [[0.0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            diffs = [abs((rel[a][j] - mu) / sd - (rel[b][j] - mu) / sd)
                     for j, mu, sd in included]
            out[a][b] = out[b][a] = sum(diffs) / len(diffs)
    return out


# --- mfw -----------------------------------------------------------------------

def test_mfw_counts_and_ties():
    docs = docs_from(["a a b", "a c"])
    assert mfw(docs, 2) == ["a", "b"]
    assert mfw(docs, 10) == ["a", "b", "c"]          # capped at vocabulary
    assert mfw(docs_from(["x y x z x"]), 2) == ["x", "y"]


def test_mfw_uses_sanitized_tokens():
    docs = docs_from(["pri​vacy pri​vacy", "privacy"])
    assert mfw(docs, 1) == ["privacy"]


def test_mfw_empty_corpus():
    with pytest.raises(EmptyCorpusError):
        mfw([], 5)


# --- delta ----------------------------------------------------------------------

def test_delta_diagonal_and_symmetry():
    docs = docs_from(["the cat sat", "the dog ran far", "a bird sang the song"])
    m = delta_matrix(docs, 10)
    assert np.allclose(np.diag(m.values), 0.0)
    assert np.allclose(m.values, m.values.T, atol=1e-12)
    assert (m.values >= 0).all()


def test_delta_two_documents_is_two():
    docs = docs_from(["the cat sat on the mat", "a dog ran through a field"])
    m = delta_matrix(docs, 20)
    assert m.values[0, 1] == pytest.approx(2.0, abs=1e-12)


def test_delta_matches_oracle_on_random_corpora():
    rng = random.Random(777)
    vocab = ["the", "cat", "dog", "sun", "moon", "tree", "walks", "sleeps", "red", "blue"]
    for _ in range(100):
        texts = [
            " ".join(rng.choice(vocab) for _ in range(rng.randint(5, 30)))
            for _ in range(5)
        ]
        got = delta_matrix(docs_from(texts), 8).values
        want = oracle_delta(texts, 8)
        assert np.allclose(got, np.array(want), atol=1e-9)


def test_delta_pseudometric_triangle():
    rng = random.Random(31)
    vocab = ["a", "b", "c", "d", "e", "f", "g"]
    for _ in range(30):
        texts = [" ".join(rng.choice(vocab) for _ in range(rng.randint(6, 25)))
                 for _ in range(4)]
        v = delta_matrix(docs_from(texts), 7).values
        n = len(v)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert v[i, j] <= v[i, k] + v[k, j] + 1e-9


def test_delta_errors():
    with pytest.raises(EmptyCorpusError):
        delta_matrix([], 5)
    with pytest.raises(DegenerateCorpusError):
        delta_matrix(docs_from(["only one"]), 5)
    with pytest.raises(DegenerateCorpusError):
        delta_matrix(docs_from(["words here", "..."]), 5)
    with pytest.raises(DegenerateCorpusError):
        delta_matrix(docs_from(["same same", "same same"]), 5)


def test_delta_permutation_consistency():
    texts = ["the cat sat", "a dog ran far away", "the bird sang a song", "we all slept"]
    m1 = delta_matrix(docs_from(texts), 10)
    perm = [2, 0, 3, 1]
    docs2 = [Document(f"doc{i:02d}", texts[i]) for i in perm]
    m2 = delta_matrix(docs2, 10)
    for a in range(4):
        for b in range(4):
            assert m2.values[a, b] == pytest.approx(
                m1.values[perm[a], perm[b]], abs=1e-12)


def test_delta_culling_drops_rare_words():
    texts = ["the the unique cat", "the funny dog dog", "the tall tall bird", "the shy fox"]
    m_cull = delta_matrix(docs_from(texts), 20, cull=0.9)
    assert m_cull.values.shape == (4, 4)
    # only "the" survives a 90% culling threshold, and its frequency varies
    two = delta_matrix(docs_from(["the the cat", "the dog"]), 20, cull=0.9)
    assert two.values[0, 1] == pytest.approx(2.0)
    # full culling on uniform frequencies leaves nothing informative
    with pytest.raises(DegenerateCorpusError):
        delta_matrix(docs_from(["the cat", "the dog", "the elk"]), 20, cull=1.0)


def test_delta_cull_range():
    with pytest.raises(ValueError):
        delta_matrix(docs_from(["a b", "c d"]), 5, cull=1.5)


# --- UPGMA ----------------------------------------------------------------------

def matrix_of(ids, rows):
    return DeltaMatrix(list(ids), np.array(rows, dtype=float))


def test_upgma_three_leaf_example():
    m = matrix_of("ABC", [[0, 1, 4], [1, 0, 4], [4, 4, 0]])
    tree = upgma(m)
    assert tree.height == 4
    assert sorted(tree.left.leaves()) == ["A", "B"]
    assert tree.left.height == 1
    assert tree.right.id == "C"
    assert to_newick(tree) == "((A:1,B:1):3,C:4);"


def test_upgma_two_leaves():
    m = matrix_of("AB", [[0, 2.0], [2.0, 0]])
    tree = upgma(m)
    assert to_newick(tree) == "(A:2,B:2);"


def test_upgma_tie_resolution_by_id():
    m = matrix_of("ABC", [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    tree = upgma(m)
    # ties resolve to the lexicographically smallest pair: (A,B) first
    assert sorted(tree.left.leaves()) == ["A", "B"]
    assert tree.left.height == tree.height == 1


def test_upgma_weighted_average():
    # after merging A,B (d=1), d((AB),C) = (3 + 5) / 2 = 4
    m = matrix_of("ABC", [[0, 1, 3], [1, 0, 5], [3, 5, 0]])
    tree = upgma(m)
    assert tree.height == 4


def test_upgma_validation():
    with pytest.raises(InvalidMatrixError):
        upgma(matrix_of("AB", [[0, 1], [2, 0]]))          # asymmetric
    with pytest.raises(InvalidMatrixError):
        upgma(matrix_of("AB", [[0, -1], [-1, 0]]))        # negative
    with pytest.raises(InvalidMatrixError):
        upgma(matrix_of("AB", [[1, 1], [1, 0]]))          # nonzero diagonal


def test_upgma_heights_monotone_on_random_matrices():
    rng = random.Random(5150)
    for _ in range(50):
        n = rng.randint(2, 9)
        v = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                v[i, j] = v[j, i] = rng.uniform(0.1, 10)
        tree = upgma(matrix_of([f"L{k}" for k in range(n)], v))

        def check(node):
            if node.is_leaf():
                return
            for child in (node.left, node.right):
                assert child.height <= node.height + 1e-12
                check(child)

        check(tree)


def test_cut_consistency_with_replay():
    rng = random.Random(8)
    for _ in range(20):
        n = rng.randint(3, 8)
        v = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                v[i, j] = v[j, i] = rng.uniform(0.1, 10)
        ids = [f"L{k}" for k in range(n)]
        tree = upgma(matrix_of(ids, v))
        two = cut(tree, 2)
        assert len(two) == 2
        assert set().union(*two) == set(ids)
        # cutting at the root reproduces the root's immediate children
        assert {frozenset(c) for c in two} == \
            {frozenset(tree.left.leaves()), frozenset(tree.right.leaves())}


def test_cut_handles_k_extremes():
    m = matrix_of("AB", [[0, 1], [1, 0]])
    tree = upgma(m)
    assert cut(tree, 1) == [set("AB")]
    assert sorted(map(sorted, cut(tree, 2))) == [["A"], ["B"]]
    assert len(cut(tree, 5)) == 2  # cannot exceed leaf count


def test_newick_single_leaf():
    assert to_newick(DendrogramNode(id="A")) == "A;"


def test_tree_json_shape():
    m = matrix_of("AB", [[0, 1.5], [1.5, 0]])
    obj = tree_to_json(upgma(m))
    assert obj["height"] == 1.5
    assert obj["children"] == [{"id": "A"}, {"id": "B"}]


def test_matrix_csv(tmp_path):
    m = matrix_of("AB", [[0, 1.5], [1.5, 0]])
    path = tmp_path / "m.csv"
    write_matrix_csv(m, path)
    lines = path.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "id,A,B"
    assert lines[1] == "A,0.000000,1.500000"
