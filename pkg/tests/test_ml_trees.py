"""CART trees and random forest against exhaustive oracles."""
from fractions import Fraction

import numpy as np
import pytest

from gazebench import ml
from gazebench.ml import base, tree

from conftest import two_blobs


def brute_force_best_gini(X, y, min_leaf=1):
    """Exhaustive weighted-Gini search with exact rational arithmetic.

    Tie order: lowest feature index, then lowest threshold, matching the
    documented production rule.  Returns (feature, threshold) or None.
    """
    n, n_features = X.shape
    best_score, best = None, None
    for f in range(n_features):
        order = np.argsort(X[:, f], kind="stable")
        sx, sy = X[order, f], y[order]
        for pos in range(n - 1):
            if sx[pos + 1] <= sx[pos]:
                continue
            k = pos + 1
            if k < min_leaf or n - k < min_leaf:
                continue
            l1 = int(sy[:k].sum())
            l0 = k - l1
            r1 = int(sy[k:].sum())
            r0 = (n - k) - r1
            # weighted Gini impurity up to the affine transform shared with
            # the implementation: k*gini_L + (n-k)*gini_R, times n/2
            score = Fraction(l0 * l1, k) + Fraction(r0 * r1, n - k)
            if best_score is None or score < best_score:
                best_score = score
                best = (f, 0.5 * (float(sx[pos]) + float(sx[pos + 1])))
    return best


@pytest.mark.parametrize("case", range(20))
def test_best_gini_matches_brute_force(case):
    rng = np.random.default_rng(1000 + case)
    n, F = 50, 5
    if case % 2:
        X = rng.integers(0, 4, size=(n, F)).astype(float)  # heavy ties
    else:
        X = rng.normal(size=(n, F))
    y = rng.integers(0, 2, size=n)
    if y.sum() in (0, n):
        y[0] = 1 - y[0]
    got = tree.best_gini_split(X, y, np.arange(n), np.arange(F), 1)
    want = brute_force_best_gini(X, y)
    assert got == want


def test_depth1_tree_equals_exhaustive_split():
    rng = np.random.default_rng(42)
    for _ in range(25):
        X = rng.normal(size=(50, 5))
        y = rng.integers(0, 2, size=50)
        if y.sum() in (0, 50):
            continue
        t = tree.grow_gini_tree(X, y, max_depth=1, min_leaf=1)
        want = brute_force_best_gini(X, y)
        assert (int(t.feature[0]), float(t.threshold[0])) == want


def test_no_valid_split_returns_none():
    X = np.ones((6, 2))  # constant features: nothing to separate
    y = np.array([0, 1, 0, 1, 0, 1])
    assert tree.best_gini_split(X, y, np.arange(6), np.arange(2), 1) is None
    t = tree.grow_gini_tree(X, y, max_depth=3, min_leaf=1)
    assert t.n_nodes == 1 and t.feature[0] == -1


def test_min_leaf_respected():
    X = np.arange(10, dtype=float).reshape(-1, 1)
    y = np.array([0] * 9 + [1])
    # isolating the single 1 needs a 1-row leaf; min_leaf=2 forbids it
    got = tree.best_gini_split(X, y, np.arange(10), np.arange(1), 2)
    assert got is not None
    mask = X[:, 0] <= got[1]
    assert 2 <= mask.sum() <= 8


def test_xor_needs_depth_two():
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    y = np.array([0, 1, 1, 0])
    shallow = tree.grow_gini_tree(X, y, max_depth=1, min_leaf=1)
    deep = tree.grow_gini_tree(X, y, max_depth=2, min_leaf=1)
    assert np.mean(tree.tree_apply(shallow, X) == y) <= 0.75
    assert np.array_equal(tree.tree_apply(deep, X), y.astype(float))


def test_tree_apply_routing():
    acc = tree._TreeAccumulator()
    root = acc.add_split(0, 1.5)
    left = acc.add_leaf(0.0)
    right = acc.add_leaf(1.0)
    acc.set_children(root, left, right)
    t = acc.build()
    X = np.array([[1.0], [1.5], [2.0]])
    # boundary value goes left (x <= threshold)
    assert tree.tree_apply(t, X).tolist() == [0.0, 0.0, 1.0]


def test_pack_unpack_round_trip():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(40, 3))
    y = rng.integers(0, 2, size=40)
    trees = [tree.grow_gini_tree(X, y, max_depth=d, min_leaf=1) for d in (1, 3, 5)]
    back = tree.unpack_trees(tree.pack_trees(trees))
    assert len(back) == 3
    for a, b in zip(trees, back):
        for field in ("feature", "threshold", "left", "right", "value"):
            assert np.array_equal(getattr(a, field), getattr(b, field))


def test_pack_empty_list():
    params = tree.pack_trees([])
    assert tree.unpack_trees(params) == []


# -------------------------------------------------------------------- forest

def test_forest_without_randomness_is_tree_committee():
    X, y = two_blobs(seed=1)
    data = base.LabeledMatrix(X=X, y=y, subject_ids=np.zeros(len(y), dtype=np.int64))
    hp = base.ForestParams(n_trees=7, bootstrap=False, features_per_split=X.shape[1])
    forest_model = ml.train(ml.ModelKind.RANDOM_FOREST, data, hp=hp, seed=3)
    tree_model = ml.train(ml.ModelKind.DECISION_TREE, data,
                          hp=base.TreeParams(), seed=3)
    # identical deterministic trees vote unanimously
    assert np.array_equal(ml.predict(forest_model, X), ml.predict(tree_model, X))


def test_forest_beats_chance_and_is_deterministic():
    X, y = two_blobs(n_per_class=150, gap=1.5, seed=2)
    data = base.LabeledMatrix(X=X, y=y, subject_ids=np.zeros(len(y), dtype=np.int64))
    hp = base.ForestParams(n_trees=25)
    m1 = ml.train(ml.ModelKind.RANDOM_FOREST, data, hp=hp, seed=9)
    m2 = ml.train(ml.ModelKind.RANDOM_FOREST, data, hp=hp, seed=9)
    assert np.mean(ml.predict(m1, X) == y) > 0.9
    assert np.array_equal(ml.predict(m1, X), ml.predict(m2, X))
    m3 = ml.train(ml.ModelKind.RANDOM_FOREST, data, hp=hp, seed=10)
    assert any(not np.array_equal(a, b) for a, b in
               zip(tree.unpack_trees(m1.params), tree.unpack_trees(m3.params))
               for a, b in [(a.threshold, b.threshold)])


def test_forest_feature_subsampling_default():
    assert base.ForestParams().resolved_features_per_split(24) == 5
    assert base.ForestParams().resolved_features_per_split(9) == 3
    assert base.ForestParams(features_per_split=2).resolved_features_per_split(24) == 2
