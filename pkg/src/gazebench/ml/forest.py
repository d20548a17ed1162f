"""Single CART tree and bagged random forest trainers."""
from __future__ import annotations

import numpy as np

from gazebench.ml import tree as tree_mod
from gazebench.ml.base import (
    ForestParams,
    LabeledMatrix,
    ModelKind,
    TreeParams,
    register_kind,
)


def train_decision_tree(data: LabeledMatrix, hp: TreeParams, seed: int):
    grown = tree_mod.grow_gini_tree(data.X, data.y, hp.max_depth, hp.min_leaf)
    return tree_mod.pack_trees([grown]), True


def predict_decision_tree(params: dict, X: np.ndarray) -> np.ndarray:
    (grown,) = tree_mod.unpack_trees(params)
    return tree_mod.tree_apply(grown, X).astype(np.int64)


def train_random_forest(data: LabeledMatrix, hp: ForestParams, seed: int):
    """Bootstrap-bagged Gini trees with per-node random feature subsets.

    Tree t draws from its own stream [seed, t]: first the bootstrap rows,
    then feature subsets in depth-first node order, so the forest is
    reproducible regardless of any outer parallelism.
    """
    k = hp.resolved_features_per_split(data.n_features)
    trees = []
    for t in range(hp.n_trees):
        rng = np.random.default_rng([seed, t])
        if hp.bootstrap:
            rows = rng.integers(0, data.n_samples, size=data.n_samples)
            X_t, y_t = data.X[rows], data.y[rows]
        else:
            X_t, y_t = data.X, data.y
        trees.append(
            tree_mod.grow_gini_tree(
                X_t,
                y_t,
                hp.max_depth,
                hp.min_leaf,
                rng=rng,
                features_per_split=k if k < data.n_features else None,
            )
        )
    return tree_mod.pack_trees(trees), True


def predict_random_forest(params: dict, X: np.ndarray) -> np.ndarray:
    trees = tree_mod.unpack_trees(params)
    votes = np.zeros(X.shape[0], dtype=np.int64)
    for grown in trees:
        votes += tree_mod.tree_apply(grown, X).astype(np.int64)
    # Majority vote; an exact tie goes to label 0.
    return (2 * votes > len(trees)).astype(np.int64)


register_kind(ModelKind.DECISION_TREE, train_decision_tree, predict_decision_tree)
register_kind(ModelKind.RANDOM_FOREST, train_random_forest, predict_random_forest)
