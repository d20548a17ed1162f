"""Flat-array binary decision trees: CART (Gini) and gain-scored regression.

Trees are stored as parallel node arrays (preorder; children carry -1 feature
for leaves) so they serialize as plain ndarrays and evaluate vectorized, one
array pass per depth level.

Split selection is deterministic: candidate thresholds are midpoints of
adjacent distinct sorted values, and ties are broken toward the lowest
feature index, then the lowest threshold.  The Gini score is computed as a
single division of exactly representable integers, so two splits with equal
impurity compare exactly equal in float and the tie-break is bit-reliable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FlatTree:
    feature: np.ndarray    # int32; -1 marks a leaf
    threshold: np.ndarray  # float64; 0 at leaves
    left: np.ndarray       # int32 child node index; -1 at leaves
    right: np.ndarray
    value: np.ndarray      # float64 leaf payload (class label or additive score)

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]


def tree_apply(tree: FlatTree, X: np.ndarray) -> np.ndarray:
    """Leaf payload for each row of X (rows with x[f] <= threshold go left)."""
    node = np.zeros(X.shape[0], dtype=np.int64)
    while True:
        feat = tree.feature[node]
        active = feat >= 0
        if not active.any():
            return tree.value[node]
        idx = np.nonzero(active)[0]
        cur = node[idx]
        go_left = X[idx, feat[idx]] <= tree.threshold[cur]
        node[idx] = np.where(go_left, tree.left[cur], tree.right[cur])


class _TreeAccumulator:
    """Append-only node store shared by the two growers."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def add_leaf(self, value: float) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(float(value))
        return node

    def add_split(self, feature: int, threshold: float) -> int:
        node = len(self.feature)
        self.feature.append(int(feature))
        self.threshold.append(float(threshold))
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return node

    def set_children(self, node: int, left: int, right: int) -> None:
        self.left[node] = left
        self.right[node] = right

    def build(self) -> FlatTree:
        return FlatTree(
            feature=np.array(self.feature, dtype=np.int32),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int32),
            right=np.array(self.right, dtype=np.int32),
            value=np.array(self.value, dtype=np.float64),
        )


def _sorted_columns(X: np.ndarray, rows: np.ndarray, cols: np.ndarray):
    sub = X[np.ix_(rows, cols)]
    order = np.argsort(sub, axis=0, kind="stable")
    return np.take_along_axis(sub, order, axis=0), order


def best_gini_split(X, y, rows, cols, min_leaf):
    """Exhaustive best weighted-Gini split over the given rows and columns.

    Returns (feature, threshold) with the documented tie order, or None when
    no threshold separates distinct values with both sides >= min_leaf.
    """
    n = rows.shape[0]
    if n < 2 * min_leaf:
        return None
    sx, order = _sorted_columns(X, rows, cols)
    sy = y[rows][order]
    cum1 = np.cumsum(sy, axis=0)
    total1 = cum1[-1]
    left_n = np.arange(1, n, dtype=np.int64)[:, None]
    right_n = n - left_n
    l1 = cum1[:-1]
    l0 = left_n - l1
    r1 = total1[None, :] - l1
    r0 = right_n - r1
    # Weighted Gini up to a monotone transform, as one exact-integer division.
    numerator = l0 * l1 * right_n + r0 * r1 * left_n
    score = numerator / (left_n * right_n).astype(np.float64)
    valid = (sx[1:] > sx[:-1]) & (left_n >= min_leaf) & (right_n >= min_leaf)
    score = np.where(valid, score, np.inf)
    flat = np.ascontiguousarray(score.T)  # (cols, positions): feature-major order
    best = int(np.argmin(flat))
    if not np.isfinite(flat.flat[best]):
        return None
    c, pos = divmod(best, n - 1)
    threshold = 0.5 * (sx[pos, c] + sx[pos + 1, c])
    return int(cols[c]), float(threshold)


def _majority(y_sub: np.ndarray) -> float:
    ones = int(y_sub.sum())
    zeros = y_sub.shape[0] - ones
    return 1.0 if ones > zeros else 0.0  # tie -> label 0


def grow_gini_tree(
    X: np.ndarray,
    y: np.ndarray,
    max_depth: int,
    min_leaf: int,
    rng: np.random.Generator | None = None,
    features_per_split: int | None = None,
) -> FlatTree:
    """CART classification tree; optional per-node random feature subsets.

    Recursion is depth-first, left before right, so any rng draws happen in
    a fixed order and the tree is reproducible.
    """
    n_features = X.shape[1]
    acc = _TreeAccumulator()

    def candidates() -> np.ndarray:
        if features_per_split is None or features_per_split >= n_features:
            return np.arange(n_features)
        return np.sort(rng.choice(n_features, size=features_per_split, replace=False))

    def build(rows: np.ndarray, depth: int) -> int:
        y_sub = y[rows]
        ones = int(y_sub.sum())
        pure = ones == 0 or ones == rows.shape[0]
        if depth >= max_depth or pure or rows.shape[0] < 2 * min_leaf:
            return acc.add_leaf(_majority(y_sub))
        split = best_gini_split(X, y, rows, candidates(), min_leaf)
        if split is None:
            return acc.add_leaf(_majority(y_sub))
        feature, threshold = split
        node = acc.add_split(feature, threshold)
        mask = X[rows, feature] <= threshold
        left = build(rows[mask], depth + 1)
        right = build(rows[~mask], depth + 1)
        acc.set_children(node, left, right)
        return node

    build(np.arange(X.shape[0], dtype=np.int64), 0)
    return acc.build()


def best_gain_split(X, grad, hess, rows, cols, min_leaf, reg_lambda):
    """Best split by the second-order gain score; None when nothing valid.

    gain(L, R) = G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda),
    reported WITHOUT the 1/2 factor or the complexity penalty, which the
    caller applies when deciding whether to split at all.
    """
    n = rows.shape[0]
    if n < 2 * min_leaf:
        return None
    sx, order = _sorted_columns(X, rows, cols)
    sg = grad[rows][order]
    sh = hess[rows][order]
    cg = np.cumsum(sg, axis=0)
    ch = np.cumsum(sh, axis=0)
    g_total = cg[-1]
    h_total = ch[-1]
    gl, hl = cg[:-1], ch[:-1]
    gr = g_total[None, :] - gl
    hr = h_total[None, :] - hl
    left_n = np.arange(1, n, dtype=np.int64)[:, None]
    right_n = n - left_n
    gain = (
        gl**2 / (hl + reg_lambda)
        + gr**2 / (hr + reg_lambda)
        - g_total**2 / (h_total + reg_lambda)
    )
    valid = (sx[1:] > sx[:-1]) & (left_n >= min_leaf) & (right_n >= min_leaf)
    gain = np.where(valid, gain, -np.inf)
    flat = np.ascontiguousarray(gain.T)
    best = int(np.argmax(flat))
    if not np.isfinite(flat.flat[best]):
        return None
    c, pos = divmod(best, n - 1)
    threshold = 0.5 * (sx[pos, c] + sx[pos + 1, c])
    return int(cols[c]), float(threshold), float(flat.flat[best])


def grow_gain_tree(
    X: np.ndarray,
    grad: np.ndarray,
    hess: np.ndarray,
    max_depth: int,
    min_leaf: int,
    reg_lambda: float,
    gamma: float,
    leaf_value,
) -> FlatTree:
    """Regression tree for boosting: gain-scored splits, caller-defined leaves.

    A node becomes a leaf when depth or size limits hit, no valid threshold
    exists, or the penalized gain (gain/2 - gamma) is not positive.
    ``leaf_value(rows)`` computes the leaf payload, which lets the caller use
    different statistics for splitting and for leaf weights.
    """
    cols = np.arange(X.shape[1])
    acc = _TreeAccumulator()

    def build(rows: np.ndarray, depth: int) -> int:
        if depth >= max_depth or rows.shape[0] < 2 * min_leaf:
            return acc.add_leaf(leaf_value(rows))
        split = best_gain_split(X, grad, hess, rows, cols, min_leaf, reg_lambda)
        if split is None:
            return acc.add_leaf(leaf_value(rows))
        feature, threshold, gain = split
        if 0.5 * gain - gamma <= 0.0:
            return acc.add_leaf(leaf_value(rows))
        node = acc.add_split(feature, threshold)
        mask = X[rows, feature] <= threshold
        left = build(rows[mask], depth + 1)
        right = build(rows[~mask], depth + 1)
        acc.set_children(node, left, right)
        return node

    build(np.arange(X.shape[0], dtype=np.int64), 0)
    return acc.build()


def pack_trees(trees: list[FlatTree]) -> dict:
    """Concatenate trees into serializable arrays (offsets mark boundaries)."""
    sizes = np.array([t.n_nodes for t in trees], dtype=np.int64)
    if not trees:
        return {
            "tree_sizes": sizes,
            "node_feature": np.zeros(0, dtype=np.int32),
            "node_threshold": np.zeros(0, dtype=np.float64),
            "node_left": np.zeros(0, dtype=np.int32),
            "node_right": np.zeros(0, dtype=np.int32),
            "node_value": np.zeros(0, dtype=np.float64),
        }
    return {
        "tree_sizes": sizes,
        "node_feature": np.concatenate([t.feature for t in trees]),
        "node_threshold": np.concatenate([t.threshold for t in trees]),
        "node_left": np.concatenate([t.left for t in trees]),
        "node_right": np.concatenate([t.right for t in trees]),
        "node_value": np.concatenate([t.value for t in trees]),
    }


def unpack_trees(params: dict) -> list[FlatTree]:
    sizes = np.asarray(params["tree_sizes"], dtype=np.int64)
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    trees = []
    for i in range(sizes.shape[0]):
        lo, hi = bounds[i], bounds[i + 1]
        trees.append(
            FlatTree(
                feature=params["node_feature"][lo:hi],
                threshold=params["node_threshold"][lo:hi],
                left=params["node_left"][lo:hi],
                right=params["node_right"][lo:hi],
                value=params["node_value"][lo:hi],
            )
        )
    return trees
