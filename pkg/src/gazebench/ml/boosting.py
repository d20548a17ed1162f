"""Stagewise boosted trees on logistic loss: first- and second-order variants.

Both trainers share the additive-model skeleton: start from the base-rate
log-odds, fit a small regression tree per stage, and advance the per-sample
logits by learning_rate times the tree output.  They differ in the tree
criterion:

* GradientBoost fits least-squares splits to the residuals (y - p) and sets
  leaf values by a Newton step, sum(r) / sum(p(1-p));
* the XGBoost-style variant scores splits with the second-order gain using
  per-sample gradient/hessian and L2 leaf regularization, leaf = -G/(H+lambda).

Trees are stored unscaled; the learning rate is applied at prediction time.
The training loss curve (mean logistic loss after each stage, stage 0 =
prior only) is kept in the parameters for inspection.
"""
from __future__ import annotations

import numpy as np

from gazebench.ml import tree as tree_mod
from gazebench.ml.base import (
    GradientBoostParams,
    LabeledMatrix,
    ModelKind,
    XgbParams,
    register_kind,
)


def sigmoid(logits: np.ndarray) -> np.ndarray:
    e = np.exp(-np.abs(logits))
    return np.where(logits >= 0.0, 1.0 / (1.0 + e), e / (1.0 + e))


def log_loss(logits: np.ndarray, y: np.ndarray) -> float:
    signed = np.where(y == 1, logits, -logits)
    return float(np.logaddexp(0.0, -signed).mean())


def _base_logit(y: np.ndarray) -> float:
    p = y.mean()
    return float(np.log(p / (1.0 - p)))


def _boost(data: LabeledMatrix, n_stages, learning_rate, stage_tree):
    y = data.y
    f0 = _base_logit(y)
    logits = np.full(data.n_samples, f0)
    losses = [log_loss(logits, y)]
    trees = []
    for _ in range(n_stages):
        grown = stage_tree(logits)
        trees.append(grown)
        logits = logits + learning_rate * tree_mod.tree_apply(grown, data.X)
        losses.append(log_loss(logits, y))
    packed = tree_mod.pack_trees(trees)
    packed["base_logit"] = f0
    packed["learning_rate"] = float(learning_rate)
    packed["train_loss"] = np.array(losses)
    return packed


def train_gradient_boost(data: LabeledMatrix, hp: GradientBoostParams, seed: int):
    ones = np.ones(data.n_samples)

    def stage_tree(logits):
        p = sigmoid(logits)
        residual = data.y - p
        hess = p * (1.0 - p)

        def leaf_value(rows):
            denom = hess[rows].sum()
            if denom <= 0.0:
                return 0.0
            return float(residual[rows].sum() / denom)

        # Splits are least-squares on the residuals (unit hessian, no penalty);
        # only the leaf values take the Newton step.
        return tree_mod.grow_gain_tree(
            data.X, residual, ones, hp.max_depth, hp.min_leaf, 0.0, 0.0, leaf_value
        )

    return _boost(data, hp.n_stages, hp.learning_rate, stage_tree), True


def train_xgboost_style(data: LabeledMatrix, hp: XgbParams, seed: int):
    def stage_tree(logits):
        p = sigmoid(logits)
        grad = p - data.y
        hess = p * (1.0 - p)

        def leaf_value(rows):
            return float(-grad[rows].sum() / (hess[rows].sum() + hp.reg_lambda))

        return tree_mod.grow_gain_tree(
            data.X, grad, hess, hp.max_depth, hp.min_leaf, hp.reg_lambda, hp.gamma,
            leaf_value,
        )

    return _boost(data, hp.n_stages, hp.learning_rate, stage_tree), True


def predict_boosted(params: dict, X: np.ndarray) -> np.ndarray:
    logits = np.full(X.shape[0], float(params["base_logit"]))
    lr = float(params["learning_rate"])
    for grown in tree_mod.unpack_trees(params):
        logits = logits + lr * tree_mod.tree_apply(grown, X)
    return (logits > 0.0).astype(np.int64)


register_kind(ModelKind.GRADIENT_BOOST, train_gradient_boost, predict_boosted)
register_kind(ModelKind.XGBOOST_STYLE, train_xgboost_style, predict_boosted)
