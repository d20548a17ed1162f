"""Discrete AdaBoost over weighted-error-minimizing decision stumps.

Each round fits the stump (feature, midpoint threshold, polarity) with the
smallest weighted 0-1 error; ties resolve to the lowest feature, then the
lowest threshold, then the polarity that labels the left side 0.  The stump
weight is alpha = ln((1 - eps) / eps) / 2.  A round with eps = 0 replaces
the ensemble with that single perfect stump; a round with eps >= 1/2 stops
boosting without adding the stump.

Feature orderings are presorted once, so each round costs one pass of
cumulative sums over (samples x features).
"""
from __future__ import annotations

import numpy as np

from gazebench.ml.base import AdaBoostParams, LabeledMatrix, ModelKind, register_kind


def _fit_stump(sorted_x, order, y, w):
    """Minimum weighted-error stump given presorted features.

    Returns (feature, threshold, left_label, error).  Falls back to a
    constant stump (threshold +inf) when no adjacent values differ.
    """
    n, n_features = sorted_x.shape
    wy = np.where(y == 1, w, 0.0)
    sw = w[order]            # weights in per-feature sorted order
    sw1 = wy[order]          # same, but only class-1 weight
    total = float(w.sum())
    total1 = float(wy.sum())
    cum_w = np.cumsum(sw, axis=0)[:-1]
    cum_w1 = np.cumsum(sw1, axis=0)[:-1]
    cum_w0 = cum_w - cum_w1
    # Polarity A predicts left->0, right->1: wrong = class1 left + class0 right.
    err_a = cum_w1 + (total - total1) - cum_w0
    err_b = total - err_a
    valid = sorted_x[1:] > sorted_x[:-1]
    errors = np.stack([err_a.T, err_b.T], axis=-1)  # (feature, position, polarity)
    errors = np.where(valid.T[:, :, None], errors, np.inf)
    if errors.size:
        best = int(np.argmin(errors))
    else:
        best = -1
    if best < 0 or not np.isfinite(errors.flat[best]):
        label = 1.0 if total1 > total - total1 else 0.0  # tie -> 0
        return -1, np.inf, label, float(min(total1, total - total1))
    f, rest = divmod(best, errors.shape[1] * 2)
    pos, pol = divmod(rest, 2)
    threshold = 0.5 * (sorted_x[pos, f] + sorted_x[pos + 1, f])
    left_label = 0.0 if pol == 0 else 1.0
    return int(f), float(threshold), left_label, float(errors.flat[best])


def _stump_predictions(feature, threshold, left_label, X):
    if feature < 0:
        return np.full(X.shape[0], left_label)
    right_label = 1.0 - left_label
    return np.where(X[:, feature] <= threshold, left_label, right_label)


def train_adaboost(data: LabeledMatrix, hp: AdaBoostParams, seed: int):
    X, y = data.X, data.y
    order = np.argsort(X, axis=0, kind="stable")
    sorted_x = np.take_along_axis(X, order, axis=0)
    y_signed = 2.0 * y - 1.0

    w = np.full(data.n_samples, 1.0 / data.n_samples)
    features, thresholds, left_labels, alphas = [], [], [], []
    for _ in range(hp.n_stages):
        f, thr, left_label, _ = _fit_stump(sorted_x, order, y, w)
        # Re-derive the error as a plain masked sum: the scan's running
        # differences can cancel badly once weight ratios get extreme.
        pred = _stump_predictions(f, thr, left_label, X)
        eps = float(w[pred != y].sum())
        if eps <= 0.0:
            features, thresholds, left_labels, alphas = [f], [thr], [left_label], [1.0]
            break
        if eps >= 0.5:
            break
        alpha = 0.5 * np.log((1.0 - eps) / eps)
        features.append(f)
        thresholds.append(thr)
        left_labels.append(left_label)
        alphas.append(float(alpha))
        w = w * np.exp(-alpha * y_signed * (2.0 * pred - 1.0))
        w = w / w.sum()

    ones = int(y.sum())
    majority = 1.0 if ones > data.n_samples - ones else 0.0
    params = {
        "stump_feature": np.array(features, dtype=np.int64),
        "stump_threshold": np.array(thresholds, dtype=np.float64),
        "stump_left_label": np.array(left_labels, dtype=np.float64),
        "stump_alpha": np.array(alphas, dtype=np.float64),
        "fallback_label": majority,  # used only if no stump survived round 1
    }
    return params, True


def predict_adaboost(params: dict, X: np.ndarray) -> np.ndarray:
    features = np.asarray(params["stump_feature"])
    if features.shape[0] == 0:
        return np.full(X.shape[0], int(params["fallback_label"]), dtype=np.int64)
    score = np.zeros(X.shape[0])
    for f, thr, left_label, alpha in zip(
        features,
        np.asarray(params["stump_threshold"]),
        np.asarray(params["stump_left_label"]),
        np.asarray(params["stump_alpha"]),
    ):
        pred = _stump_predictions(int(f), float(thr), float(left_label), X)
        score += alpha * (2.0 * pred - 1.0)
    return (score > 0.0).astype(np.int64)


register_kind(ModelKind.ADABOOST, train_adaboost, predict_adaboost)
