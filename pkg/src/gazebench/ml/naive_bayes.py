"""Gaussian naive Bayes with variance smoothing."""
from __future__ import annotations

import numpy as np

from gazebench.ml.base import GaussianNBParams, LabeledMatrix, ModelKind, register_kind

LOG_2PI = float(np.log(2.0 * np.pi))


def train_gaussian_nb(data: LabeledMatrix, hp: GaussianNBParams, seed: int):
    """Per-class, per-feature moments; every variance gets the same floor.

    The floor is var_smoothing times the largest overall feature variance,
    which keeps constant features usable without distorting the rest.
    """
    X, y = data.X, data.y
    epsilon = hp.var_smoothing * float(np.var(X, axis=0).max())
    theta = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
    var = np.stack([X[y == c].var(axis=0) for c in (0, 1)]) + epsilon
    prior = np.array([float(np.mean(y == c)) for c in (0, 1)])
    return {"theta": theta, "var": var, "prior": prior}, True


def class_log_posterior(params: dict, X: np.ndarray) -> np.ndarray:
    """Unnormalized log posterior per class, shape (n, 2)."""
    theta, var, prior = params["theta"], params["var"], params["prior"]
    out = np.empty((X.shape[0], 2))
    for c in (0, 1):
        gauss = -0.5 * (
            LOG_2PI + np.log(var[c]) + (X - theta[c]) ** 2 / var[c]
        ).sum(axis=1)
        out[:, c] = np.log(prior[c]) + gauss
    return out

def predict_gaussian_nb(params: dict, X: np.ndarray) -> np.ndarray:
    # argmax keeps the first maximum, so an exact posterior tie yields 0.
    return np.argmax(class_log_posterior(params, X), axis=1).astype(np.int64)


register_kind(ModelKind.GAUSSIAN_NB, train_gaussian_nb, predict_gaussian_nb)
