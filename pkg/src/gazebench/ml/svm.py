"""Support vector classifiers: linear (dual coordinate descent) and RBF (SMO).

Both standardize features with training-set statistics inside the model, so
predictions are invariant to per-feature affine rescaling of the inputs and
cross-distribution evaluation never peeks at the test set.

The linear machine minimizes 0.5 ||w||^2 + C sum hinge over an augmented
bias column, by coordinate descent on the boxed dual (one alpha per sample,
seeded random permutation per epoch).

The RBF machine runs sequential minimal optimization on the kernelized dual
with an error cache, using the standard pass alternation: a full pass over
all examples, then repeated passes over non-bound examples until they stop
changing, then a full pass again.  For a KKT violator i the partner j
maximizes |E_i - E_j| (first index on ties), falling back to a seeded random
order over the remaining indices when that step cannot move.  A full pass
with no change means the KKT conditions hold within tol; hitting the pass
cap instead returns the best-objective iterate seen, flagged non-converged.
"""
from __future__ import annotations

import numpy as np

from gazebench.ml.base import (
    LabeledMatrix,
    LinearSvcParams,
    ModelKind,
    RbfSvcParams,
    register_kind,
)


def standardization(X: np.ndarray):
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return mean, std


def train_linear_svc(data: LabeledMatrix, hp: LinearSvcParams, seed: int):
    mean, std = standardization(data.X)
    Xs = np.hstack([(data.X - mean) / std, np.ones((data.n_samples, 1))])
    y_signed = 2.0 * data.y - 1.0
    n = data.n_samples

    q_diag = np.einsum("ij,ij->i", Xs, Xs)
    alpha = np.zeros(n)
    w = np.zeros(Xs.shape[1])
    rng = np.random.default_rng(seed)
    converged = False
    for _ in range(hp.epochs):
        worst = 0.0
        for i in rng.permutation(n):
            g = y_signed[i] * (w @ Xs[i]) - 1.0
            if alpha[i] <= 0.0:
                pg = min(g, 0.0)
            elif alpha[i] >= hp.C:
                pg = max(g, 0.0)
            else:
                pg = g
            worst = max(worst, abs(pg))
            if pg != 0.0:
                step = min(max(alpha[i] - g / q_diag[i], 0.0), hp.C)
                if step != alpha[i]:
                    w = w + (step - alpha[i]) * y_signed[i] * Xs[i]
                    alpha[i] = step
        if worst < hp.tol:
            converged = True
            break
    params = {
        "weights": w[:-1],
        "bias": float(w[-1]),
        "mean": mean,
        "std": std,
    }
    return params, converged


def predict_linear_svc(params: dict, X: np.ndarray) -> np.ndarray:
    scores = ((X - params["mean"]) / params["std"]) @ params["weights"] + params["bias"]
    return (scores > 0.0).astype(np.int64)


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    sq = (
        np.sum(A**2, axis=1)[:, None]
        + np.sum(B**2, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def resolve_gamma(Xs: np.ndarray, gamma: float | None) -> float:
    if gamma is not None:
        return gamma
    total_var = float(Xs.var())
    if total_var <= 0.0:
        total_var = 1.0
    return 1.0 / (Xs.shape[1] * total_var)


def dual_objective(alpha, y_signed, kernel) -> float:
    v = alpha * y_signed
    return float(alpha.sum() - 0.5 * (v @ kernel @ v))


def _smo_step(i, j, alpha, y_signed, kernel, errors, b, C):
    """Joint optimization of (alpha_i, alpha_j); returns updated b or None."""
    if i == j:
        return None
    a_i, a_j = alpha[i], alpha[j]
    y_i, y_j = y_signed[i], y_signed[j]
    if y_i != y_j:
        low, high = max(0.0, a_j - a_i), min(C, C + a_j - a_i)
    else:
        low, high = max(0.0, a_i + a_j - C), min(C, a_i + a_j)
    if low >= high:
        return None
    eta = 2.0 * kernel[i, j] - kernel[i, i] - kernel[j, j]
    if eta >= 0.0:
        return None
    e_i, e_j = errors[i], errors[j]
    a_j_new = np.clip(a_j - y_j * (e_i - e_j) / eta, low, high)
    if abs(a_j_new - a_j) < 1e-12 * (a_j_new + a_j + 1e-12):
        return None
    a_i_new = a_i + y_i * y_j * (a_j - a_j_new)

    b1 = b - e_i - y_i * (a_i_new - a_i) * kernel[i, i] - y_j * (a_j_new - a_j) * kernel[i, j]
    b2 = b - e_j - y_i * (a_i_new - a_i) * kernel[i, j] - y_j * (a_j_new - a_j) * kernel[j, j]
    if 0.0 < a_i_new < C:
        b_new = b1
    elif 0.0 < a_j_new < C:
        b_new = b2
    else:
        b_new = 0.5 * (b1 + b2)

    errors += (
        y_i * (a_i_new - a_i) * kernel[i]
        + y_j * (a_j_new - a_j) * kernel[j]
        + (b_new - b)
    )
    alpha[i], alpha[j] = a_i_new, a_j_new
    return b_new


def train_rbf_svc(data: LabeledMatrix, hp: RbfSvcParams, seed: int):
    mean, std = standardization(data.X)
    Xs = (data.X - mean) / std
    y_signed = 2.0 * data.y - 1.0
    n = data.n_samples
    gamma = resolve_gamma(Xs, hp.gamma)
    kernel = rbf_kernel(Xs, Xs, gamma)

    alpha = np.zeros(n)
    b = 0.0
    errors = -y_signed.astype(np.float64).copy()  # f(x) - y with f = 0
    rng = np.random.default_rng(seed)

    def examine(i: int) -> bool:
        nonlocal b
        margin_i = y_signed[i] * errors[i]
        if not (
            (margin_i < -hp.tol and alpha[i] < hp.C)
            or (margin_i > hp.tol and alpha[i] > 0.0)
        ):
            return False
        gaps = np.abs(errors[i] - errors)
        gaps[i] = -1.0
        b_new = _smo_step(i, int(np.argmax(gaps)), alpha, y_signed, kernel, errors, b, hp.C)
        if b_new is None:
            for j in rng.permutation(n):
                b_new = _smo_step(i, int(j), alpha, y_signed, kernel, errors, b, hp.C)
                if b_new is not None:
                    break
        if b_new is None:
            return False
        b = b_new
        return True

    converged = False
    best = (dual_objective(alpha, y_signed, kernel), alpha.copy(), b)
    objective_curve = [best[0]]
    examine_all = True
    for _ in range(hp.max_passes):
        if examine_all:
            rows = range(n)
        else:
            rows = np.nonzero((alpha > 0.0) & (alpha < hp.C))[0]
        changed = sum(examine(int(i)) for i in rows)
        objective_curve.append(dual_objective(alpha, y_signed, kernel))
        if objective_curve[-1] > best[0]:
            best = (objective_curve[-1], alpha.copy(), b)
        if examine_all:
            if changed == 0:
                converged = True
                break
            examine_all = False
        elif changed == 0:
            examine_all = True

    if not converged:
        _, alpha, b = best

    keep = alpha > 1e-12
    params = {
        "support_x": Xs[keep],
        "support_coef": (alpha * y_signed)[keep],
        "bias": float(b),
        "gamma": float(gamma),
        "mean": mean,
        "std": std,
        "dual_objective": np.array(objective_curve),
        "final_alpha": alpha,
    }
    return params, converged


def predict_rbf_svc(params: dict, X: np.ndarray) -> np.ndarray:
    Xs = (X - params["mean"]) / params["std"]
    if params["support_x"].shape[0] == 0:
        scores = np.full(X.shape[0], params["bias"])
    else:
        scores = rbf_kernel(Xs, params["support_x"], params["gamma"]) @ params[
            "support_coef"
        ] + params["bias"]
    return (scores > 0.0).astype(np.int64)


register_kind(ModelKind.LINEAR_SVC, train_linear_svc, predict_linear_svc)
register_kind(ModelKind.RBF_SVC, train_rbf_svc, predict_rbf_svc)
