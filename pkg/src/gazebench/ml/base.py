"""Shared classifier interface: data container, model kinds, dispatch, I/O.

Every trainer is a pure function (data, hyperparams, seed) -> parameter dict;
this module wraps them behind one `train` entry point, one `predict`
dispatcher, and a lossless .npz serialization.  Predictions depend only on
the stored parameters, so a round-tripped model predicts identically.

Labels are binary with the fixed encoding left=1, right=0.  Single-class
training data is legal and yields a constant predictor rather than an error.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from math import ceil, sqrt

import numpy as np

FORMAT_VERSION = 1


class ModelKind(Enum):
    """The eight classifier kinds; values are the display/CSV names."""

    DECISION_TREE = "DecisionTree"
    RANDOM_FOREST = "RandomForest"
    GRADIENT_BOOST = "GradientBoost"
    XGBOOST_STYLE = "XGBoost"
    ADABOOST = "AdaBoost"
    GAUSSIAN_NB = "GaussianNB"
    LINEAR_SVC = "LinearSVC"
    RBF_SVC = "RBF SVC"


ENSEMBLE_KINDS = (
    ModelKind.DECISION_TREE,
    ModelKind.RANDOM_FOREST,
    ModelKind.GRADIENT_BOOST,
    ModelKind.XGBOOST_STYLE,
    ModelKind.ADABOOST,
)


@dataclass(frozen=True, eq=False)
class LabeledMatrix:
    """Feature matrix with binary labels and per-row subject ids."""

    X: np.ndarray
    y: np.ndarray
    subject_ids: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", np.ascontiguousarray(self.X, dtype=np.float64))
        object.__setattr__(self, "y", np.ascontiguousarray(self.y, dtype=np.int64))
        object.__setattr__(
            self, "subject_ids", np.ascontiguousarray(self.subject_ids, dtype=np.int64)
        )

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def has_both_classes(self) -> bool:
        return bool(self.y.min(initial=1) == 0 and self.y.max(initial=0) == 1)

    def validate(self) -> None:
        if self.X.ndim != 2 or self.y.ndim != 1 or self.subject_ids.ndim != 1:
            raise ValueError("X must be 2-D; y and subject_ids 1-D")
        if not (self.X.shape[0] == self.y.shape[0] == self.subject_ids.shape[0]):
            raise ValueError("row counts of X, y, subject_ids disagree")
        if self.n_samples == 0:
            raise ValueError("empty data")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("non-finite feature values")
        if not np.all((self.y == 0) | (self.y == 1)):
            raise ValueError("labels must be 0 or 1")


def labeled_matrix_from_features(features) -> LabeledMatrix:
    """Stack FeatureVectors (directions required) into a LabeledMatrix."""
    if not features:
        raise ValueError("no feature vectors")
    for fv in features:
        if fv.direction is None:
            raise ValueError("feature vector lacks a direction label")
    data = LabeledMatrix(
        X=np.stack([fv.values for fv in features]),
        y=np.array([int(fv.direction) for fv in features]),
        subject_ids=np.array([fv.subject_id for fv in features]),
    )
    data.validate()
    return data


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 8
    min_leaf: int = 2


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    bootstrap: bool = True
    features_per_split: int | None = None  # None -> ceil(sqrt(n_features))
    max_depth: int = 8
    min_leaf: int = 2

    def resolved_features_per_split(self, n_features: int) -> int:
        if self.features_per_split is not None:
            return min(self.features_per_split, n_features)
        return min(ceil(sqrt(n_features)), n_features)


@dataclass(frozen=True)
class GradientBoostParams:
    n_stages: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_leaf: int = 1


@dataclass(frozen=True)
class XgbParams:
    n_stages: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_leaf: int = 1
    reg_lambda: float = 1.0
    gamma: float = 0.0


@dataclass(frozen=True)
class AdaBoostParams:
    n_stages: int = 50


@dataclass(frozen=True)
class GaussianNBParams:
    var_smoothing: float = 1e-9  # scaled by the largest feature variance


@dataclass(frozen=True)
class LinearSvcParams:
    C: float = 1.0
    epochs: int = 1000
    tol: float = 1e-4


@dataclass(frozen=True)
class RbfSvcParams:
    C: float = 1.0
    gamma: float | None = None  # None -> 1 / (n_features * Var(X))
    tol: float = 1e-3
    max_passes: int = 500


DEFAULT_HYPERPARAMS = {
    ModelKind.DECISION_TREE: TreeParams(),
    ModelKind.RANDOM_FOREST: ForestParams(),
    ModelKind.GRADIENT_BOOST: GradientBoostParams(),
    ModelKind.XGBOOST_STYLE: XgbParams(),
    ModelKind.ADABOOST: AdaBoostParams(),
    ModelKind.GAUSSIAN_NB: GaussianNBParams(),
    ModelKind.LINEAR_SVC: LinearSvcParams(),
    ModelKind.RBF_SVC: RbfSvcParams(),
}


@dataclass(frozen=True)
class TrainedModel:
    """Immutable fitted classifier: kind tag plus kind-specific parameters."""

    kind: ModelKind
    n_features: int
    params: dict = field(repr=False)
    seed: int = 0
    train_seconds: float = 0.0
    converged: bool = True


# kind -> (trainer(data, hp, seed) -> (params, converged), predictor(params, X) -> labels)
_TRAINERS: dict = {}
_PREDICTORS: dict = {}


def register_kind(kind: ModelKind, trainer, predictor) -> None:
    _TRAINERS[kind] = trainer
    _PREDICTORS[kind] = predictor


def train(kind: ModelKind, data: LabeledMatrix, hp=None, seed: int = 0) -> TrainedModel:
    """Fit one classifier; wall time is measured around the trainer call.

    Degenerate single-class data short-circuits to a constant predictor for
    every kind.
    """
    data.validate()
    if hp is None:
        hp = DEFAULT_HYPERPARAMS[kind]
    start = time.perf_counter()
    if not data.has_both_classes:
        params, converged = {"constant": float(data.y[0])}, True
    else:
        params, converged = _TRAINERS[kind](data, hp, seed)
    elapsed = time.perf_counter() - start
    return TrainedModel(
        kind=kind,
        n_features=data.n_features,
        params=params,
        seed=seed,
        train_seconds=elapsed,
        converged=converged,
    )


def predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    """Labels for each row of X; pure function of (model.params, X)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"expected (n, {model.n_features}) features, got {X.shape}"
        )
    if "constant" in model.params:
        return np.full(X.shape[0], int(model.params["constant"]), dtype=np.int64)
    return _PREDICTORS[model.kind](model.params, X)


def predict_accuracy(model: TrainedModel, data: LabeledMatrix) -> float:
    data.validate()
    return float(np.mean(predict(model, data.X) == data.y))


def save_model(model: TrainedModel, path) -> None:
    """Lossless .npz serialization (versioned; float bits preserved)."""
    payload = {
        "meta_version": np.array(FORMAT_VERSION),
        "meta_kind": np.array(model.kind.name),
        "meta_n_features": np.array(model.n_features),
        "meta_seed": np.array(model.seed),
        "meta_train_seconds": np.array(model.train_seconds),
        "meta_converged": np.array(model.converged),
    }
    for key, value in model.params.items():
        payload[f"p_{key}"] = np.asarray(value)
    np.savez(path, **payload)


def load_model(path) -> TrainedModel:
    with np.load(path, allow_pickle=False) as blob:
        version = int(blob["meta_version"])
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {version}")
        params = {}
        for key in blob.files:
            if key.startswith("p_"):
                arr = blob[key]
                params[key[2:]] = arr.item() if arr.ndim == 0 else arr
        return TrainedModel(
            kind=ModelKind[str(blob["meta_kind"])],
            n_features=int(blob["meta_n_features"]),
            params=params,
            seed=int(blob["meta_seed"]),
            train_seconds=float(blob["meta_train_seconds"]),
            converged=bool(blob["meta_converged"]),
        )
