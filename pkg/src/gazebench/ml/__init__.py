"""From-scratch classifier panel behind a uniform train/predict interface.

Importing this package registers all eight model kinds with the dispatcher
in :mod:`gazebench.ml.base`.
"""

from gazebench.ml import adaboost, boosting, forest, naive_bayes, svm  # noqa: F401
from gazebench.ml.base import (
    DEFAULT_HYPERPARAMS,
    ENSEMBLE_KINDS,
    AdaBoostParams,
    ForestParams,
    GaussianNBParams,
    GradientBoostParams,
    LabeledMatrix,
    LinearSvcParams,
    ModelKind,
    RbfSvcParams,
    TrainedModel,
    TreeParams,
    XgbParams,
    labeled_matrix_from_features,
    load_model,
    predict,
    predict_accuracy,
    save_model,
    train,
)

__all__ = [
    "DEFAULT_HYPERPARAMS",
    "ENSEMBLE_KINDS",
    "AdaBoostParams",
    "ForestParams",
    "GaussianNBParams",
    "GradientBoostParams",
    "LabeledMatrix",
    "LinearSvcParams",
    "ModelKind",
    "RbfSvcParams",
    "TrainedModel",
    "TreeParams",
    "XgbParams",
    "labeled_matrix_from_features",
    "load_model",
    "predict",
    "predict_accuracy",
    "save_model",
    "train",
]
