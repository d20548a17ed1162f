"""Train/predict/save/load API shared by all classifier kinds."""
import numpy as np
import pytest

from gazebench import ml
from gazebench.ml import base

from conftest import two_blobs

ALL_KINDS = list(ml.ModelKind)


def _data(X, y):
    return base.LabeledMatrix(X=np.asarray(X, dtype=float),
                              y=np.asarray(y, dtype=np.int64),
                              subject_ids=np.zeros(len(y), dtype=np.int64))


@pytest.fixture(scope="module")
def blob_data():
    X, y = two_blobs(n_per_class=60, gap=2.0, seed=21)
    return _data(X, y)


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.name)
def test_train_predict_round_trip(kind, blob_data, tmp_path):
    model = ml.train(kind, blob_data, seed=4)
    assert model.kind is kind
    assert model.n_features == blob_data.n_features
    assert model.train_seconds >= 0.0
    preds = ml.predict(model, blob_data.X)
    assert preds.shape == (blob_data.n_samples,)
    assert set(np.unique(preds)) <= {0, 1}
    assert np.mean(preds == blob_data.y) >= 0.9

    path = tmp_path / f"{kind.name}.npz"
    ml.save_model(model, path)
    loaded = ml.load_model(path)
    assert loaded.kind is kind
    assert loaded.n_features == model.n_features
    assert loaded.seed == model.seed
    assert loaded.converged == model.converged
    assert np.array_equal(ml.predict(loaded, blob_data.X), preds)


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.name)
def test_same_seed_same_model(kind, blob_data):
    a = ml.train(kind, blob_data, seed=7)
    b = ml.train(kind, blob_data, seed=7)
    for key, value in a.params.items():
        if isinstance(value, np.ndarray):
            assert np.array_equal(value, b.params[key]), key
        else:
            assert value == b.params[key], key


def test_single_class_training_yields_constant():
    X = np.random.default_rng(0).normal(size=(10, 3))
    for label in (0, 1):
        data = _data(X, np.full(10, label))
        for kind in ALL_KINDS:
            model = ml.train(kind, data, seed=1)
            assert np.array_equal(ml.predict(model, X), np.full(10, label)), kind


def test_feature_count_mismatch_rejected(blob_data):
    model = ml.train(ml.ModelKind.GAUSSIAN_NB, blob_data)
    with pytest.raises(ValueError):
        ml.predict(model, blob_data.X[:, :-1])


def test_labeled_matrix_validation():
    with pytest.raises(ValueError):
        base.LabeledMatrix(X=np.zeros((3, 2)), y=np.array([0, 1, 2]),
                           subject_ids=np.zeros(3, dtype=np.int64)).validate()
    with pytest.raises(ValueError):
        base.LabeledMatrix(X=np.zeros((0, 2)), y=np.zeros(0, dtype=np.int64),
                           subject_ids=np.zeros(0, dtype=np.int64)).validate()
    with pytest.raises(ValueError):
        base.LabeledMatrix(X=np.array([[np.inf, 0.0]]),
                           y=np.array([0], dtype=np.int64),
                           subject_ids=np.zeros(1, dtype=np.int64)).validate()


def test_model_kind_display_names():
    assert {k.value for k in ml.ModelKind} == {
        "DecisionTree", "RandomForest", "GradientBoost", "XGBoost",
        "AdaBoost", "GaussianNB", "LinearSVC", "RBF SVC"}
    assert [k.value for k in ml.ENSEMBLE_KINDS] == [
        "DecisionTree", "RandomForest", "GradientBoost", "XGBoost", "AdaBoost"]


def test_default_hyperparams_cover_all_kinds():
    assert set(base.DEFAULT_HYPERPARAMS) == set(ml.ModelKind)


def test_accuracy_helper(blob_data):
    model = ml.train(ml.ModelKind.DECISION_TREE, blob_data)
    acc = ml.predict_accuracy(model, blob_data)
    direct = float(np.mean(ml.predict(model, blob_data.X) == blob_data.y))
    assert acc == direct
