import numpy as np
import pytest

from gazebench import datamodel, synth


@pytest.fixture(scope="session")
def small_config() -> synth.GeneratorConfig:
    return synth.GeneratorConfig(
        n_subjects=8,
        trials_per_subject=24,
        n_channels=4,
        master_seed=3,
    )


@pytest.fixture(scope="session")
def small_pa(small_config) -> datamodel.Dataset:
    return synth.generate_dataset(datamodel.Paradigm.PRO_ANTISACCADE, small_config)


@pytest.fixture(scope="session")
def small_lg(small_config) -> datamodel.Dataset:
    return synth.generate_dataset(datamodel.Paradigm.LARGE_GRID, small_config)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def two_blobs(n_per_class=100, n_features=5, gap=2.0, seed=0):
    """Linearly separable-ish Gaussian blobs for classifier sanity checks."""
    gen = np.random.default_rng(seed)
    x0 = gen.normal(-gap / 2, 1.0, size=(n_per_class, n_features))
    x1 = gen.normal(gap / 2, 1.0, size=(n_per_class, n_features))
    X = np.vstack([x0, x1])
    y = np.repeat([0, 1], n_per_class)
    order = gen.permutation(len(y))
    return X[order], y[order]


def two_circles(n_per_class=100, seed=0):
    """Concentric rings; separable only with a nonlinear boundary."""
    gen = np.random.default_rng(seed)
    radii = np.concatenate([
        gen.normal(1.0, 0.1, n_per_class),
        gen.normal(3.0, 0.1, n_per_class),
    ])
    theta = gen.uniform(0, 2 * np.pi, 2 * n_per_class)
    X = np.column_stack([radii * np.cos(theta), radii * np.sin(theta)])
    y = np.repeat([0, 1], n_per_class)
    order = gen.permutation(len(y))
    return X[order], y[order]
