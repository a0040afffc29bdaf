import numpy as np
import pytest

from align_audit import Dataset


@pytest.fixture
def toy_dataset():
    """Five rows, one feature, with easy hand-checkable group moments."""
    X = np.array([[2.0], [4.0], [6.0], [1.0], [3.0]])
    y = np.array([1, 1, 1, 0, 0])
    return Dataset(X, ["x"], y)


@pytest.fixture
def blob_dataset():
    """Two well-separated Gaussian blobs, 120 rows, 2 features."""
    rng = np.random.default_rng(5)
    X0 = rng.normal(loc=(-2.0, 0.0), scale=0.8, size=(60, 2))
    X1 = rng.normal(loc=(2.0, 1.0), scale=0.8, size=(60, 2))
    X = np.vstack([X0, X1])
    y = np.array([0] * 60 + [1] * 60)
    perm = rng.permutation(120)
    return Dataset(X[perm], ["a", "b"], y[perm])


def write_text(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)
