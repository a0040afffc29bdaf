import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from align_audit import MlpBinaryClassifier, TrainingError, numerical_gradient_check
from align_audit.mlp import _bce, _sigmoid


def test_sigmoid_saturates_without_overflow():
    assert _sigmoid(np.array([1000.0]))[0] == pytest.approx(1.0)
    assert _sigmoid(np.array([-1000.0]))[0] == pytest.approx(0.0)
    assert _sigmoid(np.array([0.0]))[0] == 0.5


def test_bce_clamps_extreme_probabilities():
    loss = _bce(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
    assert np.isfinite(loss)
    assert loss > 20  # log(1e-12) territory


def test_initialize_shapes_and_bounds():
    model = MlpBinaryClassifier(hidden_layer_sizes=(8, 3), random_state=0)
    model.initialize(5)
    shapes = [w.shape for w in model.weights_]
    assert shapes == [(5, 8), (8, 3), (3, 1)]
    assert all(b.shape == (w.shape[1],) for w, b in zip(model.weights_, model.biases_))
    assert all(np.all(b == 0.0) for b in model.biases_)
    for W in model.weights_:
        limit = np.sqrt(6.0 / sum(W.shape))
        assert np.all(np.abs(W) <= limit)


def test_initialize_is_seeded():
    a = MlpBinaryClassifier(random_state=3).initialize(4)
    b = MlpBinaryClassifier(random_state=3).initialize(4)
    c = MlpBinaryClassifier(random_state=4).initialize(4)
    assert all(np.array_equal(x, y) for x, y in zip(a.weights_, b.weights_))
    assert not all(np.array_equal(x, y) for x, y in zip(a.weights_, c.weights_))


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(1)
    model = MlpBinaryClassifier(hidden_layer_sizes=(4,), random_state=7)
    model.initialize(2)
    X = rng.normal(size=(16, 2))
    y = (rng.random(16) > 0.5).astype(float)
    assert numerical_gradient_check(model, X, y) < 1e-5


def test_gradients_match_on_deeper_network():
    rng = np.random.default_rng(2)
    model = MlpBinaryClassifier(hidden_layer_sizes=(6, 5, 3), random_state=0)
    model.initialize(3)
    X = rng.normal(size=(10, 3))
    y = (rng.random(10) > 0.5).astype(float)
    assert numerical_gradient_check(model, X, y) < 1e-5


def test_fit_separates_blobs(blob_dataset):
    model = MlpBinaryClassifier(hidden_layer_sizes=(16,), max_epochs=60,
                                random_state=0)
    model.fit(blob_dataset.X, blob_dataset.y)
    acc = (model.predict(blob_dataset.X) == blob_dataset.y).mean()
    assert acc >= 0.95
    assert model.loss_curve_[-1] < model.loss_curve_[0]


def test_fit_is_deterministic(blob_dataset):
    a = MlpBinaryClassifier(max_epochs=8, random_state=5).fit(
        blob_dataset.X, blob_dataset.y)
    b = MlpBinaryClassifier(max_epochs=8, random_state=5).fit(
        blob_dataset.X, blob_dataset.y)
    assert all(np.array_equal(x, y) for x, y in zip(a.weights_, b.weights_))
    assert a.loss_curve_ == b.loss_curve_


def test_early_stopping_restores_best_weights(blob_dataset):
    model = MlpBinaryClassifier(hidden_layer_sizes=(16,), max_epochs=200,
                                patience=5, random_state=0)
    model.fit(blob_dataset.X, blob_dataset.y)
    assert model.n_epochs_ < 200  # separable data stalls long before the cap
    assert model.best_validation_score_ == max(model.validation_scores_)
    assert model.best_epoch_ == int(np.argmax(model.validation_scores_))


def test_early_stopping_can_be_disabled(blob_dataset):
    model = MlpBinaryClassifier(max_epochs=5, early_stopping=False,
                                random_state=0)
    model.fit(blob_dataset.X, blob_dataset.y)
    assert model.n_epochs_ == 5
    assert model.validation_scores_ == []


def test_validation_carve_is_seeded(blob_dataset):
    # same seed, same carve, same curve; the carve happens before training
    a = MlpBinaryClassifier(max_epochs=3, random_state=1).fit(
        blob_dataset.X, blob_dataset.y)
    b = MlpBinaryClassifier(max_epochs=3, random_state=1).fit(
        blob_dataset.X, blob_dataset.y)
    assert a.validation_scores_ == b.validation_scores_


def test_predict_proba_shape_and_sum(blob_dataset):
    model = MlpBinaryClassifier(max_epochs=3, random_state=0).fit(
        blob_dataset.X, blob_dataset.y)
    proba = model.predict_proba(blob_dataset.X)
    assert proba.shape == (blob_dataset.n_rows, 2)
    assert np.allclose(proba.sum(axis=1), 1.0)
    assert np.all((proba >= 0.0) & (proba <= 1.0))


def test_fit_validation():
    X = np.ones((4, 2))
    with pytest.raises(ValueError, match="at least 10 rows"):
        MlpBinaryClassifier().fit(X, np.array([0, 1, 0, 1]))
    X = np.random.default_rng(0).normal(size=(12, 2))
    with pytest.raises(ValueError, match="0 and 1"):
        MlpBinaryClassifier().fit(X, np.full(12, 3))
    with pytest.raises(ValueError, match="validation_fraction"):
        MlpBinaryClassifier(validation_fraction=1.0).fit(
            X, np.tile([0, 1], 6))


def test_estimator_guards(blob_dataset):
    with pytest.raises(NotFittedError):
        MlpBinaryClassifier().predict(blob_dataset.X)
    model = MlpBinaryClassifier(max_epochs=2, random_state=0).fit(
        blob_dataset.X, blob_dataset.y)
    with pytest.raises(ValueError, match="expected 2 features"):
        model.predict(np.ones((3, 9)))


def test_non_finite_loss_raises_training_error(monkeypatch, blob_dataset):
    model = MlpBinaryClassifier(max_epochs=3, random_state=0)
    monkeypatch.setattr(model, "_loss_and_grads",
                        lambda X, y: (float("nan"), None, None))
    with pytest.raises(TrainingError, match="epoch 0"):
        model.fit(blob_dataset.X, blob_dataset.y)


def test_batch_size_larger_than_data(blob_dataset):
    model = MlpBinaryClassifier(max_epochs=3, batch_size=10_000,
                                random_state=0)
    model.fit(blob_dataset.X, blob_dataset.y)
    assert len(model.loss_curve_) == 3
