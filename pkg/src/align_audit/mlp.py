"""Small fully-connected network for binary classification, trained with
minibatch Adam and early stopping on a held-out validation slice.

Written against bare numpy so the gradients can be checked against finite
differences and every random draw flows from a single seeded generator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .exceptions import TrainingError

#: Probability clamp used inside the cross-entropy, keeping log() finite.
_EPS = 1e-12


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


def _bce(prob, y):
    p = np.clip(prob, _EPS, 1.0 - _EPS)
    return float(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).mean())


class MlpBinaryClassifier(ClassifierMixin, BaseEstimator):
    """ReLU multilayer perceptron with a sigmoid output unit.

    Trains on binary cross-entropy with minibatch Adam. When
    `early_stopping` is on, a seeded fraction of the training rows is held
    out, accuracy on it is tracked per epoch, and the weights from the best
    epoch are restored when `patience` epochs pass without improvement
    beyond `tol`.
    """

    def __init__(self, hidden_layer_sizes=(128, 64, 16), learning_rate=1e-3,
                 max_epochs=400, early_stopping=True, validation_fraction=0.1,
                 patience=10, tol=1e-4, batch_size=32, random_state=42):
        self.hidden_layer_sizes = hidden_layer_sizes
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.early_stopping = early_stopping
        self.validation_fraction = validation_fraction
        self.patience = patience
        self.tol = tol
        self.batch_size = batch_size
        self.random_state = random_state

    # -- parameter handling ------------------------------------------------

    def initialize(self, n_features):
        """Seeded Glorot-uniform weights and zero biases, sized for
        `n_features` inputs. Exposed so gradient checks can build a network
        without running fit.
        """
        rng = np.random.default_rng(self.random_state)
        sizes = [n_features, *self.hidden_layer_sizes, 1]
        self.weights_ = []
        self.biases_ = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            self.weights_.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            self.biases_.append(np.zeros(fan_out))
        self.n_features_in_ = n_features
        self.classes_ = np.array([0, 1])
        return self

    def _forward(self, X):
        """Activations of every layer; the last entry is P(class 1)."""
        acts = [X]
        last = len(self.weights_) - 1
        for i, (W, b) in enumerate(zip(self.weights_, self.biases_)):
            z = acts[-1] @ W + b
            acts.append(_sigmoid(z)[:, 0] if i == last else np.maximum(z, 0.0))
        return acts

    def _loss_and_grads(self, X, y):
        """Mean cross-entropy and its gradients for one batch.

        The output-layer delta uses the unclipped probabilities, which is
        the exact gradient of the clipped loss everywhere the clamp is
        inactive (always, in practice, since the clamp sits at 1e-12).
        """
        acts = self._forward(X)
        prob = acts[-1]
        loss = _bce(prob, y)
        n = y.size
        grads_w = [None] * len(self.weights_)
        grads_b = [None] * len(self.biases_)
        delta = ((prob - y) / n)[:, None]
        for i in range(len(self.weights_) - 1, -1, -1):
            grads_w[i] = acts[i].T @ delta
            grads_b[i] = delta.sum(axis=0)
            if i > 0:
                delta = (delta @ self.weights_[i].T) * (acts[i] > 0.0)
        return loss, grads_w, grads_b

    # -- training ----------------------------------------------------------

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        if not np.isin(y, (0, 1)).all():
            raise ValueError("y must contain only 0 and 1")
        if X.shape[0] < 10:
            raise ValueError("need at least 10 rows to train")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ValueError("validation_fraction must lie strictly between 0 and 1")
        y = y.astype(np.float64)
        n = X.shape[0]

        rng = np.random.default_rng(self.random_state)
        self.initialize(X.shape[1])

        if self.early_stopping:
            n_val = max(1, int(round(n * self.validation_fraction)))
            if n_val >= n:
                raise ValueError("validation slice would consume every row")
            perm = rng.permutation(n)
            val_idx, fit_idx = perm[:n_val], perm[n_val:]
            X_val, y_val = X[val_idx], y[val_idx]
            X_fit, y_fit = X[fit_idx], y[fit_idx]
        else:
            X_fit, y_fit = X, y
            X_val = y_val = None

        m_w = [np.zeros_like(W) for W in self.weights_]
        v_w = [np.zeros_like(W) for W in self.weights_]
        m_b = [np.zeros_like(b) for b in self.biases_]
        v_b = [np.zeros_like(b) for b in self.biases_]
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        t = 0

        best_score = -np.inf
        best_epoch = -1
        best_params = None
        stall = 0
        self.loss_curve_ = []
        self.validation_scores_ = []

        n_fit = X_fit.shape[0]
        for epoch in range(self.max_epochs):
            order = rng.permutation(n_fit)
            epoch_loss = 0.0
            for start in range(0, n_fit, self.batch_size):
                idx = order[start : start + self.batch_size]
                loss, gw, gb = self._loss_and_grads(X_fit[idx], y_fit[idx])
                if not np.isfinite(loss):
                    raise TrainingError(f"loss diverged at epoch {epoch}")
                epoch_loss += loss * idx.size
                t += 1
                c1 = 1.0 - beta1 ** t
                c2 = 1.0 - beta2 ** t
                for params, grads, ms, vs in (
                    (self.weights_, gw, m_w, v_w),
                    (self.biases_, gb, m_b, v_b),
                ):
                    for p, g, m, v in zip(params, grads, ms, vs):
                        m *= beta1
                        m += (1.0 - beta1) * g
                        v *= beta2
                        v += (1.0 - beta2) * g * g
                        p -= self.learning_rate * (m / c1) / (np.sqrt(v / c2) + eps)
            self.loss_curve_.append(epoch_loss / n_fit)

            if not self.early_stopping:
                continue
            score = float(((self._forward(X_val)[-1] >= 0.5) == y_val).mean())
            self.validation_scores_.append(score)
            if score > best_score + self.tol:
                best_score = score
                best_epoch = epoch
                best_params = ([W.copy() for W in self.weights_],
                               [b.copy() for b in self.biases_])
                stall = 0
            else:
                stall += 1
                if stall >= self.patience:
                    break

        if self.early_stopping and best_params is not None:
            self.weights_, self.biases_ = best_params
            self.best_epoch_ = best_epoch
            self.best_validation_score_ = best_score
        self.n_epochs_ = len(self.loss_curve_)
        return self

    # -- inference ---------------------------------------------------------

    def predict_proba(self, X):
        check_is_fitted(self, "weights_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        p1 = self._forward(X)[-1]
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)


def numerical_gradient_check(model, X, y, step=1e-5):
    """Largest relative disagreement between backprop and finite differences.

    Central differences with the given step, parameter by parameter. The
    relative error denominator is floored at 1e-4 so that parameters whose
    true gradient is essentially zero compare on an absolute scale instead
    of blowing up the ratio.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _, grads_w, grads_b = model._loss_and_grads(X, y)
    worst = 0.0
    for params, grads in ((model.weights_, grads_w), (model.biases_, grads_b)):
        for p, g in zip(params, grads):
            flat_p, flat_g = p.ravel(), g.ravel()
            for k in range(flat_p.size):
                orig = flat_p[k]
                flat_p[k] = orig + step
                hi = _bce(model._forward(X)[-1], y)
                flat_p[k] = orig - step
                lo = _bce(model._forward(X)[-1], y)
                flat_p[k] = orig
                numeric = (hi - lo) / (2.0 * step)
                denom = max(abs(flat_g[k]) + abs(numeric), 1e-4)
                worst = max(worst, abs(flat_g[k] - numeric) / denom)
    return worst
