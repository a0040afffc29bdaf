"""Binary classification tree grown by entropy gain, with split-based
feature importances.

Implemented directly on numpy rather than wrapping an existing learner so
that the split search, tie-breaking, and importance accounting are exactly
the documented ones and stay stable across library upgrades.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y


def entropy(counts):
    """Shannon entropy in bits of a class-count vector."""
    c = np.asarray(counts, dtype=float)
    if (c < 0).any():
        raise ValueError("counts must be non-negative")
    total = c.sum()
    if total == 0:
        raise ValueError("counts must not all be zero")
    p = c[c > 0] / total
    return float(-(p * np.log2(p)).sum())


def _entropy_bits(count_one, total):
    """Vectorized two-class entropy: elementwise over arrays of counts.

    Entries with total 0 come back as 0 so callers can mask them away
    without tripping on division warnings.
    """
    count_one = np.asarray(count_one, dtype=float)
    total = np.asarray(total, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        p1 = np.where(total > 0, count_one / np.maximum(total, 1), 0.0)
        p0 = 1.0 - p1
        h = -(np.where(p1 > 0, p1 * np.log2(np.maximum(p1, 1e-300)), 0.0)
              + np.where(p0 > 0, p0 * np.log2(np.maximum(p0, 1e-300)), 0.0))
    return np.where(total > 0, h, 0.0)


class TreeNode:
    """One node of a grown tree. Leaves have feature None."""

    __slots__ = ("feature", "threshold", "left", "right",
                 "n_node", "impurity", "gain", "counts")

    def __init__(self, *, feature=None, threshold=None, left=None, right=None,
                 n_node=0, impurity=0.0, gain=0.0, counts=(0, 0)):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.n_node = n_node
        self.impurity = impurity
        self.gain = gain
        self.counts = counts

    @property
    def is_leaf(self):
        return self.feature is None

    @property
    def proba(self):
        """P(class 1) among the training rows that reached this node."""
        return self.counts[1] / self.n_node


def _best_split(X, y, min_samples_leaf):
    """The (feature, threshold, gain) of the best admissible split, or None.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values. A split is admissible when both children hold at least
    `min_samples_leaf` rows. Ties in gain go to the lowest feature index,
    then the lowest threshold; a winning gain must be strictly positive.
    """
    n, p = X.shape
    parent_h = _entropy_bits(y.sum(), n).item()
    best = None  # (gain, feature, threshold)
    for j in range(p):
        order = np.argsort(X[:, j], kind="stable")
        xs, ys = X[order, j], y[order]
        ones = np.cumsum(ys)
        # boundary after position i means rows 0..i go left
        boundary = np.nonzero(xs[1:] > xs[:-1])[0]
        if boundary.size == 0:
            continue
        n_left = boundary + 1
        n_right = n - n_left
        ok = (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
        if not ok.any():
            continue
        n_left, n_right, boundary = n_left[ok], n_right[ok], boundary[ok]
        ones_left = ones[boundary]
        ones_right = ones[-1] - ones_left
        h_left = _entropy_bits(ones_left, n_left)
        h_right = _entropy_bits(ones_right, n_right)
        gains = parent_h - (n_left * h_left + n_right * h_right) / n
        k = int(np.argmax(gains))  # first max = lowest threshold
        if gains[k] <= 0.0:
            continue
        threshold = (xs[boundary[k]] + xs[boundary[k] + 1]) / 2.0
        if best is None or gains[k] > best[0]:  # strict > keeps lowest feature
            best = (float(gains[k]), j, float(threshold))
    if best is None:
        return None
    gain, feature, threshold = best
    return feature, threshold, gain


def _grow(X, y, depth, max_depth, min_samples_split, min_samples_leaf):
    n = y.size
    n_one = int(y.sum())
    node = TreeNode(n_node=n, counts=(n - n_one, n_one),
                    impurity=_entropy_bits(n_one, n).item())
    if (depth >= max_depth or n < min_samples_split
            or n_one == 0 or n_one == n):
        return node
    found = _best_split(X, y, min_samples_leaf)
    if found is None:
        return node
    feature, threshold, gain = found
    mask = X[:, feature] <= threshold
    node.feature, node.threshold, node.gain = feature, threshold, gain
    node.left = _grow(X[mask], y[mask], depth + 1,
                      max_depth, min_samples_split, min_samples_leaf)
    node.right = _grow(X[~mask], y[~mask], depth + 1,
                       max_depth, min_samples_split, min_samples_leaf)
    return node


def compute_importances(root, n_features):
    """Gain-weighted feature importances of a grown tree, summing to 1.

    Each internal node contributes (n_node / n_root) * gain to its split
    feature. A tree with no splits yields all zeros.
    """
    raw = np.zeros(n_features)
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            continue
        raw[node.feature] += node.n_node / root.n_node * node.gain
        stack.extend((node.left, node.right))
    total = raw.sum()
    return raw / total if total > 0 else raw


class EntropyTreeClassifier(ClassifierMixin, BaseEstimator):
    """Depth-limited CART-style tree for binary targets, entropy criterion.

    Parameters mirror the usual learner conventions. `random_state` is
    accepted for interface parity but the induction is fully deterministic,
    so it has no effect.
    """

    def __init__(self, max_depth=5, min_samples_split=15, min_samples_leaf=10,
                 random_state=42):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        if not np.isin(y, (0, 1)).all():
            raise ValueError("y must contain only 0 and 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.min_samples_leaf < 1 or self.min_samples_split < 2:
            raise ValueError("min_samples_leaf >= 1 and min_samples_split >= 2 required")
        y = y.astype(np.int64)
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]
        self.tree_ = _grow(X, y, 0, self.max_depth,
                           self.min_samples_split, self.min_samples_leaf)
        self.feature_importances_ = compute_importances(self.tree_, self.n_features_in_)
        return self

    def _leaf_for(self, x):
        node = self.tree_
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def predict_proba(self, X):
        check_is_fitted(self, "tree_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        p1 = np.array([self._leaf_for(row).proba for row in X])
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)

    def depth(self):
        """Actual depth of the grown tree (a lone leaf has depth 0)."""
        check_is_fitted(self, "tree_")

        def walk(node):
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.tree_)
