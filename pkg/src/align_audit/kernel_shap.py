"""Shapley-value feature attribution for black-box models.

Two routes to the same quantity live here on purpose. `exact_shapley`
walks every coalition with the permutation weights and serves as the
ground truth; :class:`KernelShapExplainer` reaches the value through a
weighted least-squares fit over coalitions and is the one the pipeline
runs. On small feature counts the explainer enumerates every coalition and
must match the exact route to solver precision.

Absent features are integrated out against a background sample: a
coalition's value is the model's mean output over rows that keep the
explained instance's values on coalition features and borrow everything
else from the background.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

#: Environment variable capping the explainer's thread fan-out.
THREADS_ENV_VAR = "ALIGN_AUDIT_THREADS"


def thread_budget():
    """Worker count for batch explanation: the env override or 1."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV_VAR} must be at least 1")
    return n


def shapley_kernel_weight(p, s):
    """Kernel regression weight of a size-s coalition among p features.

    Defined for 1 <= s <= p-1; the empty and full coalitions carry infinite
    weight and enter the regression as hard constraints instead.
    """
    if p < 2:
        raise ValueError("need at least two features for coalition weights")
    if not 1 <= s <= p - 1:
        raise ValueError(f"coalition size {s} out of range for {p} features")
    return (p - 1) / (math.comb(p, s) * s * (p - s))


def _masks_from_ints(subsets, p):
    """Boolean (k, p) mask matrix from integer bitset encodings."""
    subsets = np.asarray(subsets, dtype=np.uint64)
    bits = (subsets[:, None] >> np.arange(p, dtype=np.uint64)) & np.uint64(1)
    return bits.astype(bool)


def _coalition_values(model_fn, x, masks, background, chunk_size=64):
    """Background-averaged model output for each coalition mask.

    Hybrid rows take the explained instance where the mask is on and the
    background row elsewhere. Evaluation is chunked so the model sees
    moderately sized matrices.
    """
    n_bg = background.shape[0]
    values = np.empty(masks.shape[0])
    for start in range(0, masks.shape[0], chunk_size):
        chunk = masks[start : start + chunk_size]
        hybrid = np.where(chunk[:, None, :], x[None, None, :], background[None, :, :])
        out = np.asarray(model_fn(hybrid.reshape(-1, x.size)), dtype=float)
        if out.shape != (chunk.shape[0] * n_bg,):
            raise ValueError("model_fn must return one value per input row")
        values[start : start + chunk.shape[0]] = out.reshape(chunk.shape[0], n_bg).mean(axis=1)
    return values


def masked_prediction(model_fn, x, coalition, background):
    """Value of a single coalition, mainly for tests and inspection."""
    x = np.asarray(x, dtype=float)
    mask = np.zeros((1, x.size), dtype=bool)
    mask[0, list(coalition)] = True
    return float(_coalition_values(model_fn, x, mask, np.asarray(background, dtype=float))[0])


def exact_shapley(model_fn, x, background, max_features=12):
    """Shapley values by direct summation over all coalitions.

    Cost grows as 2**p, so anything beyond `max_features` is refused. This
    is the oracle the kernel estimator is held against.
    """
    x = np.asarray(x, dtype=float)
    background = np.asarray(background, dtype=float)
    p = x.size
    if p > max_features:
        raise ValueError(f"{p} features exceeds the exact-enumeration cap {max_features}")
    all_masks = _masks_from_ints(np.arange(2 ** p), p)
    values = _coalition_values(model_fn, x, all_masks, background)

    fact = [math.factorial(k) for k in range(p + 1)]
    phi = np.zeros(p)
    for subset in range(2 ** p):
        s = subset.bit_count()
        for j in range(p):
            if subset >> j & 1:
                continue
            weight = fact[s] * fact[p - s - 1] / fact[p]
            phi[j] += weight * (values[subset | 1 << j] - values[subset])
    return phi


def sample_background(X, size=100, seed=0):
    """Up to `size` distinct rows of X, drawn without replacement."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    take = min(size, n)
    if take < 1:
        raise ValueError("background sample must hold at least one row")
    idx = np.random.default_rng(seed).choice(n, size=take, replace=False)
    return X[idx]


@dataclass(frozen=True)
class ShapConfig:
    """Knobs for the explanation stage, bundled for reporting."""

    background_size: int = 100
    max_exact_features: int = 12
    n_coalitions: int = 2048
    seed: int = 0


@dataclass(frozen=True)
class AttributionMatrix:
    """Per-instance Shapley values plus the shared base value."""

    values: np.ndarray
    base_value: float
    predictions: np.ndarray
    feature_count: int

    def efficiency_gap(self):
        """Max |base + sum(phi) - prediction| across instances."""
        recon = self.base_value + self.values.sum(axis=1)
        return float(np.abs(recon - self.predictions).max())


class KernelShapExplainer:
    """Weighted least-squares Shapley estimator against a fixed background.

    When every non-trivial coalition fits within `n_coalitions` the design
    is enumerated fully and the estimate is exact up to solver precision.
    Larger feature spaces fall back to sampling coalition sizes by their
    total kernel mass and drawing subsets uniformly within a size.

    The per-instance subset draw is seeded identically for every instance,
    so explanations are deterministic and independent of evaluation order
    or thread count.
    """

    def __init__(self, model_fn, background, *, n_coalitions=2048, seed=0):
        background = np.asarray(background, dtype=float)
        if background.ndim != 2 or background.shape[0] < 1:
            raise ValueError("background must be a non-empty 2-d matrix")
        self.model_fn = model_fn
        self.background = background
        self.n_coalitions = int(n_coalitions)
        self.seed = seed
        self.n_features = background.shape[1]
        if self.n_features > 64:
            raise ValueError("coalition bitsets support at most 64 features")
        if self.n_coalitions < self.n_features + 2:
            raise ValueError("n_coalitions must be at least n_features + 2")
        self.base_value_ = float(
            np.asarray(model_fn(background), dtype=float).mean()
        )

    def _subset_ints(self, p):
        """Integer encodings of the coalitions entering the regression."""
        total = 2 ** p - 2
        if total <= self.n_coalitions:
            return np.arange(1, 2 ** p - 1, dtype=np.uint64)
        rng = np.random.default_rng(self.seed)
        sizes = np.arange(1, p)
        mass = (p - 1) / (sizes * (p - sizes))
        mass = mass / mass.sum()
        chosen = set()
        attempts = 0
        while len(chosen) < self.n_coalitions and attempts < 200:
            draw = rng.choice(sizes, size=self.n_coalitions, p=mass)
            for s in draw:
                members = rng.choice(p, size=int(s), replace=False)
                chosen.add(sum(1 << int(m) for m in members))
                if len(chosen) >= self.n_coalitions:
                    break
            attempts += 1
        return np.fromiter(sorted(chosen), dtype=np.uint64)

    def explain_instance(self, x):
        """Shapley values and base value for one instance."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise ValueError(f"instance must have {self.n_features} features")
        p = self.n_features
        full = float(
            np.asarray(self.model_fn(x[None, :]), dtype=float)[0]
        )
        delta = full - self.base_value_
        if p == 1:
            return np.array([delta]), self.base_value_

        subsets = self._subset_ints(p)
        Z = _masks_from_ints(subsets, p).astype(float)
        v = _coalition_values(self.model_fn, x, Z.astype(bool), self.background)
        sizes = Z.sum(axis=1).astype(int)
        w = np.array([shapley_kernel_weight(p, s) for s in sizes])

        # Eliminate the last coefficient through the efficiency constraint
        # sum(phi) = full - base, then solve the reduced weighted system.
        y = v - self.base_value_ - Z[:, -1] * delta
        A = Z[:, :-1] - Z[:, [-1]]
        sw = np.sqrt(w)
        coef, _, rank, _ = np.linalg.lstsq(A * sw[:, None], y * sw, rcond=None)
        if rank < p - 1:
            raise ValueError(
                "coalition design is rank-deficient; increase n_coalitions"
            )
        phi = np.append(coef, delta - coef.sum())
        return phi, self.base_value_

    def explain(self, X, max_workers=None):
        """Attributions for every row of X.

        `max_workers` defaults to the `ALIGN_AUDIT_THREADS` environment
        override (or 1). Threads only help when model_fn releases the GIL,
        as numpy-backed models do.
        """
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"X must be 2-d with {self.n_features} columns")
        workers = thread_budget() if max_workers is None else max_workers
        rows = list(X)
        if workers <= 1 or len(rows) < 2:
            results = [self.explain_instance(row) for row in rows]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(self.explain_instance, rows))
        values = np.vstack([phi for phi, _ in results])
        preds = np.asarray(self.model_fn(X), dtype=float)
        return AttributionMatrix(
            values=values,
            base_value=self.base_value_,
            predictions=preds,
            feature_count=self.n_features,
        )


def aggregate_importance(attributions):
    """Global importance per feature: mean |phi|, normalized to sum 1.

    A model that attributes nothing anywhere yields the uniform vector,
    with a warning, so downstream ranking still has something to chew on.
    """
    values = np.asarray(attributions.values, dtype=float)
    if values.ndim != 2 or values.shape[0] == 0:
        raise ValueError("need at least one explained instance")
    raw = np.abs(values).mean(axis=0)
    total = raw.sum()
    if total == 0.0:
        warnings.warn("all attributions are zero; reporting uniform importance")
        return np.full(values.shape[1], 1.0 / values.shape[1])
    return raw / total
