"""Standardized mean differences between outcome groups, feature by feature.

The effect size used throughout is the difference of the two group means
divided by the pooled standard deviation. Features are ranked by the
magnitude of that quantity, so a strongly negative effect matters as much
as a strongly positive one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alignment import to_ranks


@dataclass(frozen=True)
class GroupStats:
    """Per-group sample moments of one feature, split by the binary label."""

    feature: str
    n_pos: int
    n_neg: int
    mean_pos: float
    mean_neg: float
    var_pos: float
    var_neg: float

    @property
    def degenerate(self):
        """True when a group is too small to carry a sample variance."""
        return self.n_pos < 2 or self.n_neg < 2


def group_stats(data, feature_index):
    """Sample mean and variance (ddof 1) of one feature in each label group.

    A single-row group gets variance 0 and is flagged degenerate through
    the returned record. An empty group raises, since a mean difference
    needs both groups populated.
    """
    x = data.X[:, feature_index]
    pos, neg = x[data.y == 1], x[data.y == 0]
    if pos.size == 0 or neg.size == 0:
        raise ValueError(
            f"feature {data.feature_names[feature_index]!r}: one outcome group is empty"
        )
    return GroupStats(
        feature=data.feature_names[feature_index],
        n_pos=int(pos.size),
        n_neg=int(neg.size),
        mean_pos=float(pos.mean()),
        mean_neg=float(neg.mean()),
        var_pos=float(pos.var(ddof=1)) if pos.size > 1 else 0.0,
        var_neg=float(neg.var(ddof=1)) if neg.size > 1 else 0.0,
    )


def pooled_std(n_pos, var_pos, n_neg, var_neg):
    """Pooled standard deviation of two groups with sample variances.

    Weights each variance by its degrees of freedom and divides by the
    total, n_pos + n_neg - 2, so both groups together must hold at least
    three rows.
    """
    if n_pos < 1 or n_neg < 1:
        raise ValueError("both groups must be non-empty")
    if n_pos + n_neg < 3:
        raise ValueError("pooled std needs at least three rows across the groups")
    pooled_var = ((n_pos - 1) * var_pos + (n_neg - 1) * var_neg) / (n_pos + n_neg - 2)
    return math.sqrt(pooled_var)


def _single_smd(stats):
    """Effect size for one feature; +-inf marks a degenerate separator.

    A zero pooled spread with equal means is a constant feature (effect 0);
    with unequal means the groups are perfectly separated and the effect is
    signed infinity, which ranks ahead of every finite value.
    """
    sp = pooled_std(stats.n_pos, stats.var_pos, stats.n_neg, stats.var_neg)
    diff = stats.mean_pos - stats.mean_neg
    if sp == 0.0:
        return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    return diff / sp


@dataclass(frozen=True)
class EffectSizeTable:
    """All per-feature effect sizes for a dataset, in original feature order."""

    feature_names: list[str]
    stats: list[GroupStats]
    pooled_std: np.ndarray
    smd: np.ndarray
    abs_smd: np.ndarray
    ranks: np.ndarray

    def by_magnitude(self):
        """(name, smd, rank) triples sorted from largest |smd| down."""
        order = np.argsort(self.ranks, kind="stable")
        return [(self.feature_names[i], float(self.smd[i]), float(self.ranks[i]))
                for i in order]

    def rank_of(self, name):
        return float(self.ranks[self.feature_names.index(name)])


def smd(data):
    """Effect sizes of every feature in `data`, ranked by magnitude."""
    stats = [group_stats(data, j) for j in range(data.n_features)]
    sp = np.array([pooled_std(s.n_pos, s.var_pos, s.n_neg, s.var_neg) for s in stats])
    values = np.array([_single_smd(s) for s in stats])
    magnitudes = np.abs(values)
    return EffectSizeTable(
        feature_names=list(data.feature_names),
        stats=stats,
        pooled_std=sp,
        smd=values,
        abs_smd=magnitudes,
        ranks=to_ranks(magnitudes),
    )
