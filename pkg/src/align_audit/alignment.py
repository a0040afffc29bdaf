"""Rank conversion, rank correlation, and the cross-method agreement report."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Agreement labels by correlation magnitude. Bands are half-open on the
#: left: rho must exceed the bound to earn the stronger label.
STRONG_THRESHOLD = 0.7
MODERATE_THRESHOLD = 0.4


def to_ranks(scores):
    """Descending ranks of `scores`, averaging ties.

    The largest score gets rank 1. Equal scores share the mean of the ranks
    they occupy, so (5, 3, 3, 1) ranks as (1, 2.5, 2.5, 4). Positive
    infinity is allowed and sorts first; NaN and negative infinity are
    rejected because their order is meaningless here.
    """
    s = np.asarray(scores, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("scores must be a non-empty 1-d array")
    if np.isnan(s).any() or np.isneginf(s).any():
        raise ValueError("scores must not contain NaN or -inf")
    order = np.argsort(-s, kind="stable")
    ranks = np.empty(s.size, dtype=float)
    i = 0
    while i < s.size:
        j = i
        while j + 1 < s.size and s[order[j + 1]] == s[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1  # mean of positions i..j, 1-based
        i = j + 1
    return ranks


def _pearson_of_ranks(ra, rb):
    if ra.size != rb.size:
        raise ValueError("rank vectors must have equal length")
    if ra.size < 2:
        raise ValueError("need at least two entries to correlate")
    da, db = ra - ra.mean(), rb - rb.mean()
    denom = np.sqrt((da * da).sum() * (db * db).sum())
    if denom == 0.0:
        raise ValueError("rank correlation is undefined for a constant ranking")
    return float(np.clip((da * db).sum() / denom, -1.0, 1.0))


def spearman_rho(a, b):
    """Spearman correlation of two score vectors via average-tie ranks.

    Computed as the Pearson correlation of the rank vectors, which handles
    ties correctly. Raises ValueError when either rank vector is constant,
    since the correlation is undefined there; callers that want a soft
    failure should catch it rather than read 0 into the result.
    """
    return _pearson_of_ranks(to_ranks(a), to_ranks(b))


def agreement_strength(rho):
    """Verbal label for a correlation: strong, moderate, or weak."""
    if rho is None:
        return "undefined"
    if rho > STRONG_THRESHOLD:
        return "strong"
    if rho > MODERATE_THRESHOLD:
        return "moderate"
    return "weak"


@dataclass(frozen=True)
class Ranking:
    """One method's importance scores with their descending ranks.

    `scores` is what gets reported; ranking may follow a transform of it
    (effect sizes are signed but rank by magnitude).
    """

    method: str
    feature_names: list[str]
    scores: np.ndarray
    ranks: np.ndarray

    def top(self, k=1):
        """Names of the k best-ranked features, best first."""
        order = np.argsort(self.ranks, kind="stable")
        return [self.feature_names[i] for i in order[:k]]


def make_ranking(method, feature_names, scores, rank_by=None):
    """Bundle scores with their ranks; `rank_by` overrides the rank key."""
    scores = np.asarray(scores, dtype=float)
    if len(feature_names) != scores.size:
        raise ValueError("one score per feature name required")
    key = scores if rank_by is None else np.asarray(rank_by, dtype=float)
    if key.size != scores.size:
        raise ValueError("rank_by must match scores in length")
    return Ranking(method, list(feature_names), scores, to_ranks(key))


@dataclass(frozen=True)
class AlignmentReport:
    """Pairwise rank agreement between the data-level ranking and each model."""

    dataset: str
    rankings: dict[str, Ranking]
    rho: dict[str, float | None]
    strength: dict[str, str]
    accuracies: dict[str, float] = field(default_factory=dict)
    config: dict = field(default_factory=dict)


def build_alignment_report(dataset, rankings, accuracies=None, config=None,
                           reference="smd"):
    """Correlate the reference ranking against every other ranking.

    `rankings` maps method name to :class:`Ranking`; all must cover the same
    features in the same order. A correlation that is undefined (constant
    ranks) is reported as None with strength "undefined" rather than raising.
    """
    if reference not in rankings:
        raise ValueError(f"reference ranking {reference!r} missing")
    ref = rankings[reference]
    for r in rankings.values():
        if r.feature_names != ref.feature_names:
            raise ValueError(
                f"ranking {r.method!r} covers different features than {reference!r}"
            )
    rho, strength = {}, {}
    for name, r in rankings.items():
        if name == reference:
            continue
        key = f"{reference}_{name}"
        try:
            value = _pearson_of_ranks(ref.ranks, r.ranks)
        except ValueError:
            value = None
        rho[key] = value
        strength[key] = agreement_strength(value)
    return AlignmentReport(
        dataset=dataset,
        rankings=dict(rankings),
        rho=rho,
        strength=strength,
        accuracies=dict(accuracies or {}),
        config=dict(config or {}),
    )
