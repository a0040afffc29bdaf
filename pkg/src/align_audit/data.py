"""CSV ingestion, imputation, categorical encoding, splitting, and scaling.

Everything here is a pure function of its inputs: tables and datasets are
never mutated in place, so all operations are safe to call concurrently.
"""

from __future__ import annotations

import csv
import math
import warnings
from collections import Counter
from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

NUMERIC = "numeric"
CATEGORICAL = "categorical"

#: Cell tokens treated as missing unless the caller overrides them.
DEFAULT_MISSING_TOKENS = ("", "NA")


def _parse_number(cell):
    """The cell as a finite float, or None if it does not parse as one."""
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class RawTable:
    """Column-typed view of a parsed CSV.

    Numeric columns hold ``float | None`` cells and categorical columns hold
    ``str | None`` cells; ``None`` marks a missing value.
    """

    column_names: list[str]
    columns: list[list]
    kinds: list[str]
    row_count: int

    def __post_init__(self):
        if len(set(self.column_names)) != len(self.column_names):
            raise ValueError("column names must be unique")
        for name, col in zip(self.column_names, self.columns):
            if len(col) != self.row_count:
                raise ValueError(
                    f"column {name!r} has {len(col)} cells, expected {self.row_count}"
                )

    def column(self, name):
        return self.columns[self.column_names.index(name)]

    def kind(self, name):
        return self.kinds[self.column_names.index(name)]

    def select(self, names):
        """A new table holding only `names`, in the given order."""
        unknown = [n for n in names if n not in self.column_names]
        if unknown:
            raise ValueError(f"unknown columns: {unknown}")
        idx = [self.column_names.index(n) for n in names]
        return RawTable(
            column_names=[self.column_names[i] for i in idx],
            columns=[self.columns[i] for i in idx],
            kinds=[self.kinds[i] for i in idx],
            row_count=self.row_count,
        )


@dataclass(frozen=True)
class FeatureSchema:
    """Per-column classification plus observed categorical levels.

    `levels` keeps first-appearance order; imputation uses it to break mode
    ties. The target column is always classified as categorical and must
    show exactly two distinct non-missing values.
    """

    target: str
    kinds: dict[str, str]
    levels: dict[str, list]


@dataclass(frozen=True)
class Dataset:
    """Numeric feature matrix with binary labels, the pipeline currency."""

    X: np.ndarray
    feature_names: list[str]
    y: np.ndarray

    def __post_init__(self):
        X, y = np.asarray(self.X), np.asarray(self.y)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d matrix")
        n, p = X.shape
        if n < 1 or p < 1:
            raise ValueError("dataset needs at least one row and one feature")
        if len(self.feature_names) != p:
            raise ValueError("feature_names length must match the number of columns")
        if not np.isfinite(X).all():
            raise ValueError("X contains missing or non-finite values")
        if y.shape != (n,):
            raise ValueError("y must be a vector with one label per row")
        if not np.isin(y, (0, 1)).all():
            raise ValueError("y must contain only 0 and 1")

    @property
    def n_rows(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]

    def take(self, indices):
        """A new dataset holding the given rows, in the given order."""
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.X[idx], self.feature_names, self.y[idx])

    def with_X(self, X):
        return replace(self, X=X)


def load_csv(path, target_name, missing_tokens=DEFAULT_MISSING_TOKENS):
    """Parse an RFC-4180-style CSV with a header row into a RawTable.

    Cells equal to one of `missing_tokens` become missing markers. A column
    is numeric when every non-missing cell parses as a finite real number,
    otherwise it is categorical.

    Raises ValueError for a missing target column, ragged rows, or a file
    with no data rows; a nonexistent path raises the usual OSError.
    """
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:  # blank line
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            rows.append(row)
    if len(set(header)) != len(header):
        raise ValueError(f"{path}: duplicate header names")
    if target_name not in header:
        raise ValueError(f"target column {target_name!r} not found in header")
    if not rows:
        raise ValueError(f"{path}: no data rows")

    tokens = set(missing_tokens)
    columns, kinds = [], []
    for j in range(len(header)):
        raw = [None if row[j] in tokens else row[j] for row in rows]
        if all(_parse_number(c) is not None for c in raw if c is not None):
            columns.append([None if c is None else _parse_number(c) for c in raw])
            kinds.append(NUMERIC)
        else:
            columns.append(raw)
            kinds.append(CATEGORICAL)
    return RawTable(header, columns, kinds, len(rows))


def build_schema(table, target_name):
    """Classify every column of `table` and record categorical levels.

    The target may not have missing cells: inventing labels would poison
    every downstream statistic, so that is the caller's problem to fix.
    """
    if target_name not in table.column_names:
        raise ValueError(f"target column {target_name!r} not in table")
    if any(c is None for c in table.column(target_name)):
        raise ValueError(f"target column {target_name!r} has missing values")
    kinds, levels = {}, {}
    for name, col, detected in zip(table.column_names, table.columns, table.kinds):
        kind = CATEGORICAL if name == target_name else detected
        kinds[name] = kind
        if kind == CATEGORICAL:
            seen = []
            for cell in col:
                if cell is not None and cell not in seen:
                    seen.append(cell)
            levels[name] = seen
    n_target = len(levels[target_name])
    if n_target != 2:
        raise ValueError(
            f"target {target_name!r} has {n_target} distinct values, expected 2"
        )
    return FeatureSchema(target=target_name, kinds=kinds, levels=levels)


def impute(table, schema):
    """Fill missing cells: column median for numerics, column mode for
    categoricals. Mode ties take the first-appearing level.
    """
    out = []
    for name, col in zip(table.column_names, table.columns):
        kind = schema.kinds[name]  # KeyError = schema does not cover the table
        if None not in col:
            out.append(col)
            continue
        present = [c for c in col if c is not None]
        if not present:
            raise ValueError(f"column {name!r} is entirely missing, cannot impute")
        if kind == NUMERIC:
            fill = float(np.median(present))
        else:
            counts = Counter(present)
            top = max(counts.values())
            fill = next(lvl for lvl in schema.levels[name] if counts[lvl] == top)
        out.append([fill if c is None else c for c in col])
    return RawTable(table.column_names, out, table.kinds, table.row_count)


def encode(table, schema):
    """Expand an imputed table into a numeric Dataset.

    Numeric columns pass through. A two-level categorical becomes a single
    0/1 column (the lexicographically first level codes as 1); a k>=3 level
    categorical becomes k indicator columns named ``<col>=<level>`` in
    lexicographic level order. A single-level categorical is emitted as a
    constant column with a warning. The target maps to {0, 1} with the
    lexicographically (or numerically) larger level coding as 1; use
    :func:`encoding_summary` to recover every mapping for reporting.
    """
    for name, col in zip(table.column_names, table.columns):
        if any(c is None for c in col):
            raise ValueError(f"column {name!r} still has missing cells; impute first")

    names, cols = [], []
    for name, col in zip(table.column_names, table.columns):
        if name == schema.target:
            continue
        if schema.kinds[name] == NUMERIC:
            names.append(name)
            cols.append(np.asarray(col, dtype=float))
            continue
        lv = sorted(schema.levels[name])
        if len(lv) == 1:
            warnings.warn(
                f"categorical column {name!r} has a single level; emitting a constant column"
            )
            names.append(name)
            cols.append(np.ones(table.row_count))
        elif len(lv) == 2:
            names.append(name)
            cols.append(np.asarray([1.0 if c == lv[0] else 0.0 for c in col]))
        else:
            for level in lv:
                names.append(f"{name}={level}")
                cols.append(np.asarray([1.0 if c == level else 0.0 for c in col]))
    if not names:
        raise ValueError("no feature columns to encode")

    lv = sorted(schema.levels[schema.target])
    y = np.asarray([0 if c == lv[0] else 1 for c in table.column(schema.target)])
    return Dataset(np.column_stack(cols), names, y)


def _level_key(level):
    """Readable string form of a level (floats drop a trailing `.0`)."""
    if isinstance(level, float) and level.is_integer():
        return str(int(level))
    return str(level)


def encoding_summary(schema):
    """The level-to-number mappings `encode` applies, for report metadata."""
    target_levels = sorted(schema.levels[schema.target])
    info = {
        "target": {
            "column": schema.target,
            "mapping": {_level_key(target_levels[0]): 0, _level_key(target_levels[1]): 1},
        },
        "binary": {},
        "indicator": {},
        "constant": [],
    }
    for name, kind in schema.kinds.items():
        if name == schema.target or kind != CATEGORICAL:
            continue
        lv = sorted(schema.levels[name])
        if len(lv) == 1:
            info["constant"].append(name)
        elif len(lv) == 2:
            info["binary"][name] = {_level_key(lv[0]): 1, _level_key(lv[1]): 0}
        else:
            info["indicator"][name] = [_level_key(l) for l in lv]
    return info


def train_test_split(data, test_fraction=0.2, seed=42):
    """Split rows into disjoint train/test parts by a seeded permutation.

    The last ``round(n * test_fraction)`` rows of the permuted order (round
    half up) form the test set. Deterministic for a fixed seed.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie strictly between 0 and 1")
    n = data.n_rows
    n_test = int(math.floor(n * test_fraction + 0.5))
    if n_test < 1:
        raise ValueError("test partition is empty; increase test_fraction")
    if n_test >= n:
        raise ValueError("train partition is empty; decrease test_fraction")
    perm = np.random.default_rng(seed).permutation(n)
    return data.take(perm[: n - n_test]), data.take(perm[n - n_test :])


class Standardizer(TransformerMixin, BaseEstimator):
    """Z-scores features by training-set mean and population (divisor n) std.

    Constant features (std 0) are centered and left at zero rather than
    divided; `constant_mask_` flags them.
    """

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        self.mean_ = X.mean(axis=0)
        self.std_ = X.std(axis=0)
        self.constant_mask_ = self.std_ == 0.0
        self.scale_ = np.where(self.constant_mask_, 1.0, self.std_)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return (X - self.mean_) / self.scale_

    def inverse_transform(self, X):
        check_is_fitted(self, "mean_")
        X = check_array(X, dtype=np.float64)
        return X * self.scale_ + self.mean_


def standardize(train, test):
    """Scale train and test datasets with train-set statistics.

    Returns the transformed datasets and the fitted :class:`Standardizer`
    carrying the scaling parameters.
    """
    scaler = Standardizer().fit(train.X)
    return train.with_X(scaler.transform(train.X)), test.with_X(scaler.transform(test.X)), scaler
