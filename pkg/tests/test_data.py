import math

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from align_audit import (Dataset, Standardizer, build_schema, encode, impute,
                         load_csv, standardize, train_test_split)
from align_audit.data import (CATEGORICAL, NUMERIC, encoding_summary,
                              _parse_number)

from conftest import write_text


# -- parsing ----------------------------------------------------------------

def test_parse_number_accepts_finite_floats():
    assert _parse_number("3.5") == 3.5
    assert _parse_number("-2") == -2.0
    assert _parse_number("1e3") == 1000.0


def test_parse_number_rejects_text_and_non_finite():
    assert _parse_number("abc") is None
    assert _parse_number("inf") is None
    assert _parse_number("nan") is None


def test_load_csv_detects_kinds_and_missing(tmp_path):
    path = write_text(tmp_path / "t.csv",
                      "a,b,y\n1,red,0\n2,,1\nNA,blue,0\n")
    table = load_csv(path, "y")
    assert table.row_count == 3
    assert table.kind("a") == NUMERIC
    assert table.column("a") == [1.0, 2.0, None]
    assert table.kind("b") == CATEGORICAL
    assert table.column("b") == ["red", None, "blue"]


def test_load_csv_respects_custom_missing_tokens(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n?,0\n2,1\n")
    table = load_csv(path, "y", missing_tokens=("?",))
    assert table.column("a") == [None, 2.0]
    # with default tokens the "?" is just text, so the column is categorical
    table2 = load_csv(path, "y")
    assert table2.kind("a") == CATEGORICAL


def test_load_csv_handles_quoted_commas_and_bom(tmp_path):
    raw = '﻿name,y\n"Smith, Ada",1\n"Jones, Bo",0\n'
    path = tmp_path / "t.csv"
    path.write_text(raw, encoding="utf-8")
    table = load_csv(str(path), "y")
    assert table.column_names[0] == "name"
    assert table.column("name") == ["Smith, Ada", "Jones, Bo"]


def test_load_csv_skips_blank_lines(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n1,0\n\n2,1\n")
    assert load_csv(path, "y").row_count == 2


def test_load_csv_reports_ragged_row_with_line_number(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,b,y\n1,2,0\n1,2\n")
    with pytest.raises(ValueError, match=":3:"):
        load_csv(path, "y")


def test_load_csv_rejects_degenerate_files(tmp_path):
    empty = write_text(tmp_path / "e.csv", "")
    with pytest.raises(ValueError, match="empty file"):
        load_csv(empty, "y")
    headers_only = write_text(tmp_path / "h.csv", "a,y\n")
    with pytest.raises(ValueError, match="no data rows"):
        load_csv(headers_only, "y")
    no_target = write_text(tmp_path / "n.csv", "a,b\n1,2\n")
    with pytest.raises(ValueError, match="target column"):
        load_csv(no_target, "y")
    dupe = write_text(tmp_path / "d.csv", "a,a,y\n1,2,0\n")
    with pytest.raises(ValueError, match="duplicate header"):
        load_csv(dupe, "y")


def test_load_csv_all_missing_column_counts_as_numeric(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n,0\nNA,1\n")
    assert load_csv(path, "y").kind("a") == NUMERIC


def test_raw_table_select_reorders_and_validates(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,b,y\n1,x,0\n2,z,1\n")
    table = load_csv(path, "y").select(["b", "y"])
    assert table.column_names == ["b", "y"]
    with pytest.raises(ValueError, match="unknown columns"):
        load_csv(path, "y").select(["nope"])


# -- schema -----------------------------------------------------------------

def test_build_schema_forces_target_categorical(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n1,0\n2,1\n")
    schema = build_schema(load_csv(path, "y"), "y")
    assert schema.kinds["y"] == CATEGORICAL
    assert schema.levels["y"] == [0.0, 1.0]


def test_build_schema_rejects_non_binary_target(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n1,0\n2,1\n3,2\n")
    with pytest.raises(ValueError, match="expected 2"):
        build_schema(load_csv(path, "y"), "y")
    const = write_text(tmp_path / "c.csv", "a,y\n1,0\n2,0\n")
    with pytest.raises(ValueError, match="expected 2"):
        build_schema(load_csv(const, "y"), "y")


def test_build_schema_rejects_missing_labels(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n1,0\n2,\n3,1\n")
    with pytest.raises(ValueError, match="missing values"):
        build_schema(load_csv(path, "y"), "y")


def test_levels_keep_first_appearance_order(tmp_path):
    path = write_text(tmp_path / "t.csv", "c,y\nzeta,0\nalpha,1\nzeta,0\n")
    schema = build_schema(load_csv(path, "y"), "y")
    assert schema.levels["c"] == ["zeta", "alpha"]


# -- imputation ---------------------------------------------------------------

def test_impute_numeric_median(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n1,0\n,1\n3,0\n10,1\n")
    table = load_csv(path, "y")
    schema = build_schema(table, "y")
    filled = impute(table, schema)
    assert filled.column("a") == [1.0, 3.0, 3.0, 10.0]


def test_impute_mode_breaks_ties_by_first_appearance(tmp_path):
    path = write_text(tmp_path / "t.csv",
                      "c,y\nblue,0\nred,1\nred,0\nblue,1\n,0\n,1\n")
    table = load_csv(path, "y")
    filled = impute(table, build_schema(table, "y"))
    # red and blue tie at two apiece; blue appeared first
    assert filled.column("c") == ["blue", "red", "red", "blue", "blue", "blue"]


def test_impute_refuses_fully_missing_column(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n,0\n,1\n")
    table = load_csv(path, "y")
    with pytest.raises(ValueError, match="entirely missing"):
        impute(table, build_schema(table, "y"))


def test_impute_leaves_complete_columns_alone(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n1,0\n2,1\n")
    table = load_csv(path, "y")
    filled = impute(table, build_schema(table, "y"))
    assert filled.column("a") is table.column("a")


# -- encoding -----------------------------------------------------------------

def _encoded(tmp_path, text):
    path = write_text(tmp_path / "t.csv", text)
    table = load_csv(path, "y")
    schema = build_schema(table, "y")
    return encode(impute(table, schema), schema), schema


def test_encode_binary_categorical_first_level_is_one(tmp_path):
    data, _ = _encoded(tmp_path, "sex,y\nmale,0\nfemale,1\nfemale,1\n")
    assert data.feature_names == ["sex"]
    # "female" sorts before "male", so female rows carry 1
    assert data.X[:, 0].tolist() == [0.0, 1.0, 1.0]


def test_encode_one_hot_for_three_levels(tmp_path):
    data, _ = _encoded(tmp_path, "port,y\nS,0\nC,1\nQ,0\nC,1\n")
    assert data.feature_names == ["port=C", "port=Q", "port=S"]
    assert data.X.tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0], [1, 0, 0]]


def test_encode_single_level_becomes_constant_with_warning(tmp_path):
    path = write_text(tmp_path / "t.csv", "c,a,y\nonly,1,0\nonly,2,1\n")
    table = load_csv(path, "y")
    schema = build_schema(table, "y")
    with pytest.warns(UserWarning, match="single level"):
        data = encode(table, schema)
    assert data.X[:, 0].tolist() == [1.0, 1.0]


def test_encode_numeric_passthrough_and_target_mapping(tmp_path):
    data, schema = _encoded(tmp_path, "a,y\n1.5,no\n2.5,yes\n")
    assert data.X[:, 0].tolist() == [1.5, 2.5]
    # "no" sorts first and codes as 0
    assert data.y.tolist() == [0, 1]
    summary = encoding_summary(schema)
    assert summary["target"]["mapping"] == {"no": 0, "yes": 1}


def test_encode_requires_imputed_table(tmp_path):
    path = write_text(tmp_path / "t.csv", "a,y\n1,0\n,1\n")
    table = load_csv(path, "y")
    schema = build_schema(table, "y")
    with pytest.raises(ValueError, match="impute first"):
        encode(table, schema)


def test_encoding_summary_covers_every_categorical(tmp_path):
    _, schema = _encoded(
        tmp_path, "sex,port,a,y\nm,S,1,0\nf,C,2,1\nf,Q,3,1\n")
    summary = encoding_summary(schema)
    assert summary["binary"]["sex"] == {"f": 1, "m": 0}
    assert summary["indicator"]["port"] == ["C", "Q", "S"]
    assert summary["target"]["mapping"] == {"0": 0, "1": 1}


# -- dataset and split ---------------------------------------------------------

def test_dataset_validation():
    with pytest.raises(ValueError, match="non-finite"):
        Dataset(np.array([[np.nan]]), ["a"], np.array([0]))
    with pytest.raises(ValueError, match="0 and 1"):
        Dataset(np.array([[1.0]]), ["a"], np.array([2]))
    with pytest.raises(ValueError, match="feature_names"):
        Dataset(np.ones((2, 2)), ["a"], np.array([0, 1]))


def test_split_sizes_round_half_up():
    data = Dataset(np.arange(891, dtype=float)[:, None], ["a"],
                   np.tile([0, 1], 446)[:891])
    train, test = train_test_split(data, 0.2, seed=42)
    assert test.n_rows == 178
    assert train.n_rows == 713

    small = Dataset(np.arange(10, dtype=float)[:, None], ["a"],
                    np.tile([0, 1], 5))
    _, small_test = train_test_split(small, 0.25, seed=0)
    assert small_test.n_rows == 3


def test_split_is_disjoint_exhaustive_and_seeded():
    data = Dataset(np.arange(50, dtype=float)[:, None], ["a"],
                   np.tile([0, 1], 25))
    train, test = train_test_split(data, 0.2, seed=7)
    again_train, again_test = train_test_split(data, 0.2, seed=7)
    assert np.array_equal(train.X, again_train.X)
    assert np.array_equal(test.X, again_test.X)
    merged = np.sort(np.concatenate([train.X[:, 0], test.X[:, 0]]))
    assert np.array_equal(merged, np.arange(50, dtype=float))

    other_train, _ = train_test_split(data, 0.2, seed=8)
    assert not np.array_equal(train.X, other_train.X)


def test_split_rejects_empty_partitions():
    data = Dataset(np.arange(4, dtype=float)[:, None], ["a"],
                   np.array([0, 1, 0, 1]))
    with pytest.raises(ValueError):
        train_test_split(data, 0.01, seed=0)
    with pytest.raises(ValueError):
        train_test_split(data, 0.99, seed=0)
    with pytest.raises(ValueError):
        train_test_split(data, 1.5, seed=0)


# -- standardization ------------------------------------------------------------

def test_standardizer_uses_population_std():
    X = np.array([[1.0], [2.0], [3.0]])
    out = Standardizer().fit(X).transform(X)
    expected = [-1.2247, 0.0, 1.2247]
    assert np.allclose(out[:, 0], expected, atol=1e-4)


def test_standardizer_flags_constant_features():
    X = np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]])
    scaler = Standardizer().fit(X)
    assert scaler.constant_mask_.tolist() == [True, False]
    out = scaler.transform(X)
    assert np.all(out[:, 0] == 0.0)


def test_standardizer_inverse_roundtrip():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(20, 4)) * 7 + 3
    scaler = Standardizer().fit(X)
    assert np.allclose(scaler.inverse_transform(scaler.transform(X)), X)


def test_standardizer_guards():
    with pytest.raises(NotFittedError):
        Standardizer().transform(np.ones((2, 2)))
    scaler = Standardizer().fit(np.ones((3, 2)))
    with pytest.raises(ValueError, match="expected 2 features"):
        scaler.transform(np.ones((3, 5)))


def test_standardize_applies_train_statistics_to_test():
    train = Dataset(np.array([[0.0], [2.0]]), ["a"], np.array([0, 1]))
    test = Dataset(np.array([[4.0]]), ["a"], np.array([1]))
    train_s, test_s, scaler = standardize(train, test)
    assert np.allclose(train_s.X[:, 0], [-1.0, 1.0])
    assert np.allclose(test_s.X[:, 0], [3.0])
    assert scaler.mean_[0] == 1.0
