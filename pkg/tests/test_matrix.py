"""Feature-matrix CSV round trips, validation, and label files."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from humor_engine import (
    FeatureMatrix,
    MatrixFormatError,
    read_feature_matrix,
    read_labels,
    write_feature_matrix,
    write_labels,
)


def small_matrix():
    return FeatureMatrix(
        feature_names=("a__abs_energy", "b__max_change"),
        ids=("r1", "r2", "r3"),
        labels=(1, 0, None),
        values=np.array([[1.5, 0.25], [np.nan, 2.0], [0.1, np.nan]]),
    )


def test_round_trip(tmp_path):
    path = tmp_path / "m.csv"
    matrix = small_matrix()
    write_feature_matrix(matrix, path)
    assert read_feature_matrix(path) == matrix


def test_write_read_write_is_byte_identical(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_feature_matrix(small_matrix(), p1)
    write_feature_matrix(read_feature_matrix(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_shape(tmp_path):
    path = tmp_path / "m.csv"
    write_feature_matrix(small_matrix(), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "id,label,a__abs_energy,b__max_change"
    assert lines[1] == "r1,1,1.5,0.25"
    assert lines[2] == "r2,0,,2.0"
    assert lines[3] == "r3,,0.1,"


def test_column_lookup():
    matrix = small_matrix()
    np.testing.assert_array_equal(
        matrix.column("b__max_change"), np.array([0.25, 2.0, np.nan])
    )
    with pytest.raises(MatrixFormatError, match="no feature"):
        matrix.column("missing__one")


@pytest.mark.parametrize(
    "kwargs,fragment",
    [
        (dict(ids=("r1",)), "value rows"),
        (dict(feature_names=("only_one",)), "value columns"),
        (dict(feature_names=("dup", "dup")), "duplicate feature names"),
        (dict(ids=("r", "r", "r")), "duplicate instance ids"),
        (dict(labels=(1, 2, None)), "labels must be 0, 1, or None"),
        (dict(labels=(True, 0, None)), "labels must be 0, 1, or None"),
    ],
)
def test_matrix_validation(kwargs, fragment):
    base = dict(
        feature_names=("a__abs_energy", "b__max_change"),
        ids=("r1", "r2", "r3"),
        labels=(1, 0, None),
        values=np.zeros((3, 2)),
    )
    base.update(kwargs)
    with pytest.raises(MatrixFormatError, match=fragment):
        FeatureMatrix(**base)


def test_infinite_values_rejected():
    with pytest.raises(MatrixFormatError, match="finite or NaN"):
        FeatureMatrix(
            feature_names=("f",),
            ids=("r",),
            labels=(1,),
            values=np.array([[np.inf]]),
        )


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "empty file"),
        ("x,y,f\n", "header must start with 'id,label'"),
        ("id,label,f\nr1,1\n", "expected 3 cells"),
        ("id,label,f\nr1,7,0.5\n", "label must be"),
        ("id,label,f\nr1,1,spam\n", "non-numeric cell"),
        ("id,label,f\nr1,1,inf\n", "non-finite value"),
        ("id,label,f\nr1,1,0.5\nr1,0,0.2\n", "duplicate instance ids"),
    ],
)
def test_read_rejects_malformed(tmp_path, text, fragment):
    path = tmp_path / "bad.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(MatrixFormatError, match=fragment):
        read_feature_matrix(path)


def test_empty_matrix_round_trip(tmp_path):
    matrix = FeatureMatrix(
        feature_names=("f",), ids=(), labels=(), values=np.empty((0, 1))
    )
    path = tmp_path / "empty.csv"
    write_feature_matrix(matrix, path)
    back = read_feature_matrix(path)
    assert back == matrix
    assert back.n_rows == 0


# ---------------------------------------------------------------------------
# label files


def test_labels_round_trip(tmp_path):
    path = tmp_path / "labels.csv"
    labels = {"r1": 1, "r2": 0}
    write_labels(labels, path)
    assert read_labels(path) == labels
    assert path.read_text() == "id,label\nr1,1\nr2,0\n"


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "empty file"),
        ("id,tag\n", "header must be 'id,label'"),
        ("id,label\nr1\n", "expected 2 cells"),
        ("id,label\n,1\n", "empty id"),
        ("id,label\nr1,1\nr1,0\n", "duplicate id"),
        ("id,label\nr1,yes\n", "label must be 0 or 1"),
    ],
)
def test_read_labels_rejects(tmp_path, text, fragment):
    path = tmp_path / "bad.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(MatrixFormatError, match=fragment):
        read_labels(path)


# ---------------------------------------------------------------------------
# property: random matrices survive the CSV cycle

cells = st.one_of(
    st.just(float("nan")),
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
)


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_round_trip_property(tmp_path_factory, data):
    n = data.draw(st.integers(min_value=0, max_value=6))
    d = data.draw(st.integers(min_value=1, max_value=4))
    matrix = FeatureMatrix(
        feature_names=tuple(f"f{j}" for j in range(d)),
        ids=tuple(f"r{i}" for i in range(n)),
        labels=tuple(
            data.draw(st.sampled_from([0, 1, None]), label=f"label{i}")
            for i in range(n)
        ),
        values=np.array(
            [[data.draw(cells) for _ in range(d)] for _ in range(n)]
        ).reshape(n, d),
    )
    path = tmp_path_factory.mktemp("matrix") / "m.csv"
    write_feature_matrix(matrix, path)
    assert read_feature_matrix(path) == matrix
