import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from evpos.errors import InvalidMatrix, ParseError
from evpos.io import (
    jsonable,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    save_matrix,
    vector_from_json,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_flat_real():
    M = matrix_from_json({"dim": 2, "entries": [1, 2, 3, 4]})
    assert np.array_equal(M, [[1, 2], [3, 4]])


def test_nested_rows_and_complex_pairs():
    M = matrix_from_json({"dim": 2, "entries": [[[1, 1], 0], [0, [2, -1]]]})
    assert M[0, 0] == 1 + 1j and M[1, 1] == 2 - 1j


def test_one_by_one():
    assert matrix_from_json({"dim": 1, "entries": [[3, 0]]})[0, 0] == 3
    assert matrix_from_json({"dim": 1, "entries": [5]})[0, 0] == 5


@pytest.mark.parametrize("bad", [
    {"dim": 2, "entries": [1, 2, 3]},
    {"dim": 2},
    {"dim": 0, "entries": [1]},
    {"dim": 1, "entries": ["x"]},
    {"dim": 1, "entries": [True]},
])
def test_malformed(bad):
    with pytest.raises(ParseError):
        matrix_from_json(bad)


def test_non_finite_is_rejected():
    with pytest.raises((ParseError, InvalidMatrix)):
        matrix_from_json({"dim": 1, "entries": [float("nan")]})


@given(arrays(float, (3, 3), elements=finite), arrays(float, (3, 3), elements=finite))
def test_round_trip_is_bit_identical(re, im):
    for M in (re, re + 1j * im):
        text = json.dumps(matrix_to_json(M))
        back = matrix_from_json(json.loads(text))
        assert np.array_equal(back, M)


def test_file_round_trip(tmp_path):
    M = np.array([[0.1, -2.5], [1e-300, 7.0]])
    path = tmp_path / "m.json"
    save_matrix(path, M)
    assert np.array_equal(load_matrix(path), M)


def test_load_errors(tmp_path):
    with pytest.raises(ParseError):
        load_matrix(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_matrix(bad)


def test_vectors():
    assert np.array_equal(vector_from_json([1, [0, 1]]), [1, 1j])
    with pytest.raises(ParseError):
        vector_from_json([])


def test_jsonable_converts_numpy():
    out = jsonable({"a": np.float64(1.5), "b": np.eye(2), "c": np.array([1, 2]),
                    "d": np.bool_(True), "e": 1 + 2j, "f": float("inf")})
    assert out == {"a": 1.5, "b": {"dim": 2, "entries": [1.0, 0.0, 0.0, 1.0]},
                   "c": [1, 2], "d": True, "e": [1.0, 2.0], "f": None}
    json.dumps(out)
