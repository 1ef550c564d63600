import json
import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from lvresilience.io import csv_text, fmt_number, json_text, output_path


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_csv_numbers_roundtrip(v):
    assert float(fmt_number(v)) == v


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_json_roundtrip(v):
    assert json.loads(json_text({"v": v}))["v"] == v


def test_json_shortest_repr():
    assert '"A": 0.3333333333333333' in json_text({"A": 1 / 3})
    assert json.loads(json_text({"a": np.float64(0.1), "b": np.arange(2), "c": math.inf})) == \
        {"a": 0.1, "b": [0, 1], "c": None}


def test_csv_layout():
    text = csv_text(("x", "label"), [(0.1, "NativeWins"), (np.int8(2), "x")])
    assert text == "x,label\n0.10000000000000001,NativeWins\n2,x\n"


def test_output_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv("LVRES_OUTPUT_DIR", str(tmp_path))
    assert output_path("a.csv") == tmp_path / "a.csv"
    assert output_path("/abs/a.csv").is_absolute()
