"""Tests for the `output_formatters` module."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from FrameLab.builtin_frames import riesz_perturbed
from FrameLab.frames import Frame
from FrameLab.output_formatters import (
    dumps,
    format_csv,
    format_float,
    frame_from_dict,
    frame_to_dict,
    seqvec_from_list,
    to_plain,
    write_csv,
    write_json,
)
from FrameLab.schemas import Verdict
from FrameLab.seqspace import SeqVec
from FrameLab.utils.exceptions import FrameError


@pytest.mark.parametrize(
    "value, expected",
    [
        (1.0, "1.0"),
        (0.5, "0.5"),
        (-3.0, "-3.0"),
        (1e-20, "9.9999999999999995e-21"),
        (math.inf, "null"),
        (math.nan, "null"),
    ],
)
def test_format_float(value: float, expected: str) -> None:
    assert format_float(value) == expected


def test_format_float_round_trips() -> None:
    for value in (0.1, 1 / 3, math.pi * 1e12, 2.0**-60):
        assert float(format_float(value)) == value


def test_to_plain_converts_numerical_types() -> None:
    plain = to_plain(
        {
            "int": np.int64(3),
            "flag": np.bool_(True),
            "z": 1 - 2j,
            "array": np.array([0.5, 1.5]),
            "vector": SeqVec.basis(2, 3.0),
            "path": Path("out"),
            "verdict": Verdict(name="n", invariant="i", passed=False),
        }
    )
    assert plain == {
        "int": 3,
        "flag": True,
        "z": [1.0, -2.0],
        "array": [0.5, 1.5],
        "vector": [[2, 3.0, 0.0]],
        "path": "out",
        "verdict": {"name": "n", "invariant": "i", "passed": False, "detail": ""},
    }


def test_dumps_is_deterministic_valid_json() -> None:
    value = {"b": [1, 2.5, None], "a": {"nested": [{"x": math.inf}]}, "empty": []}
    text = dumps(value)
    assert text == dumps(value)
    assert text.endswith("\n")
    # insertion order is kept
    assert text.index('"b"') < text.index('"a"')
    assert json.loads(text) == {"b": [1, 2.5, None], "a": {"nested": [{"x": None}]}, "empty": []}


def test_dumps_rejects_unknown_objects() -> None:
    with pytest.raises(TypeError, match="cannot serialize"):
        dumps({"x": object()})


def test_frame_dict_round_trip() -> None:
    frame = riesz_perturbed(4, 0.5)
    restored = frame_from_dict(json.loads(dumps(frame_to_dict(frame))))
    assert restored.elements == frame.elements
    assert (restored.ambient_dim, restored.label) == (frame.ambient_dim, frame.label)


def test_frame_from_dict_rejects_malformed_entries() -> None:
    with pytest.raises(FrameError, match="malformed sequence entries"):
        seqvec_from_list([[1, 2.0]])
    with pytest.raises(FrameError, match="lacks"):
        frame_from_dict({"label": "no elements"})


def test_format_csv() -> None:
    text = format_csv(("k", "value", "ok"), [(1, 0.25, True), (2, np.float64(1.0), False)])
    assert text == "k,value,ok\n1,0.25,True\n2,1.0,False\n"


def test_writers_create_parent_directories(tmp_path: Path) -> None:
    frame = Frame((SeqVec.basis(1),), 1, "single")
    json_path = write_json(tmp_path / "a" / "frame.json", frame_to_dict(frame))
    csv_path = write_csv(tmp_path / "b" / "table.csv", ("x",), [(0.5,)])
    assert json.loads(json_path.read_text())["label"] == "single"
    assert csv_path.read_text() == "x\n0.5\n"
