"""Tests for the `builtin_frames` module."""

import json
from pathlib import Path

import pytest

from FrameLab.builtin_frames import BUILTINS, build_builtin, list_builtins, parse_frame_source
from FrameLab.frames import excess
from FrameLab.seqspace import SeqVec
from FrameLab.utils.exceptions import FrameError

SMALL_ARGS = {
    "onb": "onb(3)",
    "doubled_onb": "doubled_onb(3)",
    "scaled_basis": "scaled_basis(3)",
    "carleson": "carleson(2,3,6)",
    "riesz_perturbed": "riesz_perturbed(3,0.5)",
    "interleaved": "interleaved(4)",
}


def test_list_builtins_covers_every_builtin() -> None:
    signatures = [signature for signature, _ in list_builtins()]
    assert len(signatures) == len(BUILTINS)
    assert "scaled_basis(d)" in signatures
    assert "carleson(alpha,K[,M])" in signatures


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_every_builtin_builds(name: str) -> None:
    frame = build_builtin(SMALL_ARGS[name])
    assert frame.size >= 3
    assert frame.label


@pytest.mark.parametrize(
    "spec, size, ambient_dim, frame_excess",
    [
        ("onb(4)", 4, 4, 0),
        ("doubled_onb(2)", 4, 2, 2),
        ("carleson(2, 4, 12)", 12, 4, 8),
        (" riesz_perturbed(5, -0.25) ", 5, 5, 0),
    ],
)
def test_builtin_shapes(spec: str, size: int, ambient_dim: int, frame_excess: int) -> None:
    frame = build_builtin(spec)
    assert (frame.size, frame.ambient_dim) == (size, ambient_dim)
    assert excess(frame) == frame_excess


def test_interleaved_order() -> None:
    frame = build_builtin("interleaved(5)")
    assert frame.elements == (
        SeqVec.basis(1, 1.0),
        SeqVec.basis(10, 10.0),
        SeqVec.basis(2, 2.0),
        SeqVec.basis(100, 100.0),
        SeqVec.basis(3, 3.0),
    )


@pytest.mark.parametrize(
    "spec, message",
    [
        ("onb", "not a builtin frame spec"),
        ("sphere(3)", "unknown builtin frame"),
        ("onb(x)", "non-numeric argument"),
        ("onb(2.5)", "positive integer"),
        ("onb(1,2)", "wrong number of arguments"),
        ("riesz_perturbed(3,1)", r"\|delta\| < 1"),
        ("interleaved(40)", "at most"),
    ],
)
def test_build_builtin_errors(spec: str, message: str) -> None:
    with pytest.raises(FrameError, match=message):
        build_builtin(spec)


def test_parse_frame_source_reads_json(tmp_path: Path) -> None:
    path = tmp_path / "frame.json"
    path.write_text(json.dumps({"label": "pair", "ambient_dim": 2, "elements": [[[1, 1.0, 0.0]], [[2, 0.0, 1.0]]]}))
    frame = parse_frame_source(str(path))
    assert frame.label == "pair"
    assert frame.elements[1] == SeqVec.basis(2, 1j)


def test_parse_frame_source_errors(tmp_path: Path) -> None:
    with pytest.raises(FrameError, match="neither a builtin nor a file"):
        parse_frame_source(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(FrameError, match="invalid frame JSON"):
        parse_frame_source(broken)
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text("{}")
    with pytest.raises(FrameError, match="lacks"):
        parse_frame_source(incomplete)
