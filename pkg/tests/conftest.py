"""
Fixtures for tests.

This file provides small frames, two Carleson systems and a helper that writes experiment configuration files.
"""

import json
from pathlib import Path
from typing import Any, Callable, Dict

import pytest

from FrameLab.builtin_frames import doubled_onb, onb, scaled_basis
from FrameLab.carleson import CarlesonSystem, build_carleson_system, geometric_lambda
from FrameLab.frames import Frame
from FrameLab.seqspace import SeqVec

WriteConfigFunc = Callable[[str, Dict[str, Any]], Path]


@pytest.fixture
def onb6() -> Frame:
    return onb(6)


@pytest.fixture
def duplicated_frame() -> Frame:
    """``(e_1, e_1, e_2, e_3)``: a frame whose representation operator cannot exist."""
    return Frame((SeqVec.basis(1), SeqVec.basis(1), SeqVec.basis(2), SeqVec.basis(3)), 3, "duplicated")


@pytest.fixture
def doubled4() -> Frame:
    return doubled_onb(4)


@pytest.fixture
def scaled50() -> Frame:
    return scaled_basis(50)


@pytest.fixture
def carleson_system() -> CarlesonSystem:
    """Carleson system for ``lambda_k = 1 - 2**-k``, ``k = 1..10``, with unit weights."""
    return build_carleson_system(geometric_lambda(2.0, 10))


@pytest.fixture
def small_carleson_system() -> CarlesonSystem:
    """Carleson system for ``lambda_k = 1 - 2**-k``, ``k = 1..3``; its orbit sections are well conditioned."""
    return build_carleson_system(geometric_lambda(2.0, 3))


@pytest.fixture
def write_config(tmp_path: Path) -> WriteConfigFunc:
    """
    Helper that writes a configuration mapping as JSON (or raw text for ``.toml`` names) into ``tmp_path``.

    Parameters
    ----------
    tmp_path : Path
        The temporary directory path provided by the `tmp_path` fixture.

    Returns
    -------
    WriteConfigFunc
        A callable taking a file name and the content.
    """

    def _write(name: str, content: Any) -> Path:
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content), encoding="utf-8")
        return path

    return _write
