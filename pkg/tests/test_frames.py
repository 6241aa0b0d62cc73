"""Tests for the `frames` module."""

import math

import numpy as np
import pytest

from FrameLab.builtin_frames import onb
from FrameLab.frames import (
    Frame,
    canonical_dual,
    epsilon_approx_check,
    excess,
    frame_bounds,
    frame_inequality_probe,
    reconstruct,
)
from FrameLab.seqspace import SeqVec
from FrameLab.utils.exceptions import FrameError


def _frame(*columns, ambient_dim: int = 0) -> Frame:
    return Frame(tuple(SeqVec.from_pairs(c) for c in columns), ambient_dim)


def test_frame_validates_support_and_size() -> None:
    with pytest.raises(FrameError, match="at least one element"):
        Frame(())
    with pytest.raises(FrameError, match="beyond ambient_dim"):
        Frame((SeqVec.basis(4),), 3)
    assert Frame((SeqVec.basis(4),)).ambient_dim == 4


def test_synthesis_is_cached_and_read_only(onb6: Frame) -> None:
    assert onb6.synthesis is onb6.synthesis
    with pytest.raises(ValueError):
        onb6.synthesis[0, 0] = 2.0


@pytest.mark.parametrize(
    "frame, expected",
    [
        (onb(5), (1.0, 1.0)),
        (_frame([(1, 1)], [(1, 1)], [(2, 1)], [(2, 1)]), (2.0, 2.0)),
        (_frame([(1, 1)], [(2, 2)]), (1.0, 4.0)),
    ],
)
def test_frame_bounds_examples(frame: Frame, expected) -> None:
    bounds = frame_bounds(frame)
    assert (bounds.lower, bounds.upper) == pytest.approx(expected)
    assert bounds.spans


def test_subspace_frame_reports_zero_lower_bound() -> None:
    with pytest.warns(UserWarning, match="subspace frame: .* spans 2 of 3 dimensions"):
        bounds = frame_bounds(_frame([(1, 1)], [(2, 3)], ambient_dim=3))
    assert bounds.lower == 0.0
    assert bounds.subspace_frame
    assert bounds.span_dim == 2
    assert bounds.span_lower == pytest.approx(1.0)


def test_repeated_element_is_a_subspace_frame_warning() -> None:
    with pytest.warns(UserWarning, match="subspace frame"):
        bounds = frame_bounds(Frame((SeqVec.basis(1), SeqVec.basis(1)), 2))
    assert bounds.span_dim == 1
    assert bounds.span_lower == pytest.approx(2.0)


def test_canonical_dual_examples(onb6: Frame, doubled4: Frame) -> None:
    assert np.allclose(canonical_dual(onb6).synthesis, onb6.synthesis)
    assert np.allclose(canonical_dual(doubled4).synthesis, doubled4.synthesis / 2)
    dual_bounds = frame_bounds(canonical_dual(_frame([(1, 1)], [(2, 2)])))
    assert (dual_bounds.lower, dual_bounds.upper) == pytest.approx((1 / 4, 1.0))


def test_canonical_dual_requires_spanning_frame() -> None:
    with pytest.raises(FrameError, match="frame does not span ambient space"):
        canonical_dual(_frame([(1, 1)], ambient_dim=2))


def test_canonical_dual_is_an_involution() -> None:
    frame = _frame([(1, 1)], [(1, 1), (2, 1)], [(2, -0.5), (3, 2)], [(3, 1j)])
    twice = canonical_dual(canonical_dual(frame))
    assert np.allclose(twice.synthesis, frame.synthesis, atol=1e-12)


def test_reconstruct_with_dual() -> None:
    frame = _frame([(1, 1)], [(1, 1), (2, 1)])
    f = SeqVec([1, 2], [0.3, -1.7j])
    expansion, residual = reconstruct(frame, canonical_dual(frame), f)
    assert residual < 1e-10
    assert expansion.isclose(f)


def test_reconstruct_flags_non_dual_pair() -> None:
    frame = _frame([(1, 1)], [(2, 2)])
    _, residual = reconstruct(frame, frame, SeqVec([1, 2], [1.0, 1.0]))
    assert residual == pytest.approx(3.0)


def test_reconstruct_length_mismatch(onb6: Frame) -> None:
    with pytest.raises(FrameError, match="differ in length"):
        reconstruct(onb6, onb(5), SeqVec.basis(1))


def test_excess_examples(onb6: Frame, doubled4: Frame) -> None:
    assert excess(onb6) == 0
    assert excess(doubled4) == 4
    assert excess(_frame([(1, 1)], [(1, 1)], [(2, 1)], [(2, 1)])) == 2


def test_frame_inequality_probe_stays_within_bounds() -> None:
    frame = _frame([(1, 1)], [(1, 1), (2, 1)], [(2, 3)])
    bounds = frame_bounds(frame)
    low, high = frame_inequality_probe(frame, probes=200, seed=7)
    assert bounds.lower - 1e-10 <= low <= high <= bounds.upper + 1e-10


def test_epsilon_check_identity(onb6: Frame) -> None:
    report = epsilon_approx_check(onb6, onb6, 1e-6)
    assert report.synthesis_gap == 0.0
    assert report.verdict
    assert report.excess_match is True
    assert report.bounds_within_interval


def test_epsilon_check_rank_one_perturbation() -> None:
    frame = onb(5)
    perturbed = Frame((SeqVec.basis(1, 1.01),) + frame.elements[1:], 5)
    report = epsilon_approx_check(frame, perturbed, 1e-3)
    assert report.synthesis_gap == pytest.approx(0.01)
    assert report.verdict
    assert report.bound_interval == pytest.approx(((1 - math.sqrt(1e-3)) ** 2, (1 + math.sqrt(1e-3)) ** 2))
    assert report.bounds_within_interval
    assert report.frame_op_within_bound
    assert report.inv_frame_op_within_bound


def test_epsilon_check_warns_when_epsilon_reaches_lower_bound(onb6: Frame) -> None:
    """
    Given an orthonormal basis (A = 1) and a tolerance epsilon = 2,
    When `epsilon_approx_check` compares the basis with itself,
    Then a UserWarning is emitted and the report is flagged as outside the perturbation theorem.
    """
    with pytest.warns(UserWarning, match="perturbation theorem inapplicable"):
        report = epsilon_approx_check(onb6, onb6, 2.0)
    assert "perturbation theorem inapplicable" in report.flags
    assert report.excess_match is None
    assert report.bound_interval[0] == 0.0


def test_epsilon_check_rejects_mismatched_lengths(onb6: Frame) -> None:
    with pytest.raises(FrameError, match="differ in length"):
        epsilon_approx_check(onb6, onb(5), 0.1)
