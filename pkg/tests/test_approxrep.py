"""Tests for the `approxrep` module."""

import math

import pytest

from FrameLab.approxrep import (
    SQRT2,
    AlphaSchedule,
    ScheduleInput,
    alpha_schedule_dyadic,
    alpha_schedule_general,
    approx_suborbit_pipeline,
    assemble_phi,
    scaled_shifts,
)
from FrameLab.builtin_frames import doubled_onb, onb
from FrameLab.seqspace import SeqVec, apply
from FrameLab.utils.exceptions import ScheduleError


def test_scaled_shifts_compose_to_identity() -> None:
    T, U = scaled_shifts(SQRT2)
    v = SeqVec([1, 3], [1.0, -2.0])
    assert apply(T, apply(U, v)).isclose(v)
    with pytest.raises(ScheduleError, match="lambda must be > 1"):
        scaled_shifts(1.0)


def test_dyadic_bounded_support_schedule() -> None:
    schedule = alpha_schedule_dyadic(1, 3, K=2)
    assert schedule.alphas == (0, 6, 13)
    assert schedule.provenance == "dyadic_bounded_support"
    assert schedule.rounding_adjustments == ()


def test_dyadic_unrestricted_schedule_adds_supports() -> None:
    schedule = alpha_schedule_dyadic(1, 3, supports=[2, 1], K=2)
    assert schedule.alphas[1] == 8
    assert schedule.provenance == "dyadic_unrestricted"


def test_dyadic_support_hypothesis_is_checked() -> None:
    with pytest.raises(ScheduleError, match="support hypothesis violated at k=1"):
        alpha_schedule_dyadic(1, 3, supports=[10], K=1, bounded_support=True)


def test_general_gap_lands_on_integer() -> None:
    """
    Given lambda = sqrt(2), B = 2 and epsilon = 1/8,
    When the first general gap is computed,
    Then the logarithmic bound is exactly 6 and rounding noise does not push it to 7.
    """
    schedule = alpha_schedule_general(ScheduleInput((1, 1), SQRT2, 2.0, 1 / 8, 1.0), 2)
    assert schedule.alphas == (0, 6, 13)
    assert schedule.gaps == (6, 7)
    assert schedule.terms == 2


def test_general_gap_respects_supports() -> None:
    schedule = alpha_schedule_general(ScheduleInput((20,), SQRT2, 2.0, 1 / 8, 1.0), 1)
    assert schedule.gaps == (20,)


def test_general_schedule_needs_tolerance_below_lower_bound() -> None:
    with pytest.raises(ScheduleError, match="tolerance must be below lower frame bound"):
        alpha_schedule_general(ScheduleInput((1,), SQRT2, 1.0, 1.0, 1.0), 1)


@pytest.mark.parametrize(
    "alphas, message",
    [((1, 2), "start at"), ((0, 2, 2), "strictly increasing"), ((), "start at")],
)
def test_alpha_schedule_validation(alphas, message) -> None:
    with pytest.raises(ScheduleError, match=message):
        AlphaSchedule(alphas, "general")


def test_assemble_phi_example() -> None:
    frame = doubled_onb(1)
    phi, tail = assemble_phi(frame, AlphaSchedule((0, 6, 13), "general"), SQRT2, 2, B=2.0)
    assert phi.isclose(SeqVec([1, 7], [1.0, 2.0**-3]))
    assert tail == pytest.approx(SQRT2 * SQRT2**-13 / (1 - 1 / SQRT2))


def test_assemble_phi_checks_term_count(onb6) -> None:
    with pytest.raises(ScheduleError, match="K_terms must lie in"):
        assemble_phi(onb6, AlphaSchedule((0, 1), "general"), 2.0, 7)


@pytest.mark.parametrize("frame_builder", [lambda: onb(8), lambda: doubled_onb(4)])
@pytest.mark.parametrize("j", [2, 3, 4])
@pytest.mark.parametrize("kind", ["general", "dyadic"])
def test_pipeline_certifies_every_element(frame_builder, j: int, kind: str) -> None:
    frame = frame_builder()
    result = approx_suborbit_pipeline(frame, SQRT2, 2.0**-j, kind)
    assert result.certificates_pass
    assert result.blocks_disjoint
    assert result.report.verdict
    assert result.gap_within_sqrt_eps
    assert result.report.excess_match
    assert result.report.bounds_within_interval
    assert len(result.errors) == frame.size
    assert sum(result.errors) <= 2.0**-j


def test_excess_is_compared_on_the_reference_section(doubled4) -> None:
    """
    Given the doubled basis (excess 4) and its suborbit approximation,
    When the excesses are compared,
    Then the projection onto the reference section keeps excess 4, while the unprojected family has strictly
    smaller excess because its leakage past the section adds independent directions.
    """
    report = approx_suborbit_pipeline(doubled4, SQRT2, 0.25).report
    assert report.reference_excess == 4
    assert report.approx_excess == 4
    assert report.excess_match
    assert report.leakage_norm > 0
    assert report.approx_excess_full < report.approx_excess


def test_pipeline_rejects_large_tolerance(onb6) -> None:
    with pytest.raises(ScheduleError, match="tolerance must be below lower frame bound"):
        approx_suborbit_pipeline(onb6, SQRT2, 1.0)


def test_dyadic_pipeline_requires_sqrt2(onb6) -> None:
    with pytest.raises(ScheduleError, match="sqrt"):
        approx_suborbit_pipeline(onb6, math.e, 0.25, "dyadic")


def test_pipeline_certificate_rows() -> None:
    result = approx_suborbit_pipeline(onb(4), SQRT2, 0.25, "dyadic")

    assert [row.k for row in result.certificates] == [1, 2, 3, 4]
    for row in result.certificates:
        assert row.alpha_k == result.schedule.alphas[row.k - 1]
        assert row.error_sq == result.errors[row.k - 1]
        assert row.eps_over_2k == pytest.approx(0.25 / 2**row.k)
        assert row.tail_allowance >= 0.0
        assert row.passed
