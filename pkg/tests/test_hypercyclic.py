"""Tests for the `hypercyclic` module."""

import pytest

from FrameLab.builtin_frames import onb
from FrameLab.frames import Frame, epsilon_approx_check, excess
from FrameLab.hypercyclic import (
    bessel_sums,
    orbit_density_probe,
    plan_hypercyclic_vector,
    rolewicz,
    rolewicz_frame_diagnostic,
)
from FrameLab.seqspace import SeqVec
from FrameLab.utils.exceptions import FloatingRangeError, HypercyclicError

BASIS = [SeqVec.basis(k) for k in range(1, 4)]


def test_plan_for_repeated_target() -> None:
    """
    Given the targets (e_1, e_1) with a = 2 and epsilon = 1,
    When the plan is built,
    Then the second block sits one step to the right and target 1 pays the damped copy 2**-2.
    """
    plan = plan_hypercyclic_vector([SeqVec.basis(1), SeqVec.basis(1)], 2.0, 1.0)
    assert plan.alphas == (0, 1)
    assert plan.phi.isclose(SeqVec([1, 2], [1.0, 0.5]))
    assert plan.certified_errors == pytest.approx((0.25, 0.0))
    assert plan.measured_errors() == pytest.approx(plan.certified_errors)


def test_plan_places_disjoint_scaled_blocks() -> None:
    plan = plan_hypercyclic_vector(BASIS, 2.0, 2**-3)
    assert plan.alphas == (0, 3, 6)
    assert plan.pads == (2, 1)
    assert plan.phi.isclose(SeqVec([1, 5, 9], [1.0, 1 / 8, 1 / 64]))
    assert plan.on_support_deviation() <= 1e-12


def test_plan_on_orthonormal_basis_meets_tolerances() -> None:
    plan = plan_hypercyclic_vector(onb(10).elements, 2.0, 2**-3)
    assert plan.alphas == (0, 3, 6, 10, 14, 19, 25, 32, 40, 49)
    for certified, measured, allowed in zip(plan.certified_errors, plan.measured_errors(), plan.tolerances):
        assert measured == pytest.approx(certified, abs=1e-15)
        assert certified <= allowed


@pytest.mark.parametrize(
    "targets, a, epsilon, message",
    [
        ([], 2.0, 0.1, "at least one target"),
        (BASIS, 1.0, 0.1, "a > 1"),
        (BASIS, 2.0, 0.0, "epsilon must be positive"),
    ],
)
def test_plan_rejects_bad_input(targets, a, epsilon, message) -> None:
    with pytest.raises(HypercyclicError, match=message):
        plan_hypercyclic_vector(targets, a, epsilon)


def test_plan_reports_floating_range() -> None:
    with pytest.raises(FloatingRangeError, match="exceeds floating range"):
        plan_hypercyclic_vector([SeqVec.basis(400), SeqVec.basis(1)], 10.0, 1.0)


def test_density_probe_finds_planned_index() -> None:
    plan = plan_hypercyclic_vector(BASIS, 2.0, 2**-3)
    probe = orbit_density_probe(plan.phi, 2.0, SeqVec.basis(2), 10)
    assert probe.n_best == 3
    assert probe.dist_best == pytest.approx(1 / 8)


def test_density_probe_rejects_negative_budget() -> None:
    with pytest.raises(HypercyclicError, match="nonnegative"):
        orbit_density_probe(SeqVec.basis(1), 2.0, SeqVec.basis(1), -1)


def test_rolewicz_sections_grow() -> None:
    plan = plan_hypercyclic_vector(BASIS, 2.0, 2**-3)
    rows = rolewicz_frame_diagnostic(plan.phi, 2.0, [8, 2, 8])
    assert [row.N for row in rows] == [2, 8]
    assert rows[1].upper >= rows[0].upper
    assert rolewicz_frame_diagnostic(plan.phi, 2.0, []) == ()


def test_bessel_sums_accumulate() -> None:
    assert bessel_sums(SeqVec.basis(2), 2.0, SeqVec.basis(1), [2, 0, 1]) == pytest.approx((0.0, 4.0, 4.0))


def test_rolewicz_requires_scale_above_one() -> None:
    assert rolewicz(3.0).scale == 3.0
    with pytest.raises(HypercyclicError):
        rolewicz(0.5)


def test_plan_suborbit_approximates_orthonormal_basis() -> None:
    frame = onb(10)
    plan = plan_hypercyclic_vector(frame.elements, 2.0, 2**-3)
    suborbit = Frame(plan.suborbit(), 0, "suborbit")
    report = epsilon_approx_check(frame, suborbit, 2**-3)
    assert report.verdict
    assert excess(suborbit) == 0


def test_rolewicz_orbit_upper_bound_keeps_growing() -> None:
    plan = plan_hypercyclic_vector(onb(10).elements, 2.0, 2**-3)
    short, long = rolewicz_frame_diagnostic(plan.phi, 2.0, [20, 200])
    assert long.upper / short.upper >= 10
