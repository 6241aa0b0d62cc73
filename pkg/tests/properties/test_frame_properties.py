"""Property-based tests for frame computations and the suborbit constructions."""

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from FrameLab.approxrep import SQRT2, ScheduleInput, alpha_schedule_general
from FrameLab.frames import Frame, canonical_dual, epsilon_approx_check, excess, frame_bounds, reconstruct
from FrameLab.hypercyclic import plan_hypercyclic_vector
from FrameLab.seqspace import SeqVec

MIN_SINGULAR_VALUE = 0.1

entries = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


@st.composite
def synthesis_matrices(draw) -> np.ndarray:
    dim = draw(st.integers(min_value=1, max_value=4))
    size = draw(st.integers(min_value=dim, max_value=dim + 3))
    return draw(arrays(np.float64, (dim, size), elements=entries))


def _frame(u: np.ndarray) -> Frame:
    return Frame(tuple(SeqVec.from_dense(column) for column in u.T), u.shape[0])


def _spanning(u: np.ndarray) -> bool:
    return bool(np.linalg.svd(u, compute_uv=False).min() > MIN_SINGULAR_VALUE)


@settings(max_examples=50, deadline=None)
@given(u=synthesis_matrices(), data=st.data())
def test_excess_ignores_element_order(u: np.ndarray, data) -> None:
    order = data.draw(st.permutations(range(u.shape[1])))
    assert excess(_frame(u)) == excess(_frame(u[:, list(order)]))


@settings(max_examples=50, deadline=None)
@given(u=synthesis_matrices())
def test_canonical_dual_reconstructs(u: np.ndarray) -> None:
    assume(_spanning(u))
    frame = _frame(u)
    bounds = frame_bounds(frame)
    dual = canonical_dual(frame)
    f = SeqVec.from_dense(np.arange(1, u.shape[0] + 1, dtype=float))
    _, residual = reconstruct(frame, dual, f)
    assert residual <= 1e-8 * f.norm()
    dual_bounds = frame_bounds(dual)
    assert np.isclose(dual_bounds.upper, 1 / bounds.lower, rtol=1e-6)


@settings(max_examples=50, deadline=None)
@given(u=synthesis_matrices(), noise=st.data())
def test_synthesis_gap_is_symmetric(u: np.ndarray, noise) -> None:
    assume(_spanning(u))
    v = u + noise.draw(arrays(np.float64, u.shape, elements=st.floats(min_value=-0.01, max_value=0.01)))
    assume(_spanning(v))
    forward = epsilon_approx_check(_frame(u), _frame(v), 1e-4)
    backward = epsilon_approx_check(_frame(v), _frame(u), 1e-4)
    assert np.isclose(forward.synthesis_gap, backward.synthesis_gap, rtol=1e-12, atol=1e-15)


@given(
    supports=st.lists(st.integers(min_value=1, max_value=30), min_size=1, max_size=8),
    B=st.floats(min_value=1.0, max_value=16.0),
    j=st.integers(min_value=1, max_value=10),
)
def test_general_gaps_cover_supports(supports, B: float, j: int) -> None:
    epsilon = 2.0**-j * 0.5
    schedule = alpha_schedule_general(ScheduleInput(tuple(supports), SQRT2, B, epsilon, 1.0), len(supports))
    assert all(gap >= m for gap, m in zip(schedule.gaps, supports))
    assert schedule.alphas[0] == 0


@settings(max_examples=40, deadline=None)
@given(
    targets=st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=5),
    a=st.floats(min_value=1.5, max_value=4.0),
    j=st.integers(min_value=1, max_value=6),
)
def test_hypercyclic_plan_meets_tolerances(targets, a: float, j: int) -> None:
    plan = plan_hypercyclic_vector([SeqVec.basis(k) for k in targets], a, 2.0**-j)
    for certified, measured, allowed in zip(plan.certified_errors, plan.measured_errors(), plan.tolerances):
        assert certified <= allowed * (1 + 1e-12)
        assert abs(measured - certified) <= 1e-12 * max(1.0, certified)
    assert plan.on_support_deviation() <= 1e-12
