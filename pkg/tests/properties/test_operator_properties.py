"""Property-based tests for sequence-space operators."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from FrameLab.seqspace import (
    Diagonal,
    RightShift,
    ScaledLeftShift,
    ScaledRightShift,
    SeqVec,
    adjoint,
    apply,
    power_apply,
)

ABS_TOLERANCE = 1e-9
MAX_INDEX = 12

coefficients = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def seqvecs(draw) -> SeqVec:
    indices = draw(st.lists(st.integers(min_value=1, max_value=MAX_INDEX), min_size=1, max_size=6, unique=True))
    values = [complex(draw(coefficients), draw(coefficients)) for _ in indices]
    return SeqVec(indices, values)


def _decaying(indices: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 ** -np.asarray(indices, dtype=float)


operators = st.one_of(
    st.floats(min_value=0.25, max_value=4.0).map(ScaledLeftShift),
    st.floats(min_value=0.25, max_value=4.0).map(ScaledRightShift),
    st.just(RightShift()),
    st.just(Diagonal(_decaying, 1.0, "1-2^-k")),
)


@settings(max_examples=60, deadline=None)
@given(op=operators, u=seqvecs(), v=seqvecs(), c=coefficients)
def test_apply_is_linear(op, u: SeqVec, v: SeqVec, c: float) -> None:
    combined = apply(op, c * u + v)
    separate = c * apply(op, u) + apply(op, v)
    assert combined.distance(separate) <= ABS_TOLERANCE * max(1.0, combined.norm())


@settings(max_examples=60, deadline=None)
@given(op=operators, u=seqvecs(), v=seqvecs())
def test_adjoint_satisfies_inner_product_identity(op, u: SeqVec, v: SeqVec) -> None:
    lhs = apply(op, u).inner(v)
    rhs = u.inner(apply(adjoint(op), v))
    assert abs(lhs - rhs) <= ABS_TOLERANCE * max(1.0, abs(lhs))


@settings(max_examples=40, deadline=None)
@given(op=operators, v=seqvecs(), n=st.integers(min_value=0, max_value=6))
def test_power_matches_iteration(op, v: SeqVec, n: int) -> None:
    iterated = v
    for _ in range(n):
        iterated = apply(op, iterated)
    closed = power_apply(op, n, v)
    assert closed.distance(iterated) <= ABS_TOLERANCE * max(1.0, iterated.norm())


@given(v=seqvecs(), scale=st.floats(min_value=1.01, max_value=4.0))
def test_scaled_shifts_invert_each_other(v: SeqVec, scale: float) -> None:
    there_and_back = apply(ScaledLeftShift(scale), apply(ScaledRightShift(scale), v))
    assert there_and_back.distance(v) <= ABS_TOLERANCE * max(1.0, v.norm())
    assert math.isclose(apply(RightShift(), v).norm(), v.norm(), rel_tol=1e-12)
