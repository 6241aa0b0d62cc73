"""
Orbit machinery: generating orbits, representation operators built from dual frames, kernel shift-invariance,
representations on spans, intertwining with the Hardy-space shift and decay diagnostics.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from FrameLab.config import DEFAULT_TOLERANCE, DUAL_TOLERANCE, OVERFLOW_GUARD, RANK_TOLERANCE
from FrameLab.frames import Frame, FrameBounds, canonical_dual, frame_bounds
from FrameLab.seqspace import DenseMatrix, OperatorSpec, SeqVec, adjoint, finite_section_norm, power_apply
from FrameLab.utils.exceptions import FrameLabError, OrbitDivergenceError, RepresentationError
from FrameLab.utils.linalg_utils import kernel_basis, numerical_rank, pseudo_inverse, singular_values, spectral_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitFrame:
    """
    The family ``(phi, T phi, ..., T^(M-1) phi)`` together with the operator and generator that produced it.

    ``certified`` records that every iterated element agrees with the closed-form power of ``op_used``.
    """

    base: Frame
    op_used: OperatorSpec
    phi: SeqVec
    certified: bool
    certification_error: float
    zero_elements: Tuple[int, ...]

    @property
    def elements(self) -> Tuple[SeqVec, ...]:
        return self.base.elements

    @property
    def frame_candidate(self) -> bool:
        return not self.zero_elements


@dataclass(frozen=True)
class KernelInvariance:
    invariant: bool
    distance: float
    kernel_dim: int
    tested_dim: int
    excluded: int


@dataclass(frozen=True)
class RepresentationResult:
    """
    Finite-section representation operator ``T f = sum_{k<M} <f, g_k> f_{k+1}``.

    ``residual`` is ``max_{j<M} ||T f_j - f_{j+1}||``. ``tail_indicator`` is ``||f_M|| ||g_M||``, the size of the
    term the finite sum leaves out.
    """

    matrix: DenseMatrix
    norm: float
    norm_bounds: Tuple[float, float]
    residual: float
    kernel_invariant: bool
    kernel: KernelInvariance
    tail_indicator: float
    dual_kind: str
    bounds: FrameBounds

    def represents(self, tol: float = 1e-9) -> bool:
        return self.residual <= tol

    def norm_within_bounds(self, tol: float = 1e-9) -> bool:
        return self.norm_bounds[0] - tol <= self.norm <= self.norm_bounds[1] + tol

    def norm_below_upper_bound(self, tol: float = 1e-9) -> bool:
        return self.norm <= self.norm_bounds[1] + tol


@dataclass(frozen=True)
class SpanRepresentation:
    matrix: np.ndarray
    support: Tuple[int, ...]
    norm: float


@dataclass(frozen=True)
class HardyIntertwining:
    residual: float
    kernel_dim: int
    kernel_shift_invariant: bool
    distance: float

    @property
    def riesz(self) -> bool:
        return self.kernel_dim == 0


@dataclass(frozen=True)
class DecayDiagnostic:
    norms: Tuple[float, ...]
    trend: str
    strictly_decreasing: bool
    constant: bool
    reaches_zero: bool
    decreasing_fraction: float
    adjoint_norms: Tuple[float, ...] = ()
    adjoint_trend: str = "unknown"


def generate_orbit(
    op: OperatorSpec, phi: SeqVec, count: int, ambient_dim: int = 0, tol: float = DEFAULT_TOLERANCE
) -> OrbitFrame:
    """
    Generate ``(phi, T phi, ..., T^(count-1) phi)``.

    Parameters
    ----------
    op : OperatorSpec
        The operator ``T``.
    phi : SeqVec
        The generating vector.
    count : int
        Number of orbit elements, ``>= 1``.
    ambient_dim : int
        Ambient section for the resulting frame; ``0`` uses the largest support index observed.
    tol : float
        Relative tolerance for certifying iterates against closed-form powers.

    Returns
    -------
    OrbitFrame

    Raises
    ------
    OrbitDivergenceError
        If an element's norm exceeds ``OVERFLOW_GUARD``.
    """
    if count < 1:
        raise RepresentationError("orbit length must be at least 1")
    elements = [phi]
    current = phi
    for step in range(1, count):
        current = op.apply(current)
        size = current.norm()
        if size > OVERFLOW_GUARD:
            raise OrbitDivergenceError(step, size)
        elements.append(current)

    worst = 0.0
    for step in range(1, count):
        closed = power_apply(op, step, phi)
        worst = max(worst, closed.distance(elements[step]) / max(1.0, elements[step].norm()))
    zero_elements = tuple(n for n, element in enumerate(elements) if element.is_zero())
    if zero_elements:
        logger.info("orbit of %r has zero elements at %s", op, zero_elements)

    base = Frame(tuple(elements), ambient_dim, f"orbit of {op!r}")
    return OrbitFrame(base, op, phi, worst <= tol, worst, zero_elements)


def kernel_shift_invariance(
    frame: Frame, tol: float = RANK_TOLERANCE, rel_tol: float = RANK_TOLERANCE
) -> KernelInvariance:
    """
    Test whether the kernel of the synthesis matrix is invariant under the right shift of coefficient sequences.

    Only kernel vectors with vanishing last coefficient can be shifted without reference to a missing element
    ``f_{M+1}``; they form the tested subspace and the remaining kernel directions are counted as ``excluded``.
    The distance is the operator norm of ``(I - P_ker) shift`` on the tested subspace and is compared with ``tol``;
    ``rel_tol`` is the relative singular-value cut that decides the kernel.
    """
    if frame.size < 2:
        raise RepresentationError("kernel shift-invariance needs at least two elements")
    kernel = kernel_basis(frame.synthesis, rel_tol)
    kernel_dim = kernel.shape[1]
    if kernel_dim == 0:
        return KernelInvariance(True, 0.0, 0, 0, 0)

    last_row = kernel[-1:, :]
    tested = kernel @ kernel_basis(last_row) if np.linalg.norm(last_row) > tol else kernel
    tested_dim = tested.shape[1]
    if tested_dim == 0:
        return KernelInvariance(True, 0.0, kernel_dim, 0, kernel_dim)

    shifted = np.zeros_like(tested)
    shifted[1:, :] = tested[:-1, :]
    leftover = shifted - kernel @ (kernel.conj().T @ shifted)
    distance = spectral_norm(leftover)
    return KernelInvariance(distance <= tol, distance, kernel_dim, tested_dim, kernel_dim - tested_dim)


def _default_dual(frame: Frame) -> Tuple[np.ndarray, str]:
    u = frame.synthesis
    head = u[:, :-1]
    if numerical_rank(head) == frame.ambient_dim:
        # canonical dual of f_1..f_{M-1}, completed by g_M = 0
        g = np.zeros_like(u)
        g[:, :-1] = pseudo_inverse(head).conj().T
        return g, "shift_compatible"
    if numerical_rank(u) < frame.ambient_dim:
        values = singular_values(u)
        ratio = values[-1] / values[0] if values.size and values[0] > 0 else 0.0
        raise RepresentationError(
            f"frame does not span ambient space at relative cut {RANK_TOLERANCE:g} "
            f"(sigma_min / sigma_max = {ratio:.3e}); no dual frame available"
        )
    return canonical_dual(frame).synthesis, "canonical"


def representation_operator(
    frame: Frame, dual: Optional[Frame] = None, tol: float = 1e-9
) -> RepresentationResult:
    """
    Assemble ``T = sum_{k<M} f_{k+1} g_k^*`` and test how well it maps each ``f_j`` to ``f_{j+1}``.

    Parameters
    ----------
    frame : Frame
        Ordered family with ``M >= 2`` elements spanning its ambient section.
    dual : Frame, optional
        A dual frame. When omitted, the canonical dual of ``f_1..f_{M-1}`` padded with ``g_M = 0`` is used if those
        elements already span (this is again a dual of the whole family); otherwise the canonical dual.
    tol : float
        Residual tolerance for the kernel-invariance equivalence.

    Raises
    ------
    RepresentationError
        If the family is too short, the lengths differ or ``dual`` fails ``||U G^* - I|| <= DUAL_TOLERANCE``.
    """
    if frame.size < 2:
        raise RepresentationError("representation needs at least two elements")
    dim = frame.ambient_dim
    if dual is None:
        g, dual_kind = _default_dual(frame)
    else:
        if dual.size != frame.size:
            raise RepresentationError(f"frame and dual differ in length ({frame.size} != {dual.size})")
        dim = max(dim, dual.ambient_dim)
        g = dual.synthesis_padded(dim)
        dual_kind = "supplied"

    u = frame.synthesis_padded(dim)
    dual_defect = spectral_norm(u @ g.conj().T - np.eye(dim))
    if dual_defect > DUAL_TOLERANCE:
        raise RepresentationError(f"dual frame not verified (||U G* - I|| = {dual_defect:.3e})")

    matrix = u[:, 1:] @ g[:, :-1].conj().T
    residual = float(np.max(np.linalg.norm(matrix @ u[:, :-1] - u[:, 1:], axis=0)))
    operator = DenseMatrix(matrix, dim)
    norm = finite_section_norm(operator, dim)

    bounds = frame_bounds(frame)
    upper = float(np.sqrt(bounds.upper / bounds.lower)) if bounds.lower > 0 else float("inf")
    kernel = kernel_shift_invariance(frame)
    tail = float(np.linalg.norm(u[:, -1]) * np.linalg.norm(g[:, -1]))
    if (residual <= tol) != kernel.invariant:
        logger.warning("residual %.3e and kernel invariance %s disagree", residual, kernel.invariant)
    return RepresentationResult(operator, norm, (1.0, upper), residual, kernel.invariant, kernel, tail, dual_kind,
                                bounds)


def span_representation(seq: Sequence[SeqVec]) -> SpanRepresentation:
    """
    The unique linear map on ``span{f_1..f_{M-1}}`` with ``T f_k = f_{k+1}``, and its operator norm there.

    Coordinates are compressed to the union of the supports, so widely spread indices cost nothing.

    Raises
    ------
    RepresentationError
        If fewer than two vectors are given or they are linearly dependent.
    """
    if len(seq) < 2:
        raise RepresentationError("span representation needs at least two vectors")
    support = np.unique(np.concatenate([v.indices for v in seq]))
    position = {int(index): row for row, index in enumerate(support)}
    u = np.zeros((support.size, len(seq)), dtype=np.complex128)
    for k, v in enumerate(seq):
        u[[position[int(i)] for i in v.indices], k] = v.values

    values = singular_values(u)
    if values.size < len(seq) or values[0] == 0.0 or values[-1] <= RANK_TOLERANCE * values[0]:
        raise RepresentationError("sequence not linearly independent")

    head = u[:, :-1]
    # minimum-norm least-squares solution of head X = I is pinv(head), which vanishes off the span
    solution, *_ = linalg.lstsq(head, np.eye(support.size, dtype=np.complex128))
    matrix = u[:, 1:] @ solution
    return SpanRepresentation(matrix, tuple(int(i) for i in support), spectral_norm(matrix))


def hardy_intertwine_check(
    orbit: OrbitFrame, N: int, tol: float = RANK_TOLERANCE, rel_tol: float = RANK_TOLERANCE
) -> HardyIntertwining:
    """
    Check ``T V = V S`` on the monomials ``z^0..z^N``, where ``V z^n = T^n phi`` and ``S`` is multiplication by z.

    Returns the largest ``||T (T^n phi) - T^(n+1) phi||`` for ``n < N`` and the kernel data of ``V``'s
    ``N + 1`` columns, the kernel cut at ``rel_tol`` relative to the largest singular value.
    """
    if orbit.base.size < N + 1:
        raise RepresentationError(f"orbit has {orbit.base.size} elements, {N + 1} needed")
    columns = orbit.elements[: N + 1]
    residual = max((orbit.op_used.apply(columns[n]).distance(columns[n + 1]) for n in range(N)), default=0.0)
    section = Frame(columns, orbit.base.ambient_dim, f"V_{N}")
    kernel = kernel_shift_invariance(section, tol, rel_tol) if N >= 1 else KernelInvariance(True, 0.0, 0, 0, 0)
    return HardyIntertwining(residual, kernel.kernel_dim, kernel.invariant, kernel.distance)


def _orbit_norms(
    op: OperatorSpec, f: SeqVec, n_max: int
) -> Tuple[Tuple[float, ...], Optional[Tuple[int, float]]]:
    """``||T^n f||`` for ``n = 0..n_max``; stops at the first step past ``OVERFLOW_GUARD`` and returns it second."""
    norms = []
    current = f
    for n in range(n_max + 1):
        if n:
            current = op.apply(current)
        size = current.norm()
        if size > OVERFLOW_GUARD:
            return tuple(norms), (n, size)
        norms.append(size)
    return tuple(norms), None


def _norm_trend(norms: Sequence[float]) -> Tuple[str, bool, bool, bool, float]:
    arr = np.array(norms)
    steps = np.diff(arr)
    scale = max(1.0, float(arr.max()))
    constant = bool(np.all(np.abs(arr - arr[0]) <= DEFAULT_TOLERANCE * scale))
    strictly_decreasing = bool(steps.size and np.all(steps < 0))
    reaches_zero = bool(arr[0] > 0 and arr[-1] == 0.0)
    decreasing_fraction = float(np.mean(steps < 0)) if steps.size else 0.0

    if reaches_zero:
        trend = "reaches_zero"
    elif constant:
        trend = "constant"
    elif strictly_decreasing:
        trend = "strictly_decreasing"
    elif np.all(steps <= 0):
        trend = "nonincreasing"
    elif np.all(steps >= 0):
        trend = "increasing"
    else:
        trend = "mixed"
    return trend, strictly_decreasing, constant, reaches_zero, decreasing_fraction


def decay_diagnostic(op: OperatorSpec, f: SeqVec, n_max: int, eta: Optional[SeqVec] = None) -> DecayDiagnostic:
    """
    Record ``||T^n f||`` for ``n = 0..n_max`` and classify the trend, together with the adjoint orbit
    ``||(T*)^n eta||`` of ``eta`` (``f`` when omitted).

    Trend labels: ``reaches_zero`` (the orbit is eventually zero after a nonzero start), ``constant``,
    ``strictly_decreasing``, ``nonincreasing``, ``increasing`` or ``mixed``. When ``T`` has a frame orbit every
    adjoint orbit tends to zero; an adjoint orbit that grows past ``OVERFLOW_GUARD`` is cut there and labelled
    ``unbounded``.

    Raises
    ------
    OrbitDivergenceError
        If ``||T^n f||`` exceeds ``OVERFLOW_GUARD``.
    """
    norms, overflow = _orbit_norms(op, f, n_max)
    if overflow is not None:
        raise OrbitDivergenceError(*overflow)
    trend, strictly_decreasing, constant, reaches_zero, decreasing_fraction = _norm_trend(norms)

    try:
        op_adjoint = adjoint(op)
    except FrameLabError as exc:
        logger.info("no adjoint orbit for %r: %s", op, exc)
        return DecayDiagnostic(norms, trend, strictly_decreasing, constant, reaches_zero, decreasing_fraction)
    adjoint_norms, adjoint_overflow = _orbit_norms(op_adjoint, f if eta is None else eta, n_max)
    if adjoint_overflow is not None:
        logger.info("adjoint orbit of %r passes the overflow guard at n=%d", op, adjoint_overflow[0])
        adjoint_trend = "unbounded"
    else:
        adjoint_trend = _norm_trend(adjoint_norms)[0]
    return DecayDiagnostic(norms, trend, strictly_decreasing, constant, reaches_zero, decreasing_fraction,
                           adjoint_norms, adjoint_trend)


@dataclass(frozen=True)
class RieszOrbit:
    operator: DenseMatrix
    orbit: OrbitFrame
    deviation: float


def riesz_orbit(basis: Frame) -> RieszOrbit:
    """
    The operator with ``T f_k = f_{k+1}`` (and ``T f_d = 0``) for a basis ``f_1..f_d`` of its ambient section, and
    the orbit of ``f_1`` under it.

    ``deviation`` is ``max_k ||T**(k-1) f_1 - f_k||``.

    Raises
    ------
    RepresentationError
        If the family is not a basis of its ambient section.
    """
    dim = basis.ambient_dim
    if basis.size != dim or numerical_rank(basis.synthesis) < dim:
        raise RepresentationError("family is not a basis of its ambient section")
    u = basis.synthesis
    shift = np.eye(dim, k=-1, dtype=np.complex128)
    operator = DenseMatrix(u @ shift @ linalg.inv(u), dim)
    orbit = generate_orbit(operator, basis.elements[0], dim, dim)
    deviation = max(g.distance(f) for g, f in zip(orbit.elements, basis.elements))
    return RieszOrbit(operator, orbit, deviation)
