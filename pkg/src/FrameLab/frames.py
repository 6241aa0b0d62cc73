"""
Frame analysis on finite sections: synthesis and frame operators, bounds, canonical duals, excess, reconstruction
and epsilon-approximation reports with perturbation bounds.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Tuple

import numpy as np

from FrameLab.config import DEFAULT_TOLERANCE, RANDOM_PROBES, RANK_TOLERANCE
from FrameLab.seqspace import SeqVec
from FrameLab.utils.exceptions import FrameError
from FrameLab.utils.linalg_utils import hermitian_eigenvalues, numerical_rank, pseudo_inverse, spectral_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Frame:
    """
    Ordered finite family of finitely supported vectors.

    Attributes
    ----------
    elements : Tuple[SeqVec, ...]
        The family ``f_1..f_M``; order is significant for orbit questions.
    ambient_dim : int
        Dimension ``d`` of the ambient section ``span{e_1..e_d}``. ``0`` (the default) means the smallest ``d``
        containing every support.
    label : str
        Free-form description used in reports.
    """

    elements: Tuple[SeqVec, ...]
    ambient_dim: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        if not elements:
            raise FrameError("a frame needs at least one element")
        needed = max(1, max(e.max_index for e in elements))
        dim = self.ambient_dim or needed
        if dim < needed:
            raise FrameError(f"element support reaches index {needed} beyond ambient_dim {dim}")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "ambient_dim", dim)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, label: str = "", ambient_dim: int = 0) -> "Frame":
        """Frame whose elements are the columns of ``matrix`` (row ``i`` is coordinate ``i + 1``)."""
        matrix = np.asarray(matrix, dtype=np.complex128)
        return cls(tuple(SeqVec.from_dense(matrix[:, k]) for k in range(matrix.shape[1])),
                   ambient_dim or matrix.shape[0], label)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def synthesis(self) -> np.ndarray:
        """The ``ambient_dim x M`` synthesis matrix, computed once and then read-only."""
        matrix = self.synthesis_padded(self.ambient_dim)
        matrix.setflags(write=False)
        return matrix

    def synthesis_padded(self, dim: int) -> np.ndarray:
        """Synthesis matrix embedded in a ``dim``-dimensional section (``dim >= ambient_dim``)."""
        matrix = np.zeros((dim, self.size), dtype=np.complex128)
        for k, element in enumerate(self.elements):
            matrix[element.indices - 1, k] = element.values
        return matrix

    def frame_operator(self) -> np.ndarray:
        u = self.synthesis
        return u @ u.conj().T

    def subset(self, positions: Iterable[int], label: Optional[str] = None) -> "Frame":
        """Frame of the selected positions (0-based) in the given order, keeping the ambient dimension."""
        chosen = tuple(self.elements[p] for p in positions)
        return Frame(chosen, self.ambient_dim, self.label if label is None else label)

    def drop_first(self, count: int) -> "Frame":
        return self.subset(range(count, self.size), f"{self.label}[{count}:]")

    def compressed(self, dim: int) -> "Frame":
        """Elements projected onto ``span{e_1..e_dim}``."""
        return Frame(tuple(e.truncate(dim) for e in self.elements), dim, f"{self.label}|{dim}")


@dataclass(frozen=True)
class FrameBounds:
    """
    Optimal bounds of a finite family on its ambient section.

    ``lower`` is positive exactly when the family spans the ambient section. For a subspace frame it is ``0`` and
    ``span_lower`` holds the lower bound on the span. ``resolved`` is false when ``span_lower`` sits below the
    round-off floor of the computation that produced it.
    """

    lower: float
    upper: float
    span_dim: int
    ambient_dim: int
    span_lower: float
    lowest_eigenvalue: float
    resolved: bool = True

    @property
    def subspace_frame(self) -> bool:
        return self.span_dim < self.ambient_dim

    @property
    def spans(self) -> bool:
        return not self.subspace_frame


@dataclass(frozen=True)
class ApproxReport:
    """Outcome of comparing a frame with a candidate epsilon-approximation."""

    epsilon: float
    per_element_errors: Tuple[float, ...]
    synthesis_gap: float
    verdict: bool
    bound_interval: Tuple[float, float]
    reference_bounds: FrameBounds
    approx_bounds: FrameBounds
    approx_bounds_full: FrameBounds
    leakage_norm: float
    bounds_within_interval: bool
    excess_match: Optional[bool]
    reference_excess: int
    approx_excess: int
    approx_excess_full: int
    frame_op_gap: float
    frame_op_gap_bound: float
    inv_frame_op_gap: float
    inv_frame_op_gap_bound: float
    perturbation_applicable: bool
    flags: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def frame_op_within_bound(self) -> bool:
        return self.frame_op_gap <= self.frame_op_gap_bound + DEFAULT_TOLERANCE

    @property
    def inv_frame_op_within_bound(self) -> bool:
        return self.inv_frame_op_gap <= self.inv_frame_op_gap_bound + DEFAULT_TOLERANCE


def _bounds_of_matrix(u: np.ndarray, rel_tol: float = RANK_TOLERANCE) -> FrameBounds:
    dim = u.shape[0]
    eigenvalues = hermitian_eigenvalues(u @ u.conj().T)
    rank = numerical_rank(u, rel_tol)
    upper = float(eigenvalues[-1]) if eigenvalues.size else 0.0
    span_lower = float(eigenvalues[dim - rank]) if rank else 0.0
    lower = span_lower if rank == dim else 0.0
    return FrameBounds(lower, upper, rank, dim, span_lower, float(eigenvalues[0]) if eigenvalues.size else 0.0)


def frame_bounds(frame: Frame) -> FrameBounds:
    """
    Measure the optimal frame bounds from the ``d x d`` frame operator ``S = U U*``.

    Parameters
    ----------
    frame : Frame
        The family to measure.

    Returns
    -------
    FrameBounds
        ``upper`` is the largest eigenvalue of ``S``; ``lower`` its smallest eigenvalue when the family spans, ``0``
        otherwise (with ``span_lower`` the smallest eigenvalue on the span).
    """
    bounds = _bounds_of_matrix(frame.synthesis)
    if bounds.subspace_frame:
        logger.info("%s spans %d of %d dimensions", frame.label or "frame", bounds.span_dim, bounds.ambient_dim)
        warnings.warn(
            f"subspace frame: {frame.label or 'frame'} spans {bounds.span_dim} of {bounds.ambient_dim} dimensions",
            UserWarning,
        )
    return bounds


def canonical_dual(frame: Frame) -> Frame:
    """
    Return the canonical dual ``{S^-1 f_k}`` in the frame's order.

    Raises
    ------
    FrameError
        If the frame does not span its ambient section.
    """
    u = frame.synthesis
    if numerical_rank(u) < frame.ambient_dim:
        raise FrameError("frame does not span ambient space")
    # S^-1 U = pinv(U)^*
    dual = pseudo_inverse(u).conj().T
    return Frame.from_matrix(dual, f"dual of {frame.label}".strip(), frame.ambient_dim)


def reconstruct(frame: Frame, dual: Frame, f: SeqVec) -> Tuple[SeqVec, float]:
    """
    Expand ``f`` as ``sum_k <f, g_k> f_k``.

    Returns
    -------
    Tuple[SeqVec, float]
        The expansion and its distance from ``f``.

    Raises
    ------
    FrameError
        If ``frame`` and ``dual`` differ in length.
    """
    if frame.size != dual.size:
        raise FrameError(f"frame and dual differ in length ({frame.size} != {dual.size})")
    dim = max(frame.ambient_dim, dual.ambient_dim, f.max_index)
    u = frame.synthesis_padded(dim)
    g = dual.synthesis_padded(dim)
    dense = f.to_dense(dim)
    result = u @ (g.conj().T @ dense)
    residual = float(np.linalg.norm(dense - result))
    return SeqVec.from_dense(result), residual


def excess(frame: Frame, rel_tol: float = RANK_TOLERANCE) -> int:
    """Number of removable elements, ``M - rank(U)`` with singular values below ``rel_tol * sigma_max`` cut."""
    return frame.size - numerical_rank(frame.synthesis, rel_tol)


def frame_inequality_probe(frame: Frame, probes: int = RANDOM_PROBES, seed: int = 0) -> Tuple[float, float]:
    """
    Evaluate ``sum_k |<f, f_k>|^2`` on random unit vectors of the ambient section.

    Returns
    -------
    Tuple[float, float]
        Smallest and largest observed value; both lie in ``[A, B]`` up to round-off.
    """
    rng = np.random.default_rng(seed)
    dim = frame.ambient_dim
    vectors = rng.standard_normal((dim, probes)) + 1j * rng.standard_normal((dim, probes))
    vectors /= np.linalg.norm(vectors, axis=0)
    sums = np.sum(np.abs(frame.synthesis.conj().T @ vectors) ** 2, axis=0)
    return float(sums.min()), float(sums.max())


def _perturbation_interval(lower: float, upper: float, epsilon: float, applicable: bool) -> Tuple[float, float]:
    root_eps = math.sqrt(epsilon)
    # A(1 - sqrt(eps/A))^2 and B(1 + sqrt(eps/B))^2
    low = (math.sqrt(lower) - root_eps) ** 2 if applicable else 0.0
    return low, (math.sqrt(upper) + root_eps) ** 2


def epsilon_approx_check(
    frame: Frame, approx: Frame, epsilon: float, tol: float = DEFAULT_TOLERANCE
) -> ApproxReport:
    """
    Decide whether ``approx`` is an epsilon-approximation of ``frame`` and compare it with the perturbation bounds.

    The synthesis gap and frame-operator gap are measured on the full vectors in a common section. Bounds, excess
    and the inverse frame-operator gap of ``approx`` are measured after projecting it onto ``frame``'s ambient
    section (where ``frame`` is a frame); the size of the discarded part is reported as ``leakage_norm``.

    ``excess_match`` compares ``excess(frame)`` with the excess of that projection. The excess of the unprojected
    family is reported as ``approx_excess_full``: an approximation whose elements leak past the section picks up
    independent directions from the leakage alone, so on a finite section its full excess drops below that of a
    redundant reference however small the leakage is.

    Parameters
    ----------
    frame : Frame
        Reference frame.
    approx : Frame
        Candidate approximation, same length.
    epsilon : float
        Tolerance, ``> 0``.
    tol : float
        Absolute slack for the inequality verdicts.

    Returns
    -------
    ApproxReport

    Raises
    ------
    FrameError
        On length mismatch or nonpositive ``epsilon``.
    """
    if frame.size != approx.size:
        raise FrameError(f"frame and approximation differ in length ({frame.size} != {approx.size})")
    if not epsilon > 0:
        raise FrameError("epsilon must be positive")

    ref_dim = frame.ambient_dim
    full_dim = max(ref_dim, approx.ambient_dim)
    u = frame.synthesis_padded(full_dim)
    u_approx = approx.synthesis_padded(full_dim)
    diff = u - u_approx

    per_element = tuple(float(x) for x in np.sum(np.abs(diff) ** 2, axis=0))
    gap = spectral_norm(diff)
    verdict = gap**2 <= epsilon + tol

    reference = frame_bounds(frame)
    applicable = reference.lower > 0 and epsilon < reference.lower
    flags = []
    if not applicable:
        flags.append("perturbation theorem inapplicable")
        warnings.warn(
            f"perturbation theorem inapplicable: epsilon={epsilon:.6g} is not below the lower bound "
            f"{reference.lower:.6g}",
            UserWarning,
        )
    interval = _perturbation_interval(reference.lower, reference.upper, epsilon, applicable)

    compressed = u_approx[:ref_dim, :]
    approx_bounds = _bounds_of_matrix(compressed)
    approx_full = _bounds_of_matrix(u_approx)
    leakage = spectral_norm(u_approx[ref_dim:, :])
    within = approx_bounds.lower >= interval[0] - tol and approx_bounds.upper <= interval[1] + tol

    reference_excess = frame.size - reference.span_dim
    approx_excess = approx.size - approx_bounds.span_dim
    excess_match: Optional[bool] = None
    if applicable:
        excess_match = reference_excess == approx_excess

    s_ref = u @ u.conj().T
    op_gap = spectral_norm(s_ref - u_approx @ u_approx.conj().T)
    op_gap_bound = math.sqrt(epsilon * reference.upper) * (2 + math.sqrt(epsilon / reference.upper)) \
        if reference.upper > 0 else epsilon

    inv_gap = math.inf
    inv_gap_bound = math.inf
    if applicable and approx_bounds.lower > 0:
        s_inv = np.linalg.inv(s_ref[:ref_dim, :ref_dim])
        s_approx_inv = np.linalg.inv(compressed @ compressed.conj().T)
        inv_gap = spectral_norm(s_inv - s_approx_inv)
        inv_gap_bound = op_gap_bound / (reference.lower**2 * (1 - math.sqrt(epsilon / reference.lower)) ** 2)

    logger.debug("approximation gap %.6g (eps %.6g), leakage %.6g", gap, epsilon, leakage)
    return ApproxReport(
        epsilon=epsilon,
        per_element_errors=per_element,
        synthesis_gap=gap,
        verdict=verdict,
        bound_interval=interval,
        reference_bounds=reference,
        approx_bounds=approx_bounds,
        approx_bounds_full=approx_full,
        leakage_norm=leakage,
        bounds_within_interval=within,
        excess_match=excess_match,
        reference_excess=reference_excess,
        approx_excess=approx_excess,
        approx_excess_full=approx.size - approx_full.span_dim,
        frame_op_gap=op_gap,
        frame_op_gap_bound=op_gap_bound,
        inv_frame_op_gap=inv_gap,
        inv_frame_op_gap_bound=inv_gap_bound,
        perturbation_applicable=applicable,
        flags=tuple(flags),
    )

