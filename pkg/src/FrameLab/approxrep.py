"""
Approximate suborbit representations with the scaled shifts ``T = lambda L`` and ``U = lambda**-1 R``.

For a frame ``{f_k}`` the vector ``phi = sum_n U**alpha(n) f_n`` satisfies ``T**alpha(k) phi ~ f_k`` once the gaps
``alpha(k+1) - alpha(k)`` are large enough. This module computes those gaps (a general logarithmic rule and the
dyadic closed forms for ``lambda = sqrt(2)``), assembles ``phi`` and certifies every element's error.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple

from FrameLab.config import DEFAULT_TOLERANCE
from FrameLab.frames import ApproxReport, Frame, epsilon_approx_check, frame_bounds
from FrameLab.seqspace import ScaledLeftShift, ScaledRightShift, SeqVec, power_apply
from FrameLab.utils.exceptions import ScheduleError

logger = logging.getLogger(__name__)

Provenance = Literal["general", "dyadic_unrestricted", "dyadic_bounded_support"]
ScheduleKind = Literal["general", "dyadic", "dyadic_unrestricted", "dyadic_bounded_support"]

SQRT2 = math.sqrt(2.0)
CEIL_SLACK = 1e-9  # real-valued gap bounds within this of an integer are taken as that integer


@dataclass(frozen=True)
class ScheduleInput:
    """
    Inputs of the general gap rule.

    ``supports[k-1]`` is ``m(k)``, the largest index of a nonzero coordinate of ``f_k``.
    """

    supports: Tuple[int, ...]
    lam: float
    B: float
    epsilon: float
    A: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "supports", tuple(int(m) for m in self.supports))
        if not self.lam > 1:
            raise ScheduleError("lambda must be > 1")
        if any(m < 1 for m in self.supports):
            raise ScheduleError("supports must be positive")
        if not self.epsilon > 0:
            raise ScheduleError("epsilon must be positive")
        if self.A > self.B:
            raise ScheduleError("lower frame bound exceeds upper frame bound")


@dataclass(frozen=True)
class AlphaSchedule:
    """
    Strictly increasing suborbit indices with ``alpha(1) = 0``.

    ``alphas`` holds ``K + 1`` entries for ``K`` terms; the last one bounds the omitted tail.
    ``rounding_adjustments`` lists ``(k, exact value)`` wherever a closed form was not an integer and was rounded up.
    """

    alphas: Tuple[int, ...]
    provenance: Provenance
    rounding_adjustments: Tuple[Tuple[int, str], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        alphas = tuple(int(x) for x in self.alphas)
        if not alphas or alphas[0] != 0:
            raise ScheduleError("schedules start at alpha(1) = 0")
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ScheduleError("schedule must be strictly increasing")
        object.__setattr__(self, "alphas", alphas)

    @property
    def gaps(self) -> Tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.alphas, self.alphas[1:]))

    @property
    def terms(self) -> int:
        return len(self.alphas) - 1


@dataclass(frozen=True)
class CertificateRow:
    k: int
    alpha_k: int
    error_sq: float
    bound: float
    eps_over_2k: float
    tail_allowance: float

    @property
    def passed(self) -> bool:
        return self.error_sq <= min(self.eps_over_2k, self.bound) * (1 + CEIL_SLACK) + self.tail_allowance \
            + DEFAULT_TOLERANCE


@dataclass(frozen=True)
class PipelineResult:
    approx: Frame
    report: ApproxReport
    errors: Tuple[float, ...]
    schedule: AlphaSchedule
    phi: SeqVec
    tail_bound: float
    certificates: Tuple[CertificateRow, ...]
    B_used: float
    blocks_disjoint: bool
    flags: Tuple[str, ...]

    @property
    def certificates_pass(self) -> bool:
        return all(row.passed for row in self.certificates)

    @property
    def gap_within_sqrt_eps(self) -> bool:
        slack = 2 * math.sqrt(self.report.epsilon) * self.tail_bound + self.tail_bound**2
        return self.report.synthesis_gap <= math.sqrt(self.report.epsilon + slack) + DEFAULT_TOLERANCE


def scaled_shifts(lam: float) -> Tuple[ScaledLeftShift, ScaledRightShift]:
    """``(T, U) = (lambda L, lambda**-1 R)``; ``T U`` is the identity."""
    if not lam > 1 or not math.isfinite(lam):
        raise ScheduleError("lambda must be > 1")
    return ScaledLeftShift(float(lam)), ScaledRightShift(float(lam))


def _general_gap_bound(k: int, lam: float, B: float, epsilon: float) -> float:
    return (k * math.log(2) + math.log(B / epsilon) + math.log(lam**2 / (lam**2 - 1))) / (2 * math.log(lam))


def alpha_schedule_general(inp: ScheduleInput, K: int) -> AlphaSchedule:
    """
    Gaps ``alpha(k+1) - alpha(k) = max(m(k), ceil((k ln 2 + ln(B/eps) + ln(lam^2/(lam^2-1))) / (2 ln lam)))``.

    Returns ``K + 1`` indices, so ``supports`` must cover ``k = 1..K``.

    Raises
    ------
    ScheduleError
        If ``epsilon >= A`` or the supports are too short.
    """
    if inp.epsilon >= inp.A:
        raise ScheduleError("tolerance must be below lower frame bound")
    if K < 1 or len(inp.supports) < K:
        raise ScheduleError(f"supports cover {len(inp.supports)} terms, {K} requested")
    alphas = [0]
    for k in range(1, K + 1):
        bound = _general_gap_bound(k, inp.lam, inp.B, inp.epsilon)
        gap = max(inp.supports[k - 1], math.ceil(bound - CEIL_SLACK), 1)
        alphas.append(alphas[-1] + gap)
    return AlphaSchedule(tuple(alphas), "general")


def alpha_schedule_dyadic(
    N: int,
    j: int,
    supports: Optional[Sequence[int]] = None,
    K: int = 1,
    bounded_support: Optional[bool] = None,
) -> AlphaSchedule:
    """
    Closed-form schedules for ``lambda = sqrt(2)``, ``B = 2**N`` and ``epsilon = 2**-j``.

    ``alpha(k) = (k-1)(N+j+1+k/2) + sum_{l<k} m(l)`` without the support hypothesis, and
    ``alpha(k) = (k-1)(N+j+1+k/2)`` when every ``m(k) <= N+j+1+k``. Without ``supports`` the hypothesis is taken
    as asserted by the caller. With ``supports`` the unrestricted form is used unless ``bounded_support`` is set.

    Returns ``K + 1`` indices.

    Raises
    ------
    ScheduleError
        If the support hypothesis is requested but violated, or arguments are out of range.
    """
    if N < 0 or j < 1 or K < 1:
        raise ScheduleError("dyadic schedules need N >= 0, j >= 1, K >= 1")
    if supports is not None and len(supports) < K:
        raise ScheduleError(f"supports cover {len(supports)} terms, {K} requested")
    if bounded_support is None:
        bounded_support = supports is None
    if bounded_support and supports is not None:
        for k, m in enumerate(supports[:K], start=1):
            if m > N + j + 1 + k:
                raise ScheduleError(f"support hypothesis violated at k={k}: m(k)={m} > {N + j + 1 + k}")

    alphas: List[int] = []
    adjustments: List[Tuple[int, str]] = []
    support_sum = 0
    for k in range(1, K + 2):
        exact = (k - 1) * (N + j + 1 + Fraction(k, 2))
        if not bounded_support:
            exact += support_sum
            if k <= K:
                support_sum += int(supports[k - 1])
        value = math.ceil(exact)
        if value != exact:
            adjustments.append((k, str(exact)))
        alphas.append(value)
    provenance: Provenance = "dyadic_bounded_support" if bounded_support else "dyadic_unrestricted"
    return AlphaSchedule(tuple(alphas), provenance, tuple(adjustments))


def assemble_phi(
    frame: Frame, schedule: AlphaSchedule, lam: float, K_terms: int, B: Optional[float] = None
) -> Tuple[SeqVec, float]:
    """
    ``phi = sum_{n<=K_terms} U**alpha(n) f_n`` and a bound on the norm of the omitted infinite tail.

    The tail bound is ``sqrt(B) lam**-alpha(K_terms+1) / (1 - lam**-1)``; when the schedule stops at ``K_terms``
    the next index is taken as ``alpha(K_terms) + 1``.
    """
    if K_terms < 1 or K_terms > frame.size:
        raise ScheduleError(f"K_terms must lie in 1..{frame.size}")
    if len(schedule.alphas) < K_terms:
        raise ScheduleError(f"schedule covers {len(schedule.alphas)} terms, {K_terms} requested")
    _, right = scaled_shifts(lam)
    phi = SeqVec.zero()
    for alpha, f in zip(schedule.alphas[:K_terms], frame.elements[:K_terms]):
        phi = phi + power_apply(right, alpha, f)

    upper = frame_bounds(frame).upper if B is None else B
    next_alpha = schedule.alphas[K_terms] if len(schedule.alphas) > K_terms else schedule.alphas[K_terms - 1] + 1
    tail = math.sqrt(upper) * lam ** (-next_alpha) / (1 - 1 / lam)
    return phi, tail


def _resolve_dyadic(kind: ScheduleKind, supports: Sequence[int], N: int, j: int) -> AlphaSchedule:
    K = len(supports)
    if kind == "dyadic":
        bounded = all(m <= N + j + 1 + k for k, m in enumerate(supports, start=1))
        kind = "dyadic_bounded_support" if bounded else "dyadic_unrestricted"
    return alpha_schedule_dyadic(N, j, supports, K, bounded_support=kind == "dyadic_bounded_support")


def approx_suborbit_pipeline(
    frame: Frame, lam: float, epsilon: float, schedule_kind: ScheduleKind = "general"
) -> PipelineResult:
    """
    Run the full construction: schedule, ``phi``, the approximating family ``{T**alpha(k) phi}`` and its checks.

    Parameters
    ----------
    frame : Frame
        The frame to approximate; its measured lower bound must exceed ``epsilon``.
    lam : float
        Shift scale ``> 1``; dyadic schedules require ``sqrt(2)``.
    epsilon : float
        Approximation tolerance. Dyadic schedules use ``j = ceil(-log2 epsilon)``.
    schedule_kind : ScheduleKind
        ``general``, ``dyadic`` (bounded-support form when its hypothesis holds), ``dyadic_unrestricted`` or
        ``dyadic_bounded_support``.

    Returns
    -------
    PipelineResult
        With ``errors[k-1] = ||f_k - T**alpha(k) phi||**2`` and one certificate row per element.

    Raises
    ------
    ScheduleError
        If ``epsilon`` is not below the lower frame bound or the schedule cannot be built.
    """
    T, _ = scaled_shifts(lam)
    bounds = frame_bounds(frame)
    if not epsilon < bounds.lower:
        raise ScheduleError("tolerance must be below lower frame bound")
    K = frame.size
    supports = tuple(max(1, f.max_index) for f in frame.elements)
    flags: List[str] = []

    if schedule_kind == "general":
        B_used = bounds.upper
        schedule = alpha_schedule_general(ScheduleInput(supports, lam, B_used, epsilon, bounds.lower), K)
        dyadic_B = 2.0 ** max(0, math.ceil(math.log2(B_used) - CEIL_SLACK))
        rounded = alpha_schedule_general(ScheduleInput(supports, lam, dyadic_B, epsilon, bounds.lower), K)
        if rounded.alphas != schedule.alphas:
            flags.append("power-of-two rounding of B changes the schedule")
    else:
        if abs(lam - SQRT2) > 1e-12:
            raise ScheduleError("dyadic schedules require lambda = sqrt(2)")
        N = max(1, math.ceil(math.log2(bounds.upper) - CEIL_SLACK))
        j = math.ceil(-math.log2(epsilon) - CEIL_SLACK)
        if j < 1:
            raise ScheduleError("dyadic schedules need epsilon <= 1/2")
        B_used = 2.0**N
        schedule = _resolve_dyadic(schedule_kind, supports, N, j)
        if schedule.rounding_adjustments:
            flags.append("dyadic schedule rounded up to integers")

    phi, tail = assemble_phi(frame, schedule, lam, K, B_used)
    approx_elements = tuple(power_apply(T, alpha, phi) for alpha in schedule.alphas[:K])
    approx = Frame(approx_elements, 0, f"suborbit approximation of {frame.label}".strip())
    errors = tuple((f - g).norm_sq() for f, g in zip(frame.elements, approx_elements))

    factor = B_used * lam**2 / (lam**2 - 1)
    rows = []
    for k in range(1, K + 1):
        gap = schedule.alphas[k] - schedule.alphas[k - 1]
        bound = factor * lam ** (-2 * gap)
        allowance = 2 * math.sqrt(bound) * tail + tail**2
        rows.append(CertificateRow(k, schedule.alphas[k - 1], errors[k - 1], bound, epsilon / 2**k, allowance))

    blocks = [(alpha, alpha + m) for alpha, m in zip(schedule.alphas, supports)]
    disjoint = all(end <= start for (_, end), (start, _) in zip(blocks, blocks[1:]))

    report = epsilon_approx_check(frame, approx, epsilon)
    logger.info(
        "pipeline on %s: %s schedule, alpha(K)=%d, gap=%.3e, verdict=%s",
        frame.label or "frame", schedule.provenance, schedule.alphas[K - 1], report.synthesis_gap, report.verdict,
    )
    return PipelineResult(approx, report, errors, schedule, phi, tail, tuple(rows), B_used, disjoint, tuple(flags))
