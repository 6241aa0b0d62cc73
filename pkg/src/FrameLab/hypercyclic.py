"""
Rolewicz operators ``a L`` and a constructive plan for vectors whose suborbit approximates a given family.

The plan places target ``f_k`` as a disjoint block of ``phi`` scaled by ``a**-alpha(k)`` and shifted right by
``alpha(k)``. Then ``(aL)**alpha(k) phi`` reproduces ``f_k`` exactly on its support, earlier blocks are shifted out
completely, and the only error is the geometrically damped copy of later blocks.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from FrameLab.config import OVERFLOW_GUARD, UNDERFLOW_FLOOR
from FrameLab.frames import Frame, frame_bounds
from FrameLab.seqspace import ScaledLeftShift, SeqVec, power_apply
from FrameLab.utils.exceptions import FloatingRangeError, HypercyclicError, OrbitDivergenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HypercyclicPlan:
    """
    Attributes
    ----------
    a : float
        Rolewicz scale.
    targets : Tuple[SeqVec, ...]
        The family to approximate.
    epsilon : float
        Overall tolerance; target ``k`` (1-based) is allowed ``epsilon / 2**k``.
    alphas : Tuple[int, ...]
        Suborbit indices, ``alphas[0] == 0``.
    pads : Tuple[int, ...]
        ``alpha(k+1) - alpha(k) - m(k)`` for each gap.
    phi : SeqVec
        The assembled vector.
    certified_errors : Tuple[float, ...]
        ``||(aL)**alpha(k) phi - f_k||**2`` computed from the block norms.
    """

    a: float
    targets: Tuple[SeqVec, ...]
    epsilon: float
    alphas: Tuple[int, ...]
    pads: Tuple[int, ...]
    phi: SeqVec
    certified_errors: Tuple[float, ...]

    @property
    def tolerances(self) -> Tuple[float, ...]:
        return tuple(self.epsilon / 2**k for k in range(1, len(self.targets) + 1))

    @property
    def supports(self) -> Tuple[int, ...]:
        return tuple(_block_length(f) for f in self.targets)

    def suborbit(self) -> Tuple[SeqVec, ...]:
        op = rolewicz(self.a)
        return tuple(power_apply(op, alpha, self.phi) for alpha in self.alphas)

    def measured_errors(self) -> Tuple[float, ...]:
        return tuple((g - f).norm_sq() for g, f in zip(self.suborbit(), self.targets))

    def on_support_deviation(self) -> float:
        """Largest deviation of ``(aL)**alpha(k) phi`` from ``f_k`` on ``e_1..e_m(k)``."""
        worst = 0.0
        for g, f, m in zip(self.suborbit(), self.targets, self.supports):
            worst = max(worst, (g.truncate(m) - f).norm())
        return worst


@dataclass(frozen=True)
class DensityProbe:
    n_best: int
    dist_best: float


@dataclass(frozen=True)
class RolewiczSection:
    N: int
    lower: float
    upper: float
    span_lower: float
    span_dim: int

    @property
    def ratio(self) -> float:
        return self.upper / self.span_lower if self.span_lower > 0 else math.inf


def _block_length(f: SeqVec) -> int:
    return max(1, f.max_index)


def rolewicz(a: float) -> ScaledLeftShift:
    """The Rolewicz operator ``a L``."""
    if not a > 1 or not math.isfinite(a):
        raise HypercyclicError("Rolewicz requires a > 1")
    return ScaledLeftShift(float(a))


def _smallest_gap(a: float, minimum: int, next_norm_sq: float, allowed: float, next_allowed: float) -> int:
    # smallest g >= minimum with a**(-2g) * (||f_{k+1}||^2 + eps/2^(k+1)) <= eps/2^k
    need = (next_norm_sq + next_allowed) / allowed
    gap = max(minimum, math.ceil(math.log(need) / (2 * math.log(a)))) if need > 1 else minimum
    while gap > minimum and a ** (-2 * (gap - 1)) * need <= 1:
        gap -= 1
    while a ** (-2 * gap) * need > 1:
        gap += 1
    return gap


def plan_hypercyclic_vector(targets: Sequence[SeqVec], a: float, epsilon: float) -> HypercyclicPlan:
    """
    Build ``phi`` and indices ``alpha(k)`` with ``||(aL)**alpha(k) phi - f_k||**2 <= epsilon / 2**k``.

    Each gap ``alpha(k+1) - alpha(k)`` is the smallest integer that is at least ``m(k)`` (the largest support
    index of ``f_k``) and keeps the damped remainder of the later blocks within tolerance.

    Raises
    ------
    HypercyclicError
        For an empty target list, ``a <= 1`` or ``epsilon <= 0``.
    FloatingRangeError
        If a block scale ``a**-alpha(k)`` would fall below ``UNDERFLOW_FLOOR``.
    """
    targets = tuple(targets)
    if not targets:
        raise HypercyclicError("at least one target is required")
    rolewicz(a)
    if not epsilon > 0:
        raise HypercyclicError("epsilon must be positive")

    K = len(targets)
    supports = [_block_length(f) for f in targets]
    allowed = [epsilon / 2**k for k in range(1, K + 1)]
    alphas = [0]
    pads = []
    for k in range(K - 1):
        gap = _smallest_gap(a, supports[k], targets[k + 1].norm_sq(), allowed[k], allowed[k + 1])
        pads.append(gap - supports[k])
        alphas.append(alphas[-1] + gap)

    if alphas[-1] * math.log(a) > -math.log(UNDERFLOW_FLOOR):
        raise FloatingRangeError("plan exceeds floating range; reduce targets or ε")

    phi = SeqVec.zero()
    for alpha, f in zip(alphas, targets):
        phi = phi + f.shifted(alpha, a ** (-alpha))

    # blocks are disjoint, so the error of target k is the sum of the damped later block norms
    certified = []
    for k in range(K):
        certified.append(sum(a ** (-2 * (alphas[n] - alphas[k])) * targets[n].norm_sq() for n in range(k + 1, K)))

    logger.info("hypercyclic plan: %d targets, alpha(K)=%d, a=%g, eps=%g", K, alphas[-1], a, epsilon)
    return HypercyclicPlan(float(a), targets, float(epsilon), tuple(alphas), tuple(pads), phi, tuple(certified))


def orbit_density_probe(phi: SeqVec, a: float, target: SeqVec, budget: int) -> DensityProbe:
    """Scan ``n = 0..budget`` for the orbit element ``(aL)**n phi`` closest to ``target``; ties keep the smaller n."""
    if budget < 0:
        raise HypercyclicError("budget must be nonnegative")
    op = rolewicz(a)
    best_n, best_dist = 0, math.inf
    for n in range(budget + 1):
        element = power_apply(op, n, phi)
        size = element.norm()
        if size > OVERFLOW_GUARD:
            raise OrbitDivergenceError(n, size)
        dist = element.distance(target)
        if dist < best_dist:
            best_n, best_dist = n, dist
    return DensityProbe(best_n, best_dist)


def rolewicz_frame_diagnostic(phi: SeqVec, a: float, sections: Iterable[int]) -> Tuple[RolewiczSection, ...]:
    """
    Frame bounds of the finite orbit sections ``{(aL)**n phi}_{n=0..N}`` for each ``N``.

    Rolewicz orbits are never frames; on finite sections this shows up as an upper bound that keeps growing with
    ``N`` while the lower bound on the span does not.
    """
    sections = sorted(set(sections))
    if not sections:
        return ()
    op = rolewicz(a)
    dim = max(1, phi.max_index)
    elements = [power_apply(op, n, phi) for n in range(sections[-1] + 1)]
    rows = []
    for N in sections:
        bounds = frame_bounds(Frame(tuple(elements[: N + 1]), dim, f"rolewicz[{N}]"))
        rows.append(RolewiczSection(N, bounds.lower, bounds.upper, bounds.span_lower, bounds.span_dim))
        logger.debug("rolewicz section N=%d: B=%.6g span_lower=%.6g", N, bounds.upper, bounds.span_lower)
    return tuple(rows)


def bessel_sums(phi: SeqVec, a: float, f: SeqVec, sections: Iterable[int]) -> Tuple[float, ...]:
    """``sum_{n<=N} |<f, (aL)**n phi>|**2`` for each ``N``; a frame orbit keeps these bounded by ``B ||f||**2``."""
    op = rolewicz(a)
    sections = sorted(set(sections))
    if not sections:
        return ()
    terms = np.array([abs(f.inner(power_apply(op, n, phi))) ** 2 for n in range(sections[-1] + 1)])
    partial = np.cumsum(terms)
    return tuple(float(partial[N]) for N in sections)
