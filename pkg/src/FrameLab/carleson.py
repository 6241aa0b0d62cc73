"""
Carleson frames: eigenvalue sequences in the unit disc, the Carleson condition and its ratio criterion, and the
diagonal operator / generating vector pair whose orbit is a frame.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence, Tuple

import numpy as np

from FrameLab.frames import FrameBounds
from FrameLab.orbitrep import OrbitFrame, generate_orbit
from FrameLab.seqspace import Diagonal, SeqVec
from FrameLab.utils.exceptions import CarlesonError
from FrameLab.utils.linalg_utils import hermitian_eigenvalues, roundoff_cut, singular_values

logger = logging.getLogger(__name__)

GeneratorKind = Literal["geometric", "harmonic"]

PREFIX_ONLY_FLAG = "passes on prefix, fails asymptotically"
UNKNOWN_ASYMPTOTICS_FLAG = "asymptotics unknown"


@dataclass(frozen=True)
class LambdaGenerator:
    """
    Closed form of an eigenvalue sequence.

    ``geometric``: ``lambda_k = 1 - alpha**-k``. ``harmonic``: ``lambda_k = 1 - 1/k``.
    """

    kind: GeneratorKind
    alpha: float = 2.0

    def defects(self, indices: np.ndarray) -> np.ndarray:
        """``1 - lambda_k``, evaluated without cancellation."""
        k = np.asarray(indices, dtype=np.float64)
        if self.kind == "geometric":
            return np.power(self.alpha, -k)
        return 1.0 / k

    def __call__(self, indices: np.ndarray) -> np.ndarray:
        return (1.0 - self.defects(indices)).astype(np.complex128)

    def ratios(self, count: int) -> np.ndarray:
        """Exact defect ratios ``(1 - lambda_{k+1}) / (1 - lambda_k)`` for ``k = 1..count``."""
        if self.kind == "geometric":
            return np.full(count, 1.0 / self.alpha)
        k = np.arange(1, count + 1, dtype=np.float64)
        return k / (k + 1.0)

    @property
    def ratio_limit(self) -> float:
        return 1.0 / self.alpha if self.kind == "geometric" else 1.0


@dataclass(frozen=True)
class CarlesonSeq:
    """
    Finite eigenvalue sequence ``lambda_1..lambda_K`` with ``|lambda_k| < 1``.

    ``defects`` carries ``1 - lambda_k`` for real positive sequences known in closed form; they stay exact where
    ``lambda_k`` itself rounds to 1.0. Distinctness is not enforced here; `carleson_inf` and
    `build_carleson_system` reject repeated values.
    """

    lambdas: Tuple[complex, ...]
    generator: Optional[LambdaGenerator] = None
    defects: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        lambdas = tuple(complex(x) for x in self.lambdas)
        if not lambdas:
            raise CarlesonError("eigenvalue sequence is empty")
        if self.defects is not None:
            defects = tuple(float(x) for x in self.defects)
            if len(defects) != len(lambdas):
                raise CarlesonError("defects and eigenvalues differ in length")
            inside = all(0.0 < d <= 1.0 for d in defects)
            object.__setattr__(self, "defects", defects)
        else:
            inside = all(abs(x) < 1.0 for x in lambdas)
        if not inside:
            raise CarlesonError("eigenvalues must satisfy |lambda_k| < 1")
        object.__setattr__(self, "lambdas", lambdas)

    @property
    def K(self) -> int:
        return len(self.lambdas)

    def modulus_defects(self) -> np.ndarray:
        """``1 - |lambda_k|``."""
        if self.defects is not None:
            return np.array(self.defects)
        return 1.0 - np.abs(np.array(self.lambdas))

    def is_real_positive_increasing(self) -> bool:
        lam = np.array(self.lambdas)
        return bool(np.all(lam.imag == 0) and np.all(lam.real >= 0) and np.all(np.diff(self.modulus_defects()) < 0))

    def zero_count(self) -> int:
        return int(np.count_nonzero(self.modulus_defects() == 1.0))

    def distinct(self) -> bool:
        keys = self.defects if self.defects is not None else self.lambdas
        return len(set(keys)) == len(keys)


@dataclass(frozen=True)
class RatioTestResult:
    c_max: float
    passes: bool
    necessary_and_sufficient: bool
    asymptotic: Literal["passes", "fails", "unknown"]
    flag: Optional[str]
    ratios: Tuple[float, ...]
    modulus_tends_to_one: Optional[bool]


@dataclass(frozen=True)
class CarlesonSystem:
    """
    Diagonal operator with the eigenvalues on ``e_1..e_K`` (zero beyond) and generating vector
    ``phi = sum_k m_k sqrt(1 - |lambda_k|^2) e_k``.
    """

    op: Diagonal
    phi: SeqVec
    m_weights: Tuple[float, ...]
    seq: CarlesonSeq

    @property
    def ambient_dim(self) -> int:
        return self.seq.K


@dataclass(frozen=True)
class _TabulatedEigenvalues:
    values: Tuple[complex, ...]

    def __repr__(self) -> str:
        return f"table[{len(self.values)}]"

    def __call__(self, indices: np.ndarray) -> np.ndarray:
        table = np.array(self.values, dtype=np.complex128)
        idx = np.asarray(indices, dtype=np.int64)
        out = np.zeros(idx.shape, dtype=np.complex128)
        inside = (idx >= 1) & (idx <= table.size)
        out[inside] = table[idx[inside] - 1]
        return out


def geometric_lambda(alpha: float, K: int) -> CarlesonSeq:
    """``lambda_k = 1 - alpha**-k`` for ``k = 1..K``; requires ``alpha > 1``."""
    if not alpha > 1:
        raise CarlesonError("alpha must be > 1")
    if K < 1:
        raise CarlesonError("K must be positive")
    generator = LambdaGenerator("geometric", float(alpha))
    k = np.arange(1, K + 1)
    return CarlesonSeq(tuple(generator(k)), generator, tuple(generator.defects(k)))


def harmonic_lambda(K: int) -> CarlesonSeq:
    """``lambda_k = 1 - 1/k``: ratios tend to 1, so the ratio test only passes on finite prefixes."""
    if K < 1:
        raise CarlesonError("K must be positive")
    generator = LambdaGenerator("harmonic")
    k = np.arange(1, K + 1)
    return CarlesonSeq(tuple(generator(k)), generator, tuple(generator.defects(k)))


def lambda_from_list(values: Iterable[complex]) -> CarlesonSeq:
    """Raw eigenvalue list without closed form."""
    return CarlesonSeq(tuple(values))


def ratio_test(seq: CarlesonSeq) -> RatioTestResult:
    """
    Evaluate ``c_max = max_k (1 - |lambda_{k+1}|) / (1 - |lambda_k|)``.

    The test passes when ``c_max < 1``. It is reported as necessary and sufficient for real positive increasing
    sequences and sufficient only otherwise. With a closed-form generator the ratios are exact and the limit is
    known; raw lists are flagged ``asymptotics unknown``.

    Raises
    ------
    CarlesonError
        If the sequence has fewer than two entries.
    """
    if seq.K < 2:
        raise CarlesonError("ratio test needs at least two eigenvalues")
    if seq.generator is not None:
        ratios = seq.generator.ratios(seq.K - 1)
        asymptotic = "passes" if seq.generator.ratio_limit < 1 else "fails"
    else:
        defects = seq.modulus_defects()
        ratios = defects[1:] / defects[:-1]
        asymptotic = "unknown"

    c_max = float(np.max(ratios))
    passes = c_max < 1
    flag = None
    if passes and asymptotic == "fails":
        flag = PREFIX_ONLY_FLAG
    elif asymptotic == "unknown":
        flag = UNKNOWN_ASYMPTOTICS_FLAG
    if flag:
        logger.info("ratio test: %s (c_max=%.6g)", flag, c_max)
        warnings.warn(f"ratio test: {flag} (c_max={c_max:.6g})", UserWarning)
    # both closed forms have |lambda_k| -> 1; a finite raw list cannot decide it
    tends_to_one = True if seq.generator is not None else None
    return RatioTestResult(c_max, passes, seq.is_real_positive_increasing(), asymptotic, flag,
                           tuple(float(r) for r in ratios), tends_to_one)


def _log_pseudo_distances(seq: CarlesonSeq) -> np.ndarray:
    """Matrix of ``log |lambda_k - lambda_n| - log |1 - lambda_k conj(lambda_n)|``; the diagonal is left at 0."""
    K = seq.K
    if seq.defects is not None:
        d = np.array(seq.defects)
        numer = np.abs(d[None, :] - d[:, None])
        denom = d[None, :] + d[:, None] - d[None, :] * d[:, None]
    else:
        lam = np.array(seq.lambdas)
        numer = np.abs(lam[None, :] - lam[:, None])
        denom = np.abs(1.0 - lam[None, :] * np.conj(lam[:, None]))
    off = ~np.eye(K, dtype=bool)
    if np.any(numer[off] == 0.0):
        raise CarlesonError("eigenvalues not distinct", value=0.0)
    logs = np.zeros((K, K))
    logs[off] = np.log(numer[off]) - np.log(denom[off])
    return logs


def carleson_inf(seq: CarlesonSeq) -> float:
    """
    ``min_n prod_{k != n} |lambda_k - lambda_n| / |1 - lambda_k conj(lambda_n)|`` over the finite sequence.

    Products are accumulated as sums of logarithms. For sequences given through defects ``d_k = 1 - lambda_k``
    the factors use ``|d_n - d_k|`` and ``d_k + d_n - d_k d_n`` directly.

    Raises
    ------
    CarlesonError
        If two eigenvalues coincide (``value`` is then ``0.0``) or fewer than two are given.
    """
    if seq.K < 2:
        raise CarlesonError("Carleson infimum needs at least two eigenvalues")
    row_sums = _log_pseudo_distances(seq).sum(axis=1)
    return float(np.exp(np.min(row_sums)))


def build_carleson_system(seq: CarlesonSeq, m_weights: Optional[Sequence[float]] = None) -> CarlesonSystem:
    """
    Diagonal operator and generating vector ``phi_k = m_k sqrt(1 - |lambda_k|^2)``.

    Parameters
    ----------
    seq : CarlesonSeq
        Distinct eigenvalues inside the unit disc.
    m_weights : Sequence[float], optional
        Weights ``m_k``, bounded away from zero; all ones by default.

    Raises
    ------
    CarlesonError
        On repeated eigenvalues, a length mismatch or weights that are not strictly positive and finite.
    """
    weights = np.ones(seq.K) if m_weights is None else np.asarray(m_weights, dtype=np.float64)
    if weights.shape != (seq.K,):
        raise CarlesonError(f"expected {seq.K} weights, got {weights.size}")
    if not np.all(weights > 0):
        raise CarlesonError("weights not bounded below")
    if not np.all(np.isfinite(weights)):
        raise CarlesonError("weights not bounded above")
    if not seq.distinct():
        raise CarlesonError("eigenvalues not distinct", value=0.0)

    defects = seq.modulus_defects()
    # 1 - |lambda|^2 = d (2 - d) for d = 1 - |lambda|
    coords = weights * np.sqrt(defects * (2.0 - defects))
    phi = SeqVec(np.arange(1, seq.K + 1), coords)
    label = f"carleson[{seq.generator.kind}]" if seq.generator else "carleson"
    op = Diagonal(_TabulatedEigenvalues(seq.lambdas), 1.0, label)
    return CarlesonSystem(op, phi, tuple(float(w) for w in weights), seq)


def carleson_orbit(system: CarlesonSystem, length: int) -> OrbitFrame:
    return generate_orbit(system.op, system.phi, length, system.ambient_dim)


def _eigenvalue_powers(seq: CarlesonSeq, exponents: np.ndarray) -> np.ndarray:
    """``lambda_k**n`` as a ``K x len(exponents)`` array; defect sequences go through ``log1p(-d_k)``."""
    n = np.asarray(exponents, dtype=np.int64)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        if seq.defects is not None:
            logs = np.log1p(-np.array(seq.defects))[:, None]
            powers = np.exp(n * logs).astype(np.complex128)
        else:
            powers = np.power(np.array(seq.lambdas)[:, None], n)
    # 0**0
    return np.where(n == 0, 1.0 + 0.0j, powers)


def orbit_synthesis(system: CarlesonSystem, length: int, start: int = 0) -> np.ndarray:
    """``K x length`` synthesis matrix of ``{T^n phi}_{n=start}^{start+length-1}``."""
    if length < 1 or start < 0:
        raise CarlesonError("orbit section needs length >= 1 and start >= 0")
    phi = system.phi.to_dense(system.ambient_dim)
    return phi[:, None] * _eigenvalue_powers(system.seq, np.arange(start, start + length))


def orbit_gram(system: CarlesonSystem, length: Optional[int] = None) -> np.ndarray:
    """
    Frame operator of the first ``length`` orbit elements in closed form; of the whole orbit when omitted.

    Entry ``(k, l)`` is ``phi_k conj(phi_l) sum_n (lambda_k conj(lambda_l))**n``: a Cauchy kernel
    ``1 / (1 - lambda_k conj(lambda_l))`` scaled by the generator on both sides, times
    ``1 - (lambda_k conj(lambda_l))**length`` for a prefix. With unit weights the whole-orbit matrix has unit
    diagonal.
    """
    if length is not None and length < 1:
        raise CarlesonError("orbit section needs length >= 1")
    seq = system.seq
    phi = system.phi.to_dense(system.ambient_dim)
    if seq.defects is not None:
        d = np.array(seq.defects)
        # 1 - (1 - d_k)(1 - d_l)
        denom = d[:, None] + d[None, :] - d[:, None] * d[None, :]
        if length is None:
            kernel = 1.0 / denom
        else:
            with np.errstate(divide="ignore"):
                logs = np.log1p(-d)
            kernel = -np.expm1(length * (logs[:, None] + logs[None, :])) / denom
    else:
        lam = np.array(seq.lambdas)
        prod = lam[:, None] * np.conj(lam[None, :])
        numer = 1.0 if length is None else 1.0 - np.power(prod, length)
        kernel = numer / (1.0 - prod)
    return np.outer(phi, np.conj(phi)) * kernel


def orbit_frame_bounds(system: CarlesonSystem) -> FrameBounds:
    """Optimal bounds of the whole orbit ``{T^n phi}_{n>=0}``, from the eigenvalues of `orbit_gram`."""
    K = system.ambient_dim
    eigenvalues = hermitian_eigenvalues(orbit_gram(system))
    lower, upper = float(eigenvalues[0]), float(eigenvalues[-1])
    resolved = bool(eigenvalues[0] > upper * roundoff_cut((K, K)))
    return FrameBounds(lower, upper, K, K, lower, lower, resolved)


def section_bounds(system: CarlesonSystem, length: int, start: int = 0) -> FrameBounds:
    """
    Bounds of ``{T^n phi}_{n=start}^{start+length-1}`` from the singular values of its synthesis matrix.

    Distinct eigenvalues and a generator with no zero coordinate make the rank structural:
    ``min(length, K)``, less the zero eigenvalues once ``start > 0``. The rank is therefore not read off a
    tolerance; ``resolved`` reports whether the smallest kept singular value clears round-off, and ``lower`` is
    returned even when it does not.
    """
    K = system.ambient_dim
    values = singular_values(orbit_synthesis(system, length, start))
    rank = min(length, K - (system.seq.zero_count() if start > 0 else 0))
    if rank < 1:
        return FrameBounds(0.0, 0.0, 0, K, 0.0, 0.0, True)
    upper = float(values[0] ** 2)
    span_lower = float(values[rank - 1] ** 2)
    resolved = bool(values[rank - 1] > values[0] * roundoff_cut((K, length)))
    lowest = float(values[K - 1] ** 2) if values.size >= K else 0.0
    lower = span_lower if rank == K else 0.0
    return FrameBounds(lower, upper, rank, K, span_lower, lowest, resolved)


def settling_length(system: CarlesonSystem, rel_change: float = 0.05) -> int:
    """
    Smallest section length past which the lower bound stays within ``rel_change`` of the whole-orbit bound.

    The frame operators differ by ``T^M S T^{*M}``, so Weyl's inequality puts the section bound in
    ``[A - r^{2M} B, A]`` with ``r = max |lambda_k|``. The length solves ``r^{2M} B = rel_change * A`` and is
    never below ``K``.

    Raises
    ------
    CarlesonError
        If ``rel_change`` is outside ``(0, 1)`` or the whole-orbit lower bound is below round-off.
    """
    if not 0.0 < rel_change < 1.0:
        raise CarlesonError("rel_change must lie in (0, 1)")
    whole = orbit_frame_bounds(system)
    if not whole.resolved:
        raise CarlesonError("whole-orbit lower bound is below round-off", value=whole.lower)
    with np.errstate(divide="ignore"):
        log_r = float(np.log1p(-np.min(system.seq.modulus_defects())))
    if not np.isfinite(log_r):
        return system.ambient_dim
    target = rel_change * whole.lower / whole.upper
    return max(system.ambient_dim, math.ceil(math.log(target) / (2.0 * log_r)))


@dataclass(frozen=True)
class ProfileRow:
    length: int
    lower: float
    upper: float
    lowest_eigenvalue: float
    excess: int
    resolved: bool


def lower_bound_profile(system: CarlesonSystem, lengths: Iterable[int]) -> Tuple[ProfileRow, ...]:
    """Frame bounds and excess of orbit prefixes of the given lengths."""
    rows = []
    for length in sorted(set(lengths)):
        bounds = section_bounds(system, length)
        rows.append(ProfileRow(length, bounds.lower, bounds.upper, bounds.lowest_eigenvalue,
                               length - bounds.span_dim, bounds.resolved))
    return tuple(rows)


def orbit_tail_bounds(system: CarlesonSystem, length: int, drop: int) -> FrameBounds:
    """Bounds of ``{T^n phi}_{n=drop}^{length-1}``; every such tail of a Carleson orbit is again a frame."""
    if drop >= length:
        raise CarlesonError("cannot drop the whole orbit")
    bounds = section_bounds(system, length - drop, start=drop)
    if bounds.lower == 0.0:
        warnings.warn(f"orbit tail from {drop} does not span at length {length}", UserWarning)
    elif not bounds.resolved:
        warnings.warn(f"orbit tail from {drop} at length {length}: lower bound below round-off", UserWarning)
    return bounds


def seq_to_dict(seq: CarlesonSeq) -> dict:
    if seq.generator is not None and seq.generator.kind == "geometric":
        return {"kind": "geometric", "alpha": seq.generator.alpha, "K": seq.K}
    if seq.generator is not None:
        return {"kind": seq.generator.kind, "K": seq.K}
    return {"lambdas": [[x.real, x.imag] for x in seq.lambdas]}


def seq_from_dict(data: dict) -> CarlesonSeq:
    if "lambdas" in data:
        return lambda_from_list(complex(re, im) for re, im in data["lambdas"])
    kind = data.get("kind")
    if kind == "geometric":
        return geometric_lambda(float(data["alpha"]), int(data["K"]))
    if kind == "harmonic":
        return harmonic_lambda(int(data["K"]))
    raise CarlesonError(f"unknown eigenvalue sequence kind {kind!r}")

