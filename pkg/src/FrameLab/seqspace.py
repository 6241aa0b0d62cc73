"""
Finitely supported sequences in l2(N) and the structured operators acting on them.

Vectors are stored sparsely as (index, value) pairs with 1-based indices. Shift and diagonal operators act on
that representation directly, so no ambient truncation dimension exists at this layer; only `DenseMatrix` and
`OperatorSpec.section` work with a fixed dimension.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence, Tuple, Union

import numpy as np

from FrameLab.config import DEFAULT_TOLERANCE
from FrameLab.utils.exceptions import FloatingRangeError, FrameLabError, SupportError
from FrameLab.utils.linalg_utils import spectral_norm

logger = logging.getLogger(__name__)

Scalar = Union[int, float, complex]


class SeqVec:
    """
    Complex vector of finite support, kept in canonical form.

    Canonical form means strictly increasing positive indices and no stored zeros. Duplicate indices passed to the
    constructor are summed. Instances are immutable; the index and value arrays are read-only.

    Parameters
    ----------
    indices : Iterable[int]
        Positive (1-based) coordinate indices.
    values : Iterable[complex]
        Coordinate values, same length as ``indices``.
    """

    __slots__ = ("_indices", "_values")

    def __init__(self, indices: Iterable[int] = (), values: Iterable[Scalar] = ()) -> None:
        idx = np.array(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.int64).ravel()
        val = np.array(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.complex128).ravel()
        if idx.shape != val.shape:
            raise FrameLabError(f"indices and values differ in length ({idx.size} != {val.size})")
        if idx.size and idx.min() < 1:
            raise FrameLabError("sequence indices must be positive")
        if not np.all(np.isfinite(val)):
            raise FrameLabError("sequence values must be finite")

        if idx.size:
            unique, inverse = np.unique(idx, return_inverse=True)
            summed = np.zeros(unique.size, dtype=np.complex128)
            np.add.at(summed, inverse.ravel(), val)
            keep = summed != 0
            idx, val = unique[keep], summed[keep]

        idx.setflags(write=False)
        val.setflags(write=False)
        self._indices = idx
        self._values = val

    @classmethod
    def zero(cls) -> "SeqVec":
        return cls()

    @classmethod
    def basis(cls, k: int, scale: Scalar = 1.0) -> "SeqVec":
        """Return ``scale * e_k``."""
        return cls([k], [scale])

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, Scalar]]) -> "SeqVec":
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @classmethod
    def from_dense(cls, array: Sequence[Scalar], offset: int = 1) -> "SeqVec":
        """Build from a dense coordinate array whose first entry is coordinate ``offset``."""
        arr = np.asarray(array, dtype=np.complex128).ravel()
        nonzero = np.flatnonzero(arr)
        return cls(nonzero + offset, arr[nonzero])

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def nnz(self) -> int:
        return int(self._indices.size)

    @property
    def max_index(self) -> int:
        """Largest index carrying a nonzero value, ``0`` for the zero vector."""
        return int(self._indices[-1]) if self._indices.size else 0

    def is_zero(self) -> bool:
        return self._indices.size == 0

    def to_pairs(self) -> list:
        return [(int(i), complex(v)) for i, v in zip(self._indices, self._values)]

    def to_dense(self, dim: int) -> np.ndarray:
        """Dense coordinates ``1..dim``; raises `SupportError` when the support does not fit."""
        if self.max_index > dim:
            raise SupportError(self.max_index, dim)
        out = np.zeros(dim, dtype=np.complex128)
        out[self._indices - 1] = self._values
        return out

    def truncate(self, dim: int) -> "SeqVec":
        """Orthogonal projection onto the span of ``e_1..e_dim``."""
        keep = self._indices <= dim
        return SeqVec(self._indices[keep], self._values[keep])

    def shifted(self, offset: int, factor: Scalar = 1.0) -> "SeqVec":
        """Move every coordinate by ``offset`` and multiply by ``factor``; coordinates moved below 1 are dropped."""
        new_idx = self._indices + offset
        keep = new_idx >= 1
        return SeqVec(new_idx[keep], self._values[keep] * factor)

    def norm_sq(self) -> float:
        return float(np.sum(self._values.real**2 + self._values.imag**2))

    def norm(self) -> float:
        return float(np.linalg.norm(self._values)) if self._values.size else 0.0

    def inner(self, other: "SeqVec") -> complex:
        """Inner product, linear in ``self`` and conjugate-linear in ``other``."""
        _, mine, theirs = np.intersect1d(self._indices, other._indices, assume_unique=True, return_indices=True)
        return complex(np.sum(self._values[mine] * np.conj(other._values[theirs])))

    def distance(self, other: "SeqVec") -> float:
        return (self - other).norm()

    def isclose(self, other: "SeqVec", tol: float = DEFAULT_TOLERANCE) -> bool:
        return self.distance(other) <= tol

    def __add__(self, other: "SeqVec") -> "SeqVec":
        if not isinstance(other, SeqVec):
            return NotImplemented
        return SeqVec(np.concatenate([self._indices, other._indices]), np.concatenate([self._values, other._values]))

    def __neg__(self) -> "SeqVec":
        return SeqVec(self._indices, -self._values)

    def __sub__(self, other: "SeqVec") -> "SeqVec":
        if not isinstance(other, SeqVec):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "SeqVec":
        if not isinstance(scalar, (int, float, complex, np.number)):
            return NotImplemented
        return SeqVec(self._indices, self._values * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "SeqVec":
        return SeqVec(self._indices, self._values / scalar)

    def __iter__(self) -> Iterator[Tuple[int, complex]]:
        return iter(self.to_pairs())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeqVec):
            return NotImplemented
        return np.array_equal(self._indices, other._indices) and np.array_equal(self._values, other._values)

    def __hash__(self) -> int:
        return hash((self._indices.tobytes(), self._values.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {v:.6g}" for i, v in self.to_pairs()[:6])
        more = ", ..." if self.nnz > 6 else ""
        return f"SeqVec({{{body}{more}}})"


def _checked_power(base: float, exponent: int) -> float:
    try:
        return float(base) ** exponent
    except OverflowError as exc:
        raise FloatingRangeError(f"{base}**{exponent} is outside double precision") from exc


class OperatorSpec(ABC):
    """Structured bounded operator on l2(N) with an exact action on `SeqVec`."""

    @abstractmethod
    def apply(self, v: SeqVec) -> SeqVec:
        """Image of ``v``."""

    def power(self, n: int, v: SeqVec) -> SeqVec:
        """n-fold application; subclasses override with closed forms."""
        for _ in range(n):
            v = self.apply(v)
        return v

    @abstractmethod
    def section(self, dim: int) -> np.ndarray:
        """The ``dim x dim`` leading finite section as a dense matrix."""

    def reach(self) -> int:
        """Largest upward index displacement a single application can cause."""
        return 0

    def extent(self) -> int:
        """Largest coordinate a dense component may write to."""
        return 0

    def __matmul__(self, other: "OperatorSpec") -> "Composition":
        return Composition((self, other))


@dataclass(frozen=True)
class ConstantSequence:
    """Eigenvalue generator returning the same value at every index."""

    value: complex

    def __call__(self, indices: np.ndarray) -> np.ndarray:
        return np.full(np.shape(indices), self.value, dtype=np.complex128)

    def conjugate(self) -> "ConstantSequence":
        return ConstantSequence(complex(np.conj(self.value)))


@dataclass(frozen=True)
class ConjugateSequence:
    """Entrywise complex conjugate of another generator."""

    base: Callable[[np.ndarray], np.ndarray]

    def __call__(self, indices: np.ndarray) -> np.ndarray:
        return np.conj(np.asarray(self.base(indices), dtype=np.complex128))


@dataclass(frozen=True)
class Diagonal(OperatorSpec):
    """
    Diagonal operator ``e_k -> lambda(k) e_k``.

    ``generator`` maps an integer index array to the eigenvalue array; ``bound`` is the declared supremum of
    ``|lambda(k)|``, checked on every index the operator touches.
    """

    generator: Callable[[np.ndarray], np.ndarray]
    bound: float
    label: str = "diagonal"

    def eigenvalues(self, indices: np.ndarray) -> np.ndarray:
        lam = np.asarray(self.generator(np.asarray(indices, dtype=np.int64)), dtype=np.complex128)
        if lam.size and np.max(np.abs(lam)) > self.bound + DEFAULT_TOLERANCE:
            raise FrameLabError(f"diagonal entry exceeds declared bound {self.bound}")
        return lam

    def apply(self, v: SeqVec) -> SeqVec:
        return SeqVec(v.indices, v.values * self.eigenvalues(v.indices))

    def power(self, n: int, v: SeqVec) -> SeqVec:
        return SeqVec(v.indices, v.values * self.eigenvalues(v.indices) ** n)

    def section(self, dim: int) -> np.ndarray:
        return np.diag(self.eigenvalues(np.arange(1, dim + 1)))


@dataclass(frozen=True)
class ScaledLeftShift(OperatorSpec):
    """``e_{k+1} -> scale * e_k`` and ``e_1 -> 0``."""

    scale: float

    def __post_init__(self) -> None:
        if not self.scale > 0 or not math.isfinite(self.scale):
            raise FrameLabError("shift scale must be a positive finite number")

    def apply(self, v: SeqVec) -> SeqVec:
        return v.shifted(-1, self.scale)

    def power(self, n: int, v: SeqVec) -> SeqVec:
        if n == 0 or v.max_index <= n:
            return v if n == 0 else SeqVec.zero()
        return v.shifted(-n, _checked_power(self.scale, n))

    def section(self, dim: int) -> np.ndarray:
        return np.diag(np.full(max(dim - 1, 0), self.scale, dtype=np.complex128), k=1)


@dataclass(frozen=True)
class ScaledRightShift(OperatorSpec):
    """``e_k -> scale**-1 * e_{k+1}``."""

    scale: float

    def __post_init__(self) -> None:
        if not self.scale > 0 or not math.isfinite(self.scale):
            raise FrameLabError("shift scale must be a positive finite number")

    def apply(self, v: SeqVec) -> SeqVec:
        return v.shifted(1, 1.0 / self.scale)

    def power(self, n: int, v: SeqVec) -> SeqVec:
        if n == 0:
            return v
        return v.shifted(n, _checked_power(self.scale, -n))

    def section(self, dim: int) -> np.ndarray:
        return np.diag(np.full(max(dim - 1, 0), 1.0 / self.scale, dtype=np.complex128), k=-1)

    def reach(self) -> int:
        return 1


@dataclass(frozen=True)
class RightShift(OperatorSpec):
    """The unweighted right shift ``e_k -> e_{k+1}``, an isometry."""

    def apply(self, v: SeqVec) -> SeqVec:
        return v.shifted(1)

    def power(self, n: int, v: SeqVec) -> SeqVec:
        return v.shifted(n)

    def section(self, dim: int) -> np.ndarray:
        return np.diag(np.ones(max(dim - 1, 0), dtype=np.complex128), k=-1)

    def reach(self) -> int:
        return 1


@dataclass(frozen=True, eq=False)
class DenseMatrix(OperatorSpec):
    """
    Matrix acting on the first ``dim`` coordinates.

    Coordinates beyond ``dim`` are outside the domain: `apply` refuses vectors supported there, while `section`
    pads with zeros (the operator annihilates them).
    """

    entries: np.ndarray
    dim: int = field(default=0)

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.complex128)
        dim = self.dim or entries.shape[0]
        if entries.shape != (dim, dim):
            raise FrameLabError(f"dense operator needs a {dim}x{dim} matrix, got {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "dim", dim)

    def apply(self, v: SeqVec) -> SeqVec:
        if v.max_index > self.dim:
            raise SupportError(v.max_index, self.dim)
        return SeqVec.from_dense(self.entries[:, v.indices - 1] @ v.values)

    def power(self, n: int, v: SeqVec) -> SeqVec:
        if n == 0:
            return v
        if v.max_index > self.dim:
            raise SupportError(v.max_index, self.dim)
        return SeqVec.from_dense(np.linalg.matrix_power(self.entries, n) @ v.to_dense(self.dim))

    def section(self, dim: int) -> np.ndarray:
        out = np.zeros((dim, dim), dtype=np.complex128)
        k = min(dim, self.dim)
        out[:k, :k] = self.entries[:k, :k]
        return out

    def extent(self) -> int:
        return self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.dim, self.entries.tobytes()))


@dataclass(frozen=True)
class Composition(OperatorSpec):
    """Product ``ops[0] @ ops[1] @ ... @ ops[-1]``; the last operator acts first."""

    ops: Tuple[OperatorSpec, ...]

    def __post_init__(self) -> None:
        ops = tuple(self.ops)
        if not ops:
            raise FrameLabError("composition needs at least one operator")
        object.__setattr__(self, "ops", ops)

    def apply(self, v: SeqVec) -> SeqVec:
        for op in reversed(self.ops):
            v = op.apply(v)
        return v

    def reach(self) -> int:
        return sum(op.reach() for op in self.ops)

    def extent(self) -> int:
        return max(op.extent() for op in self.ops)

    def section(self, dim: int) -> np.ndarray:
        # intermediate images stay inside the working dimension, so its product is exact on the leading block
        work = max(dim, self.extent()) + self.reach()
        product = np.eye(work, dtype=np.complex128)
        for op in self.ops:
            product = product @ op.section(work)
        return product[:dim, :dim]


def apply(op: OperatorSpec, v: SeqVec) -> SeqVec:
    """
    Apply ``op`` to ``v``.

    Raises
    ------
    SupportError
        If ``op`` contains a `DenseMatrix` and ``v`` (or an intermediate image) is supported beyond its dimension.
    """
    return op.apply(v)


def power_apply(op: OperatorSpec, n: int, v: SeqVec) -> SeqVec:
    """Return ``op**n v``; ``n = 0`` returns ``v`` unchanged."""
    if n < 0:
        raise FrameLabError("power must be nonnegative")
    return op.power(n, v)


def finite_section_norm(op: OperatorSpec, dim: int) -> float:
    """Largest singular value of the ``dim x dim`` leading section of ``op``."""
    if dim < 1:
        raise FrameLabError("section dimension must be positive")
    norm = spectral_norm(op.section(dim))
    logger.debug("finite section norm of %r at dim %d: %.17g", op, dim, norm)
    return norm


def adjoint(op: OperatorSpec) -> OperatorSpec:
    """
    Hilbert-space adjoint as another structured operator.

    ``(lam L)* = lam R`` is expressed as ``lam**2 * ScaledRightShift(lam)`` and ``(lam**-1 R)* = lam**-2 *
    ScaledLeftShift(lam)``, so adjoints of the weighted shifts stay within the shift variants.
    """
    if isinstance(op, ScaledLeftShift):
        lam = op.scale
        return Composition((Diagonal(ConstantSequence(lam**2), lam**2, "constant"), ScaledRightShift(lam)))
    if isinstance(op, ScaledRightShift):
        lam = op.scale
        return Composition((Diagonal(ConstantSequence(lam**-2), lam**-2, "constant"), ScaledLeftShift(lam)))
    if isinstance(op, RightShift):
        return ScaledLeftShift(1.0)
    if isinstance(op, Diagonal):
        return Diagonal(ConjugateSequence(op.generator), op.bound, f"{op.label}*")
    if isinstance(op, DenseMatrix):
        return DenseMatrix(op.entries.conj().T, op.dim)
    if isinstance(op, Composition):
        return Composition(tuple(adjoint(inner) for inner in reversed(op.ops)))
    raise FrameLabError(f"no adjoint rule for {type(op).__name__}")
