"""Dense linear-algebra helpers shared by the frame and orbit modules."""

from typing import Tuple

import numpy as np
from scipy import linalg

from FrameLab.config import RANK_TOLERANCE


def singular_values(matrix: np.ndarray) -> np.ndarray:
    """Singular values in descending order; empty for a matrix with a zero dimension."""
    if matrix.size == 0:
        return np.zeros(0)
    return linalg.svdvals(matrix)


def spectral_norm(matrix: np.ndarray) -> float:
    values = singular_values(matrix)
    return float(values[0]) if values.size else 0.0


def roundoff_cut(shape: Tuple[int, ...]) -> float:
    """Relative singular-value cut at double-precision round-off, ``max(shape) * eps``."""
    return max(shape) * float(np.finfo(np.float64).eps)


def numerical_rank(matrix: np.ndarray, rel_tol: float = RANK_TOLERANCE) -> int:
    """
    Count singular values above ``rel_tol`` times the largest one.

    Parameters
    ----------
    matrix : np.ndarray
        Any two-dimensional array.
    rel_tol : float
        Relative cut-off (default ``RANK_TOLERANCE``).

    Returns
    -------
    int
        The numerical rank; ``0`` for the zero matrix.
    """
    values = singular_values(matrix)
    if not values.size or values[0] == 0.0:
        return 0
    return int(np.count_nonzero(values > rel_tol * values[0]))


def kernel_basis(matrix: np.ndarray, rel_tol: float = RANK_TOLERANCE) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical null space, using the same relative cut as `numerical_rank`."""
    cols = matrix.shape[1]
    if cols == 0:
        return np.zeros((0, 0), dtype=complex)
    if matrix.shape[0] == 0 or not np.any(matrix):
        return np.eye(cols, dtype=complex)
    return linalg.null_space(matrix, rcond=rel_tol)


def hermitian_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix, with round-off negatives clipped to zero."""
    if matrix.size == 0:
        return np.zeros(0)
    return np.clip(linalg.eigvalsh(matrix), 0.0, None)


def pseudo_inverse(matrix: np.ndarray) -> np.ndarray:
    """SVD-based Moore-Penrose inverse."""
    if matrix.size == 0:
        return np.zeros((matrix.shape[1], matrix.shape[0]), dtype=complex)
    return linalg.pinv(matrix)
