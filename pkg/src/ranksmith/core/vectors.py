"""Vector validation and cosine similarity."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import DomainError, UsageError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import ArrayLike, NDArray

type Vector = NDArray[np.float64]
type Matrix = NDArray[np.float64]


def as_vector(values: ArrayLike | Sequence[float]) -> Vector:
    """
    Convert values into a validated float64 vector.

    :param values: A one dimensional sequence of finite reals.
    :return: The values as a float64 ndarray.
    :raises UsageError: If the input is not one dimensional, is empty or is not finite.
    """
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim != 1 or vector.size == 0:
        msg = f"Expected a non-empty 1-D vector, got shape {vector.shape}."
        raise UsageError(msg)
    if not np.all(np.isfinite(vector)):
        msg = "Vector contains non-finite entries."
        raise UsageError(msg)
    return vector


def as_matrix(values: ArrayLike) -> Matrix:
    """Convert values into a validated, finite, float64 matrix of row vectors."""
    matrix = np.asarray(values, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] == 0:  # noqa: PLR2004
        msg = f"Expected a 2-D matrix of row vectors, got shape {matrix.shape}."
        raise UsageError(msg)
    if not np.all(np.isfinite(matrix)):
        msg = "Matrix contains non-finite entries."
        raise UsageError(msg)
    return matrix


def cosine_similarity(a: ArrayLike, b: ArrayLike) -> float:
    """
    Compute the cosine similarity between two vectors.

    :param a: The first vector.
    :param b: The second vector.
    :return: a.b / (|a| |b|), clipped to [-1, 1].
    :raises UsageError: If the dimensions differ.
    :raises DomainError: If either vector has zero norm.
    """
    va = as_vector(a)
    vb = as_vector(b)
    if va.shape != vb.shape:
        msg = f"Dimension mismatch: {va.size} != {vb.size}."
        raise UsageError(msg)

    norm_a = float(np.linalg.norm(va))
    norm_b = float(np.linalg.norm(vb))
    if norm_a == 0.0 or norm_b == 0.0:
        msg = "Cosine similarity is undefined for zero-norm vectors."
        raise DomainError(msg)

    return float(np.clip(np.dot(va, vb) / (norm_a * norm_b), -1.0, 1.0))


def row_norms(matrix: Matrix) -> Vector:
    """
    Return the Euclidean norm of each row, rejecting zero rows.

    :raises DomainError: If any row has zero norm.
    """
    norms = np.linalg.norm(matrix, axis=1)
    zero_rows = np.flatnonzero(norms == 0.0)
    if zero_rows.size:
        msg = f"Zero-norm rows at positions {zero_rows.tolist()[:10]}."
        raise DomainError(msg)
    return norms


def unit_rows(matrix: ArrayLike) -> Matrix:
    """Return the rows of a matrix scaled to unit norm."""
    validated = as_matrix(matrix)
    return validated / row_norms(validated)[:, None]


def cosine_similarity_matrix(a: ArrayLike, b: ArrayLike | None = None) -> Matrix:
    """
    Compute all pairwise cosine similarities between the rows of two matrices.

    :param a: Row vectors, shape (n, d).
    :param b: Row vectors, shape (m, d). Defaults to ``a``.
    :return: An (n, m) matrix of similarities.
    """
    unit_a = unit_rows(a)
    unit_b = unit_a if b is None else unit_rows(b)
    if unit_a.shape[1] != unit_b.shape[1]:
        msg = f"Dimension mismatch: {unit_a.shape[1]} != {unit_b.shape[1]}."
        raise UsageError(msg)
    return np.clip(unit_a @ unit_b.T, -1.0, 1.0)
