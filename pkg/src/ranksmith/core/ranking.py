"""The ranking function and its sigmoid relaxation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import expit

from ranksmith.errors import UsageError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

DEFAULT_TAU = 0.01


@dataclass(frozen=True)
class Temperature:
    """Sharpness of the sigmoid that replaces the ranking indicator."""

    tau: float = DEFAULT_TAU

    def __post_init__(self) -> None:
        """Validate the temperature."""
        if not np.isfinite(self.tau) or self.tau <= 0:
            msg = f"Temperature must be positive, got {self.tau}."
            raise UsageError(msg)


def _tau_of(tau: Temperature | float) -> float:
    return tau.tau if isinstance(tau, Temperature) else Temperature(float(tau)).tau


@dataclass(frozen=True)
class SimilarityRow:
    """Similarities of one query against its candidates; the query itself is never a candidate."""

    query_index: int
    scores: NDArray[np.float64]
    candidate_indices: NDArray[np.int64]

    def __post_init__(self) -> None:
        """Validate the row."""
        if self.scores.shape != self.candidate_indices.shape or self.scores.ndim != 1:
            msg = (
                f"Scores and candidates must be 1-D and equal length, got "
                f"{self.scores.shape} and {self.candidate_indices.shape}."
            )
            raise UsageError(msg)
        if not np.all(np.isfinite(self.scores)):
            msg = "Similarity scores must be finite."
            raise UsageError(msg)
        if np.any(self.candidate_indices == self.query_index):
            msg = f"Query {self.query_index} cannot be one of its own candidates."
            raise UsageError(msg)

    @staticmethod
    def create(
        scores: ArrayLike,
        candidate_indices: ArrayLike | None = None,
        query_index: int = -1,
    ) -> SimilarityRow:
        """Build a row, numbering candidates from zero when no indices are given."""
        score_array = np.asarray(scores, dtype=np.float64)
        indices = (
            np.arange(score_array.size, dtype=np.int64)
            if candidate_indices is None
            else np.asarray(candidate_indices, dtype=np.int64)
        )
        return SimilarityRow(query_index=query_index, scores=score_array, candidate_indices=indices)

    @staticmethod
    def from_matrix(similarities: NDArray[np.float64], query_index: int) -> SimilarityRow:
        """Take row ``query_index`` of a square similarity matrix, dropping the self-pair."""
        n = similarities.shape[0]
        candidates = np.array([i for i in range(n) if i != query_index], dtype=np.int64)
        return SimilarityRow(
            query_index=query_index,
            scores=similarities[query_index, candidates],
            candidate_indices=candidates,
        )

    def position_of(self, candidate_index: int) -> int:
        """
        Locate a candidate within the row.

        :raises UsageError: If the index is not a candidate of this row.
        """
        positions = np.flatnonzero(self.candidate_indices == candidate_index)
        if positions.size == 0:
            msg = f"Index {candidate_index} is not a candidate of query {self.query_index}."
            raise UsageError(msg)
        return int(positions[0])


def smooth_indicator(x: ArrayLike, tau: Temperature | float) -> NDArray[np.float64] | float:
    """
    Sigmoid relaxation of the step function, 1 / (1 + exp(-x / tau)).

    Saturates to 0 or 1 in floating point far from zero.
    """
    result = expit(np.asarray(x, dtype=np.float64) / _tau_of(tau))
    return float(result) if np.ndim(result) == 0 else result


def hard_rank(candidate_index: int, row: SimilarityRow) -> int:
    """
    Return 1 plus the number of candidates with a strictly higher score.

    Tied candidates share the better rank.
    """
    position = row.position_of(candidate_index)
    return 1 + int(np.count_nonzero(row.scores > row.scores[position]))


def smooth_rank(candidate_index: int, row: SimilarityRow, tau: Temperature | float) -> float:
    """
    Return 1 plus the sum of G(s_j - s_i) over the other candidates.

    A competitor with a higher score pushes the rank of ``candidate_index`` up, so the
    limit of small temperatures recovers the hard rank with ties averaged.
    """
    position = row.position_of(candidate_index)
    others = np.delete(row.scores, position)
    gaps = others - row.scores[position]
    return 1.0 + float(np.sum(expit(gaps / _tau_of(tau))))
