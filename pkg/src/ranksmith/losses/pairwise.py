"""Pairwise quantities shared by the smooth objectives, for every query of a batch at once."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import expit

from ranksmith.core.vectors import as_matrix, row_norms
from ranksmith.errors import DomainError, UsageError
from ranksmith.logging import logger

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

MIN_BATCH_SIZE = 2


@dataclass(frozen=True)
class BatchGeometry:
    """Normalised embeddings and their similarity matrix."""

    unit: NDArray[np.float64]
    norms: NDArray[np.float64]
    similarities: NDArray[np.float64]

    @staticmethod
    def of(embeddings: ArrayLike, years: ArrayLike) -> tuple[BatchGeometry, NDArray[np.int64]]:
        """
        Validate a batch and compute its geometry.

        :raises UsageError: For batches smaller than two or mismatched years.
        """
        matrix = as_matrix(embeddings)
        year_array = np.asarray(years, dtype=np.int64)
        if matrix.shape[0] < MIN_BATCH_SIZE:
            msg = f"A batch needs at least {MIN_BATCH_SIZE} items, got {matrix.shape[0]}."
            raise UsageError(msg)
        if year_array.shape != (matrix.shape[0],):
            msg = f"Expected {matrix.shape[0]} years, got shape {year_array.shape}."
            raise UsageError(msg)

        norms = row_norms(matrix)
        unit = matrix / norms[:, None]
        return BatchGeometry(unit=unit, norms=norms, similarities=unit @ unit.T), year_array

    def embedding_gradient(self, dloss_dsim: NDArray[np.float64]) -> NDArray[np.float64]:
        """
        Chain a gradient with respect to the similarity matrix into the raw embeddings.

        Each item receives contributions from both its query row and its candidate column.
        """
        symmetric = dloss_dsim + dloss_dsim.T
        weighted_sum = symmetric @ self.unit
        radial = (symmetric * self.similarities).sum(axis=1)
        return (weighted_sum - radial[:, None] * self.unit) / self.norms[:, None]


@dataclass(frozen=True)
class PairwiseTerms:
    """
    Sigmoid terms G(s_qj - s_qi) for query q, candidate i and competitor j.

    Entries with i == q, j == q or i == j are zero, so a query never ranks itself and an item
    never competes with itself.
    """

    candidate_mask: NDArray[np.bool_]
    sigmoid: NDArray[np.float64]
    sigmoid_slope: NDArray[np.float64]

    @staticmethod
    def of(similarities: NDArray[np.float64], tau: float) -> PairwiseTerms:
        """Compute the terms for a square similarity matrix."""
        size = similarities.shape[0]
        identity = np.eye(size, dtype=bool)
        candidate_mask = ~identity
        mask = candidate_mask[:, :, None] & candidate_mask[:, None, :] & ~identity[None, :, :]

        gaps = similarities[:, None, :] - similarities[:, :, None]
        raw = expit(gaps / tau)
        return PairwiseTerms(
            candidate_mask=candidate_mask,
            sigmoid=np.where(mask, raw, 0.0),
            sigmoid_slope=np.where(mask, raw * (1.0 - raw) / tau, 0.0),
        )

    def similarity_gradient(self, dmetric_dsigmoid: NDArray[np.float64]) -> NDArray[np.float64]:
        """
        Chain d(metric_q)/dG[q, i, j] into d(metric_q)/ds[q, k].

        G[q, i, j] rises with s_qj and falls with s_qi.
        """
        flow = dmetric_dsigmoid * self.sigmoid_slope
        return flow.sum(axis=1) - flow.sum(axis=2)


def finish_batch(
    *,
    name: str,
    metric: NDArray[np.float64],
    dmetric_dsim: NDArray[np.float64],
    evaluated: NDArray[np.bool_],
    geometry: BatchGeometry,
) -> tuple[float, NDArray[np.float64], NDArray[np.float64]]:
    """
    Turn per-query metrics into the loss 1 - mean(metric) and its embedding gradient.

    :raises DomainError: If no query of the batch could be evaluated.
    """
    n_evaluated = int(evaluated.sum())
    if n_evaluated == 0:
        msg = f"Every query of the batch was skipped for {name}."
        raise DomainError(msg)
    if n_evaluated < evaluated.size:
        logger.debug(f"{name}: skipped {evaluated.size - n_evaluated} of {evaluated.size} queries")

    per_query = np.where(evaluated, 1.0 - metric, 0.0)
    loss = float(per_query[evaluated].sum() / n_evaluated)
    dloss_dsim = np.where(evaluated[:, None], -dmetric_dsim, 0.0) / n_evaluated
    return loss, per_query, geometry.embedding_gradient(dloss_dsim)
