"""Smooth approximation of nDCG over all-vs-all batch rankings."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ranksmith.losses.pairwise import BatchGeometry, PairwiseTerms, finish_batch
from ranksmith.losses.types import BatchLossResult, LossConfig
from ranksmith.relevance import relevance_matrix

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray


def ideal_dcg_per_query(relevance: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Ideal DCG of each query row, ignoring the diagonal (the query itself).

    The ideal ordering depends only on ground-truth years, so it is a constant for the
    gradient.
    """
    size = relevance.shape[0]
    off_diagonal = relevance[~np.eye(size, dtype=bool)].reshape(size, size - 1)
    ideal = -np.sort(-off_diagonal, axis=1)
    discounts = 1.0 / np.log2(np.arange(2, size + 1, dtype=np.float64))
    return ideal @ discounts


def smooth_ndcg_batch(
    embeddings: ArrayLike,
    years: ArrayLike,
    cfg: LossConfig | None = None,
) -> BatchLossResult:
    """
    Smooth-nDCG loss, treating every batch item as a query against the others.

    The position of candidate i in the DCG discount becomes 2 + sum_j G(s_qj - s_qi), while
    the normaliser uses the exact ideal ordering. Queries whose candidates all have zero
    relevance are skipped.

    :param embeddings: Batch embeddings, shape (B, d).
    :param years: Year of each batch item.
    :param cfg: Loss configuration; defaults to clipped linear relevance, gamma 10, tau 0.01.
    :return: The loss, 1 - mean nDCG, and its gradient with respect to ``embeddings``.
    """
    config = cfg or LossConfig()

    geometry, year_array = BatchGeometry.of(embeddings, years)
    terms = PairwiseTerms.of(geometry.similarities, config.tau.tau)

    relevance = relevance_matrix(config.relevance, year_array, year_array)
    relevance = np.where(terms.candidate_mask, relevance, 0.0)
    ideal = ideal_dcg_per_query(relevance)
    evaluated = ideal > 0
    safe_ideal = np.where(evaluated, ideal, 1.0)

    competitors = terms.sigmoid.sum(axis=2)
    log_position = np.log2(2.0 + competitors)
    smooth_dcg = (relevance / log_position).sum(axis=1)
    smooth_ndcg = smooth_dcg / safe_ideal

    dndcg_dcompetitors = -relevance / (
        (2.0 + competitors) * np.log(2.0) * log_position**2 * safe_ideal[:, None]
    )
    dndcg_dsim = terms.similarity_gradient(
        np.broadcast_to(dndcg_dcompetitors[:, :, None], terms.sigmoid.shape),
    )

    loss, per_query, gradient = finish_batch(
        name="smooth-nDCG",
        metric=smooth_ndcg,
        dmetric_dsim=dndcg_dsim,
        evaluated=evaluated,
        geometry=geometry,
    )
    return BatchLossResult(
        loss=loss,
        per_query=per_query,
        gradient=gradient,
        evaluated=evaluated,
        similarities=geometry.similarities,
    )
