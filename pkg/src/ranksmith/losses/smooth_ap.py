"""Smooth approximation of average precision over all-vs-all batch rankings."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ranksmith.losses.pairwise import BatchGeometry, PairwiseTerms, finish_batch
from ranksmith.losses.types import BatchLossResult, LossConfig

if TYPE_CHECKING:
    from numpy.typing import ArrayLike


def smooth_ap_batch(
    embeddings: ArrayLike,
    years: ArrayLike,
    cfg: LossConfig | None = None,
) -> BatchLossResult:
    """
    Smooth-AP loss, treating every batch item as a query against the others.

    For query q and positive i, the hard ranks among positives and among all candidates are
    replaced by 1 + sum_j G(s_qj - s_qi). Positives are candidates within
    ``cfg.positive_gap`` years of the query. Queries without positives are skipped.

    :param embeddings: Batch embeddings, shape (B, d).
    :param years: Year of each batch item.
    :param cfg: Loss configuration; defaults to exact-year positives and tau 0.01.
    :return: The loss, 1 - mean AP, and its gradient with respect to ``embeddings``.
    """
    config = cfg or LossConfig()
    geometry, year_array = BatchGeometry.of(embeddings, years)
    terms = PairwiseTerms.of(geometry.similarities, config.tau.tau)

    year_gaps = np.abs(year_array[:, None] - year_array[None, :])
    positives = ((year_gaps <= config.positive_gap) & terms.candidate_mask).astype(np.float64)
    n_positives = positives.sum(axis=1)
    evaluated = n_positives > 0
    safe_count = np.where(evaluated, n_positives, 1.0)

    # Smooth rank of i among the positives (numerator) and among all candidates (denominator).
    numerator = 1.0 + np.einsum("qij,qj->qi", terms.sigmoid, positives)
    denominator = 1.0 + terms.sigmoid.sum(axis=2)
    average_precision = (positives * numerator / denominator).sum(axis=1) / safe_count

    scale = positives / safe_count[:, None]
    dap_dsigmoid = scale[:, :, None] * (
        positives[:, None, :] / denominator[:, :, None]
        - (numerator / denominator**2)[:, :, None]
    )
    dap_dsim = terms.similarity_gradient(dap_dsigmoid)

    loss, per_query, gradient = finish_batch(
        name="smooth-AP",
        metric=average_precision,
        dmetric_dsim=dap_dsim,
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
