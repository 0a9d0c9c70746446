"""Dispatch to the configured smooth objective."""

from __future__ import annotations

from typing import TYPE_CHECKING

from ranksmith.losses.smooth_ap import smooth_ap_batch
from ranksmith.losses.smooth_ndcg import smooth_ndcg_batch
from ranksmith.losses.types import BatchLossResult, LossConfig, Objective

if TYPE_CHECKING:
    from numpy.typing import ArrayLike


def compute_batch_loss(embeddings: ArrayLike, years: ArrayLike, cfg: LossConfig) -> BatchLossResult:
    """Compute the loss selected by ``cfg.objective`` for one batch."""
    match cfg.objective:
        case Objective.SMOOTH_AP:
            return smooth_ap_batch(embeddings, years, cfg)
        case Objective.SMOOTH_NDCG:
            return smooth_ndcg_batch(embeddings, years, cfg)
