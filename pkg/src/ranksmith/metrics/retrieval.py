"""Average precision and discounted cumulative gain over ranked lists."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import DomainError, UsageError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from ranksmith.metrics.ranked_list import RankedList


def _position_discounts(n: int) -> NDArray[np.float64]:
    # Positions are 1-based, so position n is discounted by log2(n + 1).
    return 1.0 / np.log2(np.arange(2, n + 2, dtype=np.float64))


def average_precision(ranked: RankedList) -> float:
    """
    Average precision of a ranked list with binary relevance.

    :raises UsageError: If relevance is not binary or disagrees with the positives.
    :raises DomainError: If the list has no positives.
    """
    if not ranked.positives:
        msg = f"Average precision is undefined without positives (query {ranked.query_id})."
        raise DomainError(msg)

    binary = ranked.relevance
    if not np.all((binary == 0) | (binary == 1)):
        msg = f"Average precision requires binary relevance (query {ranked.query_id})."
        raise UsageError(msg)

    expected = np.array([item in ranked.positives for item in ranked.ordered_items])
    if not np.array_equal(expected, binary == 1):
        msg = f"Relevance disagrees with the positive set (query {ranked.query_id})."
        raise UsageError(msg)

    positions = np.arange(1, binary.size + 1, dtype=np.float64)
    precision_at = np.cumsum(binary) / positions
    return math.fsum(precision_at * binary) / len(ranked.positives)


def mean_average_precision(lists: Sequence[RankedList]) -> float:
    """Mean of the per-query average precision."""
    if not lists:
        msg = "Mean average precision needs at least one ranked list."
        raise UsageError(msg)
    return math.fsum(average_precision(ranked) for ranked in lists) / len(lists)


def dcg_of(relevance: NDArray[np.float64]) -> float:
    """Discounted cumulative gain of relevance values given in retrieved order."""
    return math.fsum(relevance * _position_discounts(relevance.size))


def dcg(ranked: RankedList) -> float:
    """Discounted cumulative gain of a ranked list."""
    return dcg_of(ranked.relevance)


def ideal_dcg(ranked: RankedList) -> float:
    """Discounted cumulative gain of the same relevances sorted from most to least relevant."""
    return dcg_of(np.sort(ranked.relevance)[::-1])


def ndcg(ranked: RankedList) -> float:
    """
    Normalized discounted cumulative gain.

    :raises DomainError: If every relevance is zero.
    """
    ideal = ideal_dcg(ranked)
    if ideal == 0.0:
        msg = f"nDCG is undefined when all relevance is zero (query {ranked.query_id})."
        raise DomainError(msg)
    return dcg(ranked) / ideal
