"""Ranked retrieval results for a single query."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import UsageError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike, NDArray


@dataclass(frozen=True)
class RankedList:
    """
    The items retrieved for a query, best first, with the relevance of each.

    ``positives`` is the set of items counted as relevant by average precision.
    """

    query_id: int
    ordered_items: tuple[int, ...]
    relevance: NDArray[np.float64]
    positives: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        """Validate the list."""
        if len(set(self.ordered_items)) != len(self.ordered_items):
            msg = f"Ranked list for query {self.query_id} contains duplicate items."
            raise UsageError(msg)
        if self.relevance.shape != (len(self.ordered_items),):
            msg = (
                f"Expected {len(self.ordered_items)} relevance values for query "
                f"{self.query_id}, got shape {self.relevance.shape}."
            )
            raise UsageError(msg)
        if not np.all(np.isfinite(self.relevance)) or np.any(self.relevance < 0):
            msg = f"Relevance for query {self.query_id} must be finite and non-negative."
            raise UsageError(msg)

    @staticmethod
    def create(
        relevance: ArrayLike,
        *,
        query_id: int = -1,
        ordered_items: Iterable[int] | None = None,
        positives: Iterable[int] | None = None,
    ) -> RankedList:
        """
        Build a list from relevance values given in retrieved order.

        Items are numbered from zero when not given. Without explicit positives, every item
        with non-zero relevance is a positive.
        """
        values = np.asarray(relevance, dtype=np.float64)
        items = (
            tuple(range(values.size))
            if ordered_items is None
            else tuple(int(item) for item in ordered_items)
        )
        chosen_positives = (
            frozenset(item for item, value in zip(items, values, strict=False) if value > 0)
            if positives is None
            else frozenset(int(item) for item in positives)
        )
        return RankedList(
            query_id=query_id,
            ordered_items=items,
            relevance=values,
            positives=chosen_positives,
        )


def rank_candidates(  # noqa: PLR0913
    *,
    query_id: int,
    candidate_ids: NDArray[np.int64],
    similarities: NDArray[np.float64],
    relevance: NDArray[np.float64],
    positive_mask: NDArray[np.bool_] | None = None,
) -> RankedList:
    """
    Order candidates by descending similarity, breaking ties by ascending id.

    :param query_id: The id of the query.
    :param candidate_ids: Ids of the candidates, excluding the query.
    :param similarities: Similarity of each candidate to the query.
    :param relevance: Graded relevance of each candidate.
    :param positive_mask: Which candidates are positives for average precision.
    :return: The ranked list.
    """
    order = np.lexsort((candidate_ids, -similarities))
    ordered_ids = candidate_ids[order]
    positives = (
        frozenset()
        if positive_mask is None
        else frozenset(int(item) for item in ordered_ids[positive_mask[order]])
    )
    return RankedList(
        query_id=query_id,
        ordered_items=tuple(int(item) for item in ordered_ids),
        relevance=relevance[order],
        positives=positives,
    )
