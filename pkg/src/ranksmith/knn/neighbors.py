"""Exact top-k selection with deterministic tie breaking."""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import NDArray


class NeighborSearch(Protocol):
    """Something that finds the most similar support items for a block of unit queries."""

    ids: NDArray[np.int64]
    years: NDArray[np.int64]

    def __len__(self) -> int:
        """Number of searchable items."""
        ...

    def search(
        self,
        query_units: NDArray[np.float64],
        k: int,
    ) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
        """Return the positions and similarities of the top ``k`` items for each query row."""
        ...


def top_k(
    similarities: NDArray[np.float64],
    k: int,
    candidates: NDArray[np.int64] | None = None,
) -> NDArray[np.int64]:
    """
    Positions of the ``k`` highest similarities, best first.

    Equal similarities are ordered by ascending position, which is ascending id for a support
    sorted by id.

    :param similarities: One similarity per candidate.
    :param k: How many to keep; at most the number of candidates.
    :param candidates: The positions the similarities belong to. Defaults to 0..n-1.
    """
    positions = np.arange(similarities.size) if candidates is None else candidates
    if k < similarities.size:
        partitioned = np.argpartition(-similarities, k - 1)[:k]
        threshold = similarities[partitioned].min()
        above = np.flatnonzero(similarities > threshold)
        tied = np.flatnonzero(similarities == threshold)
        tied = tied[np.argsort(positions[tied], kind="stable")][: k - above.size]
        chosen = np.concatenate([above, tied])
    else:
        chosen = np.arange(similarities.size)
    order = np.lexsort((positions[chosen], -similarities[chosen]))
    return positions[chosen[order]]
