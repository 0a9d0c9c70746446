"""Labelled collections searched for the neighbours of a query."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.core.vectors import unit_rows
from ranksmith.errors import DataValidationError, UsageError
from ranksmith.knn.neighbors import top_k
from ranksmith.logging import logger

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from ranksmith.data.labeled_item import ItemSet


@dataclass(frozen=True)
class FullSource:
    """Every item of the pool is in the support."""


@dataclass(frozen=True)
class RandomSampleSource:
    """A uniform sample of ``n`` items drawn without replacement under ``seed``."""

    n: int
    seed: int


type SupportSource = FullSource | RandomSampleSource


class SupportSet:
    """
    An immutable labelled support, sorted by id, with unit-length embeddings.

    Safe to query from any number of threads.
    """

    def __init__(self, items: ItemSet, source: SupportSource | None = None) -> None:
        """
        Initialize the support.

        :param items: Items carrying embeddings.
        :param source: How the items were selected.
        :raises UsageError: If the items are empty or lack embeddings.
        :raises DomainError: If an embedding has zero norm.
        """
        if len(items) == 0:
            msg = "A support set needs at least one item."
            raise UsageError(msg)
        if items.embeddings is None:
            msg = "Support items must carry embeddings."
            raise UsageError(msg)

        ordered = items.sorted_by_id()
        self.items = ordered
        self.ids = ordered.ids
        self.years = ordered.years
        self.unit = unit_rows(ordered.embeddings)
        self.unit.setflags(write=False)
        self.source: SupportSource = source or FullSource()

    @staticmethod
    def full(items: ItemSet) -> SupportSet:
        """Use every item as support."""
        return SupportSet(items, FullSource())

    @staticmethod
    def random_sample(items: ItemSet, n: int, seed: int) -> SupportSet:
        """Use a uniform sample of ``n`` items; all of them when ``n`` is not smaller."""
        if n < 1:
            msg = f"A support sample needs at least one item, got n={n}."
            raise UsageError(msg)
        ordered = items.sorted_by_id()
        if n >= len(ordered):
            return SupportSet(ordered, RandomSampleSource(n, seed))
        chosen = np.random.default_rng(seed).choice(len(ordered), size=n, replace=False)
        return SupportSet(ordered.subset(np.sort(chosen)), RandomSampleSource(n, seed))

    def __len__(self) -> int:
        """Number of support items."""
        return int(self.ids.size)

    @property
    def dim(self) -> int:
        """Dimension of the embeddings."""
        return int(self.unit.shape[1])

    def search(
        self,
        query_units: NDArray[np.float64],
        k: int,
    ) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
        """Exact scan for the ``k`` most similar items of every query row."""
        if query_units.shape[1] != self.dim:
            msg = f"Query dimension {query_units.shape[1]} does not match support {self.dim}."
            raise UsageError(msg)
        k = min(k, len(self))
        similarities = query_units @ self.unit.T
        positions = np.stack([top_k(row, k) for row in similarities]).reshape(-1, k)
        return positions, np.take_along_axis(similarities, positions, axis=1)


class ResampledSupport:
    """
    A pool from which every prediction draws its own random support of ``n`` items.

    The support for the query at position p depends only on (seed, p).
    """

    def __init__(self, pool: ItemSet, n: int, seed: int) -> None:
        """
        Initialize the pool.

        :raises DataValidationError: If the pool holds fewer than ``n`` items.
        """
        if n < 1 or n > len(pool):
            msg = f"Cannot draw {n} support items from a pool of {len(pool)}."
            raise DataValidationError(msg)
        self.pool = pool.sorted_by_id()
        self.n = n
        self.seed = seed
        logger.debug(f"Resampling {n} of {len(pool)} support items per prediction")

    def support_for(self, position: int) -> SupportSet:
        """The support used for the query at ``position``."""
        rng = np.random.default_rng([self.seed, position])
        chosen = np.sort(rng.choice(len(self.pool), size=self.n, replace=False))
        return SupportSet(self.pool.subset(chosen), RandomSampleSource(self.n, self.seed))
