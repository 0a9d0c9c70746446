"""Year-labelled items and the columnar collection that holds them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import polars as pl

from ranksmith.errors import DataValidationError

if TYPE_CHECKING:
    from collections.abc import Iterator

    from numpy.typing import ArrayLike, NDArray

DEFAULT_YEAR_SPAN = (1930, 1999)


@dataclass(frozen=True)
class YearSpan:
    """An inclusive range of integer years."""

    start: int
    end: int

    def __post_init__(self) -> None:
        """Validate the span."""
        if self.end < self.start:
            msg = f"Year span end {self.end} is before its start {self.start}."
            raise DataValidationError(msg)

    @staticmethod
    def parse(text: str) -> YearSpan:
        """Parse "START:END"."""
        start, sep, end = text.partition(":")
        if not sep:
            msg = f"Expected a year span as START:END, got '{text}'."
            raise DataValidationError(msg)
        return YearSpan(int(start), int(end))

    @property
    def years(self) -> list[int]:
        """Every year in the span, in order."""
        return list(range(self.start, self.end + 1))

    def __len__(self) -> int:
        """Number of years in the span."""
        return self.end - self.start + 1

    def __contains__(self, year: object) -> bool:
        """Whether a year lies within the span."""
        return isinstance(year, int | np.integer) and self.start <= int(year) <= self.end


DEFAULT_SPAN = YearSpan(*DEFAULT_YEAR_SPAN)


@dataclass(frozen=True)
class LabeledItem:
    """A single item: id, year label, features and, once encoded, an embedding."""

    id: int
    year: int
    features: NDArray[np.float64]
    embedding: NDArray[np.float64] | None = None


class ItemSet:
    """
    An immutable collection of labelled items stored column-wise.

    Rows keep their insertion order; ids are unique.
    """

    def __init__(
        self,
        ids: ArrayLike,
        years: ArrayLike,
        features: ArrayLike,
        embeddings: ArrayLike | None = None,
    ) -> None:
        """
        Initialize the collection, validating the shared invariants.

        :param ids: Unique integer ids.
        :param years: Integer year labels.
        :param features: Feature vectors, shape (n, d_in).
        :param embeddings: Optional embeddings, shape (n, d_out).
        :raises DataValidationError: For duplicate ids, mismatched lengths or
            non-finite features.
        """
        self.ids = np.array(ids, dtype=np.int64).reshape(-1)
        self.years = np.array(years, dtype=np.int64).reshape(-1)
        self.features = np.array(features, dtype=np.float64)
        if self.features.ndim == 1 and self.features.size == 0:
            self.features = self.features.reshape(0, 0)
        self.embeddings = None if embeddings is None else np.asarray(embeddings, np.float64)

        n = self.ids.size
        if self.years.size != n or self.features.ndim != 2 or self.features.shape[0] != n:  # noqa: PLR2004
            msg = (
                f"Inconsistent item columns: {n} ids, {self.years.size} years, "
                f"features of shape {self.features.shape}."
            )
            raise DataValidationError(msg)
        if self.embeddings is not None and self.embeddings.shape[0] != n:
            msg = f"Expected {n} embeddings, got {self.embeddings.shape[0]}."
            raise DataValidationError(msg)

        unique_ids, counts = np.unique(self.ids, return_counts=True)
        if np.any(counts > 1):
            duplicates = unique_ids[counts > 1][:10].tolist()
            msg = f"Duplicate item ids: {duplicates}"
            raise DataValidationError(msg)

        non_finite = ~np.all(np.isfinite(self.features), axis=1)
        if non_finite.any():
            msg = f"Non-finite features for ids {self.ids[non_finite][:10].tolist()}"
            raise DataValidationError(msg)

        self.features.setflags(write=False)
        self.ids.setflags(write=False)
        self.years.setflags(write=False)

    @staticmethod
    def empty(dim: int) -> ItemSet:
        """A collection with no items and ``dim`` feature columns."""
        return ItemSet(
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty((0, dim)),
        )

    @property
    def dim(self) -> int:
        """Dimension of the feature vectors."""
        return int(self.features.shape[1])

    def __len__(self) -> int:
        """Number of items."""
        return int(self.ids.size)

    def __iter__(self) -> Iterator[LabeledItem]:
        """Iterate over the items."""
        for position in range(len(self)):
            yield self[position]

    def __getitem__(self, position: int) -> LabeledItem:
        """The item at a row position."""
        return LabeledItem(
            id=int(self.ids[position]),
            year=int(self.years[position]),
            features=self.features[position],
            embedding=None if self.embeddings is None else self.embeddings[position],
        )

    def __eq__(self, other: object) -> bool:
        """Items compare equal when every column is equal."""
        if not isinstance(other, ItemSet):
            return NotImplemented
        return (
            np.array_equal(self.ids, other.ids)
            and np.array_equal(self.years, other.years)
            and self.features.shape == other.features.shape
            and np.array_equal(self.features, other.features)
        )

    __hash__ = None  # type: ignore[assignment]

    def subset(self, positions: ArrayLike) -> ItemSet:
        """The items at the given row positions, in that order."""
        index = np.asarray(positions, dtype=np.int64)
        return ItemSet(
            self.ids[index],
            self.years[index],
            self.features[index],
            None if self.embeddings is None else self.embeddings[index],
        )

    def with_embeddings(self, embeddings: ArrayLike) -> ItemSet:
        """A copy of the collection carrying the given embeddings."""
        return ItemSet(self.ids, self.years, self.features, embeddings)

    def sorted_by_id(self) -> ItemSet:
        """The same items ordered by ascending id."""
        return self.subset(np.argsort(self.ids, kind="stable"))

    def positions_of(self, ids: ArrayLike) -> NDArray[np.int64]:
        """
        Row positions of the given ids.

        :raises DataValidationError: If an id is not in the collection.
        """
        wanted = np.asarray(ids, dtype=np.int64)
        order = np.argsort(self.ids, kind="stable")
        found = np.searchsorted(self.ids, wanted, sorter=order)
        found = np.minimum(found, max(len(self) - 1, 0))
        positions = order[found] if len(self) else np.empty(0, dtype=np.int64)
        if len(self) == 0 or np.any(self.ids[positions] != wanted):
            missing = np.setdiff1d(wanted, self.ids)[:10].tolist()
            msg = f"Unknown item ids: {missing}"
            raise DataValidationError(msg)
        return positions

    def validate_years(self, span: YearSpan) -> None:
        """
        Check that every year lies within ``span``.

        :raises DataValidationError: Naming the offending ids.
        """
        outside = (self.years < span.start) | (self.years > span.end)
        if outside.any():
            offenders = ", ".join(
                f"id {item_id} (year {year})"
                for item_id, year in zip(
                    self.ids[outside][:20].tolist(), self.years[outside][:20].tolist(), strict=True
                )
            )
            msg = (
                f"{int(outside.sum())} items have years outside "
                f"{span.start}-{span.end}: {offenders}"
            )
            raise DataValidationError(msg)

    def year_span(self) -> YearSpan:
        """The smallest span covering every year in the collection."""
        if len(self) == 0:
            msg = "An empty collection has no year span."
            raise DataValidationError(msg)
        return YearSpan(int(self.years.min()), int(self.years.max()))

    def to_frame(self) -> pl.DataFrame:
        """The items as a frame with columns id, year, f0, ..., f{d-1}."""
        return pl.DataFrame(
            {
                "id": self.ids,
                "year": self.years,
                **{f"f{column}": self.features[:, column] for column in range(self.dim)},
            },
        )
