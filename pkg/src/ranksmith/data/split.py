"""Deterministic train, validation and test splits, optionally balanced across years."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import DataValidationError, UsageError
from ranksmith.logging import logger

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from ranksmith.data.labeled_item import ItemSet, YearSpan

_FRACTION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SplitConfig:
    """
    How to split a collection.

    ``fractions`` are the train, validation and test shares. In balanced mode validation and
    test draw the same number of items from every year of the span; the per-year counts
    default to floor(fraction * N / number of years) and the rest goes to train.
    """

    fractions: tuple[float, float, float] = (1.0, 0.0, 0.0)
    seed: int = 0
    balanced: bool = False
    val_per_year: int | None = None
    test_per_year: int | None = None
    span: YearSpan | None = None
    """The years balanced splits cover. Defaults to the span of the items."""

    def __post_init__(self) -> None:
        """Validate the fractions and per-year counts."""
        if len(self.fractions) != 3 or any(share < 0 for share in self.fractions):  # noqa: PLR2004
            msg = f"Expected three non-negative fractions, got {self.fractions}."
            raise UsageError(msg)
        total = math.fsum(self.fractions)
        if total <= 0 or total > 1 + _FRACTION_TOLERANCE:
            msg = f"Fractions must sum to a value in (0, 1], got {total}."
            raise UsageError(msg)
        for name in ("val_per_year", "test_per_year"):
            value = getattr(self, name)
            if value is not None and value < 0:
                msg = f"{name} must be non-negative, got {value}."
                raise UsageError(msg)


def _per_year(explicit: int | None, fraction: float, n_items: int, n_years: int) -> int:
    if explicit is not None:
        return explicit
    return math.floor(fraction * n_items / n_years)


def _balanced_positions(
    items: ItemSet,
    config: SplitConfig,
    rng: np.random.Generator,
) -> tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.int64]]:
    span = config.span or items.year_span()
    _, val_fraction, test_fraction = config.fractions
    val_count = _per_year(config.val_per_year, val_fraction, len(items), len(span))
    test_count = _per_year(config.test_per_year, test_fraction, len(items), len(span))

    val: list[NDArray[np.int64]] = []
    test: list[NDArray[np.int64]] = []
    for year in span.years:
        of_year = np.flatnonzero(items.years == year)
        if of_year.size < val_count + test_count:
            msg = (
                f"Year {year} has {of_year.size} items, fewer than the {test_count} test and "
                f"{val_count} validation items a balanced split needs."
            )
            raise DataValidationError(msg)
        shuffled = rng.permutation(of_year)
        test.append(shuffled[:test_count])
        val.append(shuffled[test_count : test_count + val_count])

    held_out = np.concatenate([*val, *test]) if val or test else np.empty(0, np.int64)
    remaining = rng.permutation(np.setdiff1d(np.arange(len(items)), held_out))
    train = remaining[: math.floor(config.fractions[0] * len(items) + _FRACTION_TOLERANCE)]
    return train, np.concatenate(val), np.concatenate(test)


def _random_positions(
    items: ItemSet,
    config: SplitConfig,
    rng: np.random.Generator,
) -> tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.int64]]:
    n = len(items)
    train_count, val_count, test_count = (
        math.floor(share * n + _FRACTION_TOLERANCE) for share in config.fractions
    )
    order = rng.permutation(n)
    test = order[:test_count]
    val = order[test_count : test_count + val_count]
    train = order[test_count + val_count :][:train_count]
    return train, val, test


def split(items: ItemSet, config: SplitConfig) -> tuple[ItemSet, ItemSet, ItemSet]:
    """
    Split ``items`` into disjoint train, validation and test collections.

    The result depends only on the items and the config, not on the order the items
    arrive in. Each returned collection is sorted by id.

    :raises DataValidationError: If a balanced split is infeasible, naming the year.
    """
    ordered = items.sorted_by_id()
    rng = np.random.default_rng(config.seed)
    if config.balanced:
        positions = _balanced_positions(ordered, config, rng)
    else:
        positions = _random_positions(ordered, config, rng)

    train, val, test = (ordered.subset(np.sort(part)) for part in positions)
    logger.info(
        f"Split {len(items)} items into {len(train)} train, {len(val)} validation "
        f"and {len(test)} test",
        extra={"balanced": config.balanced, "seed": config.seed},
    )
    return train, val, test
