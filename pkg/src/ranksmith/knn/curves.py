"""Prediction error as a function of the number of neighbours."""

from __future__ import annotations

from typing import IO, TYPE_CHECKING

import numpy as np
import polars as pl

from ranksmith.core.vectors import unit_rows
from ranksmith.errors import UsageError
from ranksmith.knn.predictor import mean_year, weighted_mean_year
from ranksmith.metrics.regression import mean_absolute_error

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ranksmith.data.labeled_item import ItemSet
    from ranksmith.knn.neighbors import NeighborSearch

type Curve = list[tuple[int, float]]


def mae_vs_k_curve(
    queries: ItemSet,
    support: NeighborSearch,
    ks: Sequence[int],
    *,
    weighted: bool = False,
) -> Curve:
    """
    MAE of the k-NN prediction for every k in ``ks``, in the given order.

    The neighbours are searched once for the largest k; each k uses a prefix of them, so an
    entry does not depend on the other ks. Queries are not removed from the support.
    """
    if len(queries) == 0 or not ks:
        msg = "A curve needs at least one query and one k."
        raise UsageError(msg)
    if queries.embeddings is None:
        msg = "Curve queries must carry embeddings."
        raise UsageError(msg)
    if min(ks) < 1:
        msg = f"Every k must be at least 1, got {list(ks)}."
        raise UsageError(msg)

    positions, similarities = support.search(unit_rows(queries.embeddings), max(ks))
    neighbor_years = support.years[positions]

    curve: Curve = []
    for k in ks:
        if weighted:
            predicted = [
                weighted_mean_year(years[:k], sims[:k])[0]
                for years, sims in zip(neighbor_years, similarities, strict=True)
            ]
        else:
            predicted = [mean_year(years[:k]) for years in neighbor_years]
        curve.append((k, mean_absolute_error(np.asarray(predicted), queries.years)))
    return curve


def write_curve_csv(curve: Curve, target: str | IO[bytes]) -> None:
    """Write the curve as CSV with the header "k,mae"."""
    pl.DataFrame(
        {"k": [k for k, _ in curve], "mae": [mae for _, mae in curve]},
        schema={"k": pl.Int64, "mae": pl.Float64},
    ).write_csv(target)
