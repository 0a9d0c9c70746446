"""Year prediction from the years of the nearest support items."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.core.vectors import as_vector, unit_rows
from ranksmith.errors import UsageError
from ranksmith.knn.support_set import ResampledSupport
from ranksmith.logging import logger

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from ranksmith.knn.neighbors import NeighborSearch

DEFAULT_K = 10
DEFAULT_CHUNK_SIZE = 512


@dataclass(frozen=True)
class Prediction:
    """A predicted year and the neighbours it came from, most similar first."""

    year: int
    neighbor_ids: tuple[int, ...]
    neighbor_similarities: tuple[float, ...]
    k_clamped: bool = False
    """Fewer neighbours than requested were available."""
    weighted_fallback: bool = False
    """The similarity weights summed to zero and the unweighted mean was used."""


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves upwards."""
    return math.floor(value + 0.5)


def mean_year(years: NDArray[np.int64]) -> int:
    """Arithmetic mean of integer years, rounded half-up without floating point error."""
    total = int(years.sum())
    count = int(years.size)
    return (2 * total + count) // (2 * count)


def weighted_mean_year(
    years: NDArray[np.int64],
    similarities: NDArray[np.float64],
) -> tuple[int, bool]:
    """
    Similarity-weighted mean year, rounded half-up.

    Negative similarities carry no weight. When no weight remains the unweighted mean is
    used instead, reported by the returned flag.
    """
    weights = np.maximum(similarities, 0.0)
    total = math.fsum(weights)
    if total <= 0:
        return mean_year(years), True
    return round_half_up(math.fsum(weights * years) / total), False


def _predict_from(
    search: NeighborSearch,
    positions: NDArray[np.int64],
    similarities: NDArray[np.float64],
    *,
    weighted: bool,
    k_clamped: bool,
) -> Prediction:
    years = search.years[positions]
    fallback = False
    if weighted:
        year, fallback = weighted_mean_year(years, similarities)
    else:
        year = mean_year(years)
    return Prediction(
        year=year,
        neighbor_ids=tuple(search.ids[positions].tolist()),
        neighbor_similarities=tuple(similarities.tolist()),
        k_clamped=k_clamped,
        weighted_fallback=fallback,
    )


def _check_k(k: int, available: int) -> bool:
    if k < 1:
        msg = f"k must be at least 1, got {k}."
        raise UsageError(msg)
    return k > available


def _predict_one(query: ArrayLike, search: NeighborSearch, k: int, *, weighted: bool) -> Prediction:
    unit = unit_rows(as_vector(query)[None, :])
    clamped = _check_k(k, len(search))
    if clamped:
        logger.warning(
            f"k={k} exceeds the support size {len(search)}; using {len(search)} neighbours.",
        )
    positions, similarities = search.search(unit, k)
    prediction = _predict_from(
        search,
        positions[0],
        similarities[0],
        weighted=weighted,
        k_clamped=clamped,
    )
    if prediction.weighted_fallback:
        logger.warning("Neighbour similarities sum to zero; using the unweighted mean.")
    return prediction


def knn_predict(query: ArrayLike, support: NeighborSearch, k: int = DEFAULT_K) -> Prediction:
    """
    Predict a year as the mean year of the ``k`` most similar support items, rounded half-up.

    A ``k`` above the support size is clamped and flagged.
    """
    return _predict_one(query, support, k, weighted=False)


def weighted_knn_predict(
    query: ArrayLike,
    support: NeighborSearch,
    k: int = DEFAULT_K,
) -> Prediction:
    """Predict a year as the similarity-weighted mean year of the ``k`` nearest items."""
    return _predict_one(query, support, k, weighted=True)


def predict_many(  # noqa: PLR0913
    queries: ArrayLike,
    support: NeighborSearch | ResampledSupport,
    k: int = DEFAULT_K,
    *,
    weighted: bool = False,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> list[Prediction]:
    """
    Predict a year for every query row, in order.

    Queries are scanned in chunks, fanned out over ``threads`` workers; the result does not
    depend on the thread count.
    """
    query_units = unit_rows(queries)

    def predict_chunk(start: int) -> list[Prediction]:
        block = query_units[start : start + chunk_size]
        if isinstance(support, ResampledSupport):
            predictions = []
            for offset, row in enumerate(block):
                resampled = support.support_for(start + offset)
                clamped = _check_k(k, len(resampled))
                positions, similarities = resampled.search(row[None, :], k)
                predictions.append(
                    _predict_from(
                        resampled,
                        positions[0],
                        similarities[0],
                        weighted=weighted,
                        k_clamped=clamped,
                    ),
                )
            return predictions

        clamped = _check_k(k, len(support))
        positions, similarities = support.search(block, k)
        return [
            _predict_from(support, row, sims, weighted=weighted, k_clamped=clamped)
            for row, sims in zip(positions, similarities, strict=True)
        ]

    starts = range(0, query_units.shape[0], chunk_size)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            chunks = list(executor.map(predict_chunk, starts))
    else:
        chunks = [predict_chunk(start) for start in starts]
    predictions = [prediction for chunk in chunks for prediction in chunk]

    clamped_count = sum(prediction.k_clamped for prediction in predictions)
    fallback_count = sum(prediction.weighted_fallback for prediction in predictions)
    if clamped_count:
        logger.warning(f"k={k} exceeded the support size for {clamped_count} predictions.")
    if fallback_count:
        logger.warning(
            f"{fallback_count} weighted predictions fell back to the unweighted mean.",
        )
    return predictions
