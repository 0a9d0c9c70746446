"""Aggregated retrieval and date estimation metrics over many queries."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.core.vectors import unit_rows
from ranksmith.errors import UsageError
from ranksmith.logging import logger
from ranksmith.metrics.ranked_list import rank_candidates
from ranksmith.metrics.retrieval import average_precision, dcg_of, ndcg
from ranksmith.relevance import RelevanceSpec, relevance_matrix

if TYPE_CHECKING:
    from numpy.typing import NDArray

_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MetricReport:
    """
    Mean metrics over a set of queries.

    Queries whose average precision or nDCG is undefined are left out of that mean and
    counted in ``n_skipped``.
    """

    map: float | None
    ndcg: float | None
    mae: float | None = None
    per_query_ap: tuple[float | None, ...] = field(default=(), repr=False)
    per_query_ndcg: tuple[float | None, ...] = field(default=(), repr=False)
    n_queries: int = 0
    n_skipped: int = 0

    def __post_init__(self) -> None:
        """Validate the ranges of the metrics."""
        for name in ("map", "ndcg"):
            value = getattr(self, name)
            if value is not None and not -_TOLERANCE <= value <= 1 + _TOLERANCE:
                msg = f"{name} must lie in [0, 1], got {value}."
                raise ValueError(msg)
        if self.mae is not None and self.mae < 0:
            msg = f"mae must be non-negative, got {self.mae}."
            raise ValueError(msg)

    def with_mae(self, mae: float) -> MetricReport:
        """Return a copy of the report with the mean absolute error set."""
        return replace(self, mae=mae)

    def to_dict(self) -> dict[str, float | int | None]:
        """Flat key/value form of the report."""
        return {
            "mae": self.mae,
            "map": self.map,
            "ndcg": self.ndcg,
            "n_queries": self.n_queries,
            "n_skipped": self.n_skipped,
        }


def _mean_or_none(values: list[float | None]) -> float | None:
    present = [value for value in values if value is not None]
    if not present:
        return None
    return math.fsum(present) / len(present)


@dataclass(frozen=True)
class _Candidates:
    ids: NDArray[np.int64]
    years: NDArray[np.int64]
    unit_embeddings: NDArray[np.float64]


def _score_query(  # noqa: PLR0913
    *,
    query_id: int,
    query_year: int,
    query_unit: NDArray[np.float64],
    candidates: _Candidates,
    relevance_spec: RelevanceSpec,
    positive_gap: int,
) -> tuple[float | None, float | None]:
    keep = candidates.ids != query_id
    ids = candidates.ids[keep]
    years = candidates.years[keep]
    if ids.size == 0:
        return None, None

    similarities = candidates.unit_embeddings[keep] @ query_unit
    graded = relevance_matrix(relevance_spec, [query_year], years)[0]
    positives = np.abs(years - query_year) <= positive_gap

    ap_value: float | None = None
    if positives.any():
        binary = rank_candidates(
            query_id=query_id,
            candidate_ids=ids,
            similarities=similarities,
            relevance=positives.astype(np.float64),
            positive_mask=positives,
        )
        ap_value = average_precision(binary)

    ndcg_value: float | None = None
    if dcg_of(np.sort(graded)[::-1]) > 0:
        ndcg_value = ndcg(
            rank_candidates(
                query_id=query_id,
                candidate_ids=ids,
                similarities=similarities,
                relevance=graded,
            ),
        )
    return ap_value, ndcg_value


def evaluate_retrieval(  # noqa: PLR0913
    *,
    query_ids: NDArray[np.int64],
    query_years: NDArray[np.int64],
    query_embeddings: NDArray[np.float64],
    candidate_ids: NDArray[np.int64],
    candidate_years: NDArray[np.int64],
    candidate_embeddings: NDArray[np.float64],
    relevance_spec: RelevanceSpec | None = None,
    positive_gap: int = 0,
    threads: int = 1,
) -> MetricReport:
    """
    Rank the candidates for every query by cosine similarity and score the rankings.

    A query never retrieves itself: any candidate sharing the query's id is removed from
    its list. Positives for average precision are candidates within ``positive_gap`` years.

    :return: A report with mAP and nDCG. The MAE is left unset.
    """
    if query_ids.size == 0:
        msg = "Evaluation needs at least one query."
        raise UsageError(msg)
    if positive_gap < 0:
        msg = f"positive_gap must be non-negative, got {positive_gap}."
        raise UsageError(msg)

    spec = relevance_spec or RelevanceSpec()
    candidates = _Candidates(
        ids=np.asarray(candidate_ids, dtype=np.int64),
        years=np.asarray(candidate_years, dtype=np.int64),
        unit_embeddings=unit_rows(candidate_embeddings),
    )
    query_units = unit_rows(query_embeddings)

    def score(position: int) -> tuple[float | None, float | None]:
        return _score_query(
            query_id=int(query_ids[position]),
            query_year=int(query_years[position]),
            query_unit=query_units[position],
            candidates=candidates,
            relevance_spec=spec,
            positive_gap=positive_gap,
        )

    positions = range(query_ids.size)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(score, positions))
    else:
        results = [score(position) for position in positions]

    per_query_ap = [ap for ap, _ in results]
    per_query_ndcg = [value for _, value in results]
    n_skipped = sum(1 for ap, value in results if ap is None or value is None)
    if n_skipped:
        logger.warning(
            f"Skipped {n_skipped} of {len(results)} queries with undefined AP or nDCG.",
            extra={
                "skipped_ap": sum(1 for ap in per_query_ap if ap is None),
                "skipped_ndcg": sum(1 for value in per_query_ndcg if value is None),
            },
        )

    return MetricReport(
        map=_mean_or_none(per_query_ap),
        ndcg=_mean_or_none(per_query_ndcg),
        per_query_ap=tuple(per_query_ap),
        per_query_ndcg=tuple(per_query_ndcg),
        n_queries=len(results),
        n_skipped=n_skipped,
    )
