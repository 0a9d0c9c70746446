"""Reference points the trained model is compared against."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import UsageError
from ranksmith.knn.predictor import DEFAULT_K, predict_many
from ranksmith.knn.support_set import SupportSet
from ranksmith.metrics.regression import mean_absolute_error
from ranksmith.metrics.report import MetricReport, evaluate_retrieval

if TYPE_CHECKING:
    from ranksmith.data.labeled_item import ItemSet, YearSpan
    from ranksmith.relevance import RelevanceSpec

_RANDOM_EMBEDDING_DIM = 16


def _check_inputs(queries: ItemSet, support: ItemSet) -> None:
    if len(queries) == 0 or len(support) == 0:
        msg = "Baselines need at least one query and one support item."
        raise UsageError(msg)


def random_baseline_metrics(  # noqa: PLR0913
    queries: ItemSet,
    support: ItemSet,
    seed: int,
    *,
    relevance_spec: RelevanceSpec | None = None,
    positive_gap: int = 0,
    span: YearSpan | None = None,
    threads: int = 1,
) -> MetricReport:
    """
    Metrics of uniformly random rankings and uniformly random year predictions.

    Rankings come from isotropic Gaussian embeddings, whose cosine order is a uniform random
    permutation. Predicted years are uniform over ``span``, by default the span of the support.
    """
    _check_inputs(queries, support)
    rng = np.random.default_rng(seed)
    query_embeddings = rng.normal(size=(len(queries), _RANDOM_EMBEDDING_DIM))
    support_embeddings = rng.normal(size=(len(support), _RANDOM_EMBEDDING_DIM))

    report = evaluate_retrieval(
        query_ids=queries.ids,
        query_years=queries.years,
        query_embeddings=query_embeddings,
        candidate_ids=support.ids,
        candidate_years=support.years,
        candidate_embeddings=support_embeddings,
        relevance_spec=relevance_spec,
        positive_gap=positive_gap,
        threads=threads,
    )

    prediction_span = span or support.year_span()
    predicted = rng.integers(prediction_span.start, prediction_span.end + 1, size=len(queries))
    return report.with_mae(mean_absolute_error(predicted, queries.years))


def feature_baseline_metrics(  # noqa: PLR0913
    queries: ItemSet,
    support: ItemSet,
    *,
    relevance_spec: RelevanceSpec | None = None,
    k: int = DEFAULT_K,
    positive_gap: int = 0,
    threads: int = 1,
) -> MetricReport:
    """
    Metrics of rankings and k-NN predictions made directly on the untrained features.

    This is the visual-similarity baseline: it shows what the trained embedding adds over
    plain feature similarity.
    """
    _check_inputs(queries, support)
    report = evaluate_retrieval(
        query_ids=queries.ids,
        query_years=queries.years,
        query_embeddings=queries.features,
        candidate_ids=support.ids,
        candidate_years=support.years,
        candidate_embeddings=support.features,
        relevance_spec=relevance_spec,
        positive_gap=positive_gap,
        threads=threads,
    )
    feature_support = SupportSet.full(support.with_embeddings(support.features))
    predictions = predict_many(queries.features, feature_support, k, threads=threads)
    return report.with_mae(mean_absolute_error([p.year for p in predictions], queries.years))
