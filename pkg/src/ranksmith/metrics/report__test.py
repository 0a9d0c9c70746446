import json

import numpy as np
import pytest

from ranksmith.metrics.ranked_list import rank_candidates
from ranksmith.metrics.report import MetricReport, evaluate_retrieval
from ranksmith.metrics.retrieval import average_precision, ndcg
from ranksmith.relevance import RelevanceSpec, relevance_matrix


@pytest.fixture
def small_collection():
    rng = np.random.default_rng(4)
    ids = np.arange(30, dtype=np.int64)
    years = rng.integers(1930, 1945, size=30)
    embeddings = rng.normal(size=(30, 6))
    return ids, years, embeddings


def test__metric_report__to_dict__flat_keys():
    report = MetricReport(map=0.5, ndcg=0.75, mae=3.0, n_queries=4, n_skipped=1)
    assert report.to_dict() == {
        "mae": 3.0,
        "map": 0.5,
        "ndcg": 0.75,
        "n_queries": 4,
        "n_skipped": 1,
    }
    json.dumps(report.to_dict())


def test__metric_report__out_of_range__value_error():
    with pytest.raises(ValueError):
        MetricReport(map=1.5, ndcg=0.5)


def test__evaluate_retrieval__matches_per_query_metrics(small_collection):
    ids, years, embeddings = small_collection
    spec = RelevanceSpec()

    report = evaluate_retrieval(
        query_ids=ids,
        query_years=years,
        query_embeddings=embeddings,
        candidate_ids=ids,
        candidate_years=years,
        candidate_embeddings=embeddings,
        relevance_spec=spec,
    )

    unit = embeddings / np.linalg.norm(embeddings, axis=1, keepdims=True)
    q = 3
    others = ids != q
    sims = unit[others] @ unit[q]
    graded = relevance_matrix(spec, [years[q]], years[others])[0]
    expected_ndcg = ndcg(
        rank_candidates(
            query_id=q, candidate_ids=ids[others], similarities=sims, relevance=graded
        )
    )
    assert report.per_query_ndcg[q] == pytest.approx(expected_ndcg)

    positives = years[others] == years[q]
    if positives.any():
        expected_ap = average_precision(
            rank_candidates(
                query_id=q,
                candidate_ids=ids[others],
                similarities=sims,
                relevance=positives.astype(float),
                positive_mask=positives,
            )
        )
        assert report.per_query_ap[q] == pytest.approx(expected_ap)


def test__evaluate_retrieval__threads__identical_results(small_collection):
    ids, years, embeddings = small_collection
    kwargs = dict(
        query_ids=ids,
        query_years=years,
        query_embeddings=embeddings,
        candidate_ids=ids,
        candidate_years=years,
        candidate_embeddings=embeddings,
    )

    single = evaluate_retrieval(**kwargs, threads=1)
    multi = evaluate_retrieval(**kwargs, threads=4)

    assert single == multi


def test__evaluate_retrieval__query_without_positives__skipped_and_counted():
    ids = np.array([0, 1, 2], dtype=np.int64)
    years = np.array([1930, 1930, 1990])
    embeddings = np.eye(3)

    report = evaluate_retrieval(
        query_ids=ids,
        query_years=years,
        query_embeddings=embeddings,
        candidate_ids=ids,
        candidate_years=years,
        candidate_embeddings=embeddings,
    )

    assert report.per_query_ap[2] is None
    assert report.per_query_ndcg[2] is None
    assert report.n_skipped == 1
    assert report.n_queries == 3
