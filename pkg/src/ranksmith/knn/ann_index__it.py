import time

import numpy as np
import pytest

from ranksmith.data.synthetic import SyntheticSpec, generate
from ranksmith.knn.ann_index import AnnParams, ann_query, build_ann, recall_at_k
from ranksmith.knn.support_set import SupportSet

pytestmark = pytest.mark.integration

N_POINTS = 50_000
N_QUERIES = 200


@pytest.fixture(scope="module")
def support():
    items = generate(SyntheticSpec(n_items=N_POINTS, seed=21))
    return SupportSet.full(items.with_embeddings(items.features))


@pytest.fixture(scope="module")
def queries():
    return generate(SyntheticSpec(n_items=N_QUERIES, seed=22)).features


def _exact(support, queries, k):
    positions, _ = support.search(queries / np.linalg.norm(queries, axis=1, keepdims=True), k)
    return [support.ids[row] for row in positions]


def test__build_ann__default_params__recall_at_10_above_095(support, queries):
    started = time.perf_counter()
    index = build_ann(support, AnnParams(seed=3), threads=4)
    assert time.perf_counter() - started < 60

    approximate = [ann_query(index, query, 10) for query in queries]
    assert recall_at_k(approximate, _exact(support, queries, 10)) >= 0.95


def test__build_ann__budget_covers_support__recall_exactly_one(support, queries):
    index = build_ann(support, AnnParams(tree_count=2, search_budget=N_POINTS, seed=4))
    approximate = [ann_query(index, query, 10) for query in queries[:20]]
    assert recall_at_k(approximate, _exact(support, queries[:20], 10)) == 1.0


def test__build_ann__more_trees__recall_not_lower():
    items = generate(SyntheticSpec(n_items=5000, seed=23))
    support = SupportSet.full(items.with_embeddings(items.features))
    queries = generate(SyntheticSpec(n_items=100, seed=24)).features
    exact = _exact(support, queries, 10)

    mean_recall = {}
    for tree_count in (1, 16):
        recalls = []
        for seed in range(5):
            params = AnnParams(tree_count=tree_count, search_budget=256, seed=seed)
            index = build_ann(support, params)
            recalls.append(recall_at_k([ann_query(index, q, 10) for q in queries], exact))
        mean_recall[tree_count] = np.mean(recalls)
    assert mean_recall[16] >= mean_recall[1]
