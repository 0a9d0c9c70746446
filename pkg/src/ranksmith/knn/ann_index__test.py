import numpy as np
import pytest
from morefs.memory import MemFS

from ranksmith.errors import FeatureFileError, UsageError
from ranksmith.knn.ann_index import AnnParams, ann_query, build_ann, recall_at_k
from ranksmith.knn.ann_storage import AnnIndexStorage
from ranksmith.knn._items import embedded_items, random_embedded_items
from ranksmith.knn.support_set import SupportSet


def _exact_ids(support: SupportSet, query, k: int):
    positions, _ = support.search(query[None, :] / np.linalg.norm(query), k)
    return support.ids[positions[0]]


@pytest.fixture
def support(rng):
    return SupportSet.full(random_embedded_items(rng, 2000, dim=8))


def test__build_ann__every_item_in_every_tree(support):
    index = build_ann(support, AnnParams(tree_count=4, leaf_capacity=16, seed=1))
    for tree in index.trees:
        np.testing.assert_array_equal(np.sort(tree.indices), np.arange(len(support)))
        leaves = [node for node in range(tree.children.shape[0]) if tree.is_leaf(node)]
        assert max(tree.leaf_items(node).size for node in leaves) <= 16


def test__build_ann__same_seed__identical_trees(support):
    params = AnnParams(tree_count=3, leaf_capacity=16, seed=5)
    first = build_ann(support, params)
    second = build_ann(support, params, threads=3)
    for left, right in zip(first.trees, second.trees, strict=True):
        np.testing.assert_array_equal(left.indices, right.indices)
        np.testing.assert_array_equal(left.hyperplanes, right.hyperplanes)


def test__build_ann__support_smaller_than_leaf__single_leaf_exact(rng):
    small = SupportSet.full(random_embedded_items(rng, 20))
    index = build_ann(small, AnnParams(tree_count=2, leaf_capacity=32, search_budget=1))
    query = rng.normal(size=8)

    assert all(tree.children.shape[0] == 1 for tree in index.trees)
    np.testing.assert_array_equal(ann_query(index, query, 5), _exact_ids(small, query, 5))


def test__build_ann__identical_items__oversized_leaf():
    same = SupportSet.full(embedded_items(np.arange(50), np.full(50, 1950), np.ones((50, 3))))
    index = build_ann(same, AnnParams(tree_count=1, leaf_capacity=4))
    assert index.trees[0].children.shape[0] == 1
    assert index.trees[0].leaf_items(0).size == 50


def test__ann_query__budget_covers_support__equals_exact(support, rng):
    index = build_ann(support, AnnParams(tree_count=4, leaf_capacity=16, search_budget=2000))
    for query in rng.normal(size=(20, 8)):
        np.testing.assert_array_equal(ann_query(index, query, 10), _exact_ids(support, query, 10))


def test__ann_query__results__distinct_support_ids_in_descending_similarity(support, rng):
    index = build_ann(support, AnnParams(tree_count=4, leaf_capacity=16, search_budget=64))
    query = rng.normal(size=8)
    positions, similarities = index.search(query[None, :] / np.linalg.norm(query), 10)

    ids = index.ids[positions[0]]
    assert len(set(ids.tolist())) == 10
    assert set(ids.tolist()) <= set(support.ids.tolist())
    assert np.all(np.diff(similarities[0]) <= 0)
    unit_query = query / np.linalg.norm(query)
    np.testing.assert_allclose(similarities[0], index.unit[positions[0]] @ unit_query)


def test__ann_query__recall_grows_with_budget(support, rng):
    queries = rng.normal(size=(40, 8))
    exact = [_exact_ids(support, query, 10) for query in queries]
    recalls = []
    for budget in (64, 256, 1024):
        index = build_ann(support, AnnParams(tree_count=4, leaf_capacity=16, search_budget=budget))
        recalls.append(recall_at_k([ann_query(index, query, 10) for query in queries], exact))
    assert recalls == sorted(recalls)


def test__ann_query__zero_k__raises(support):
    with pytest.raises(UsageError):
        ann_query(build_ann(support, AnnParams(tree_count=1)), np.ones(8), 0)


def test__recall_at_k__partial_overlap():
    assert recall_at_k([np.array([1, 2, 3, 4])], [np.array([1, 2, 5, 6])]) == 0.5


def test__ann_storage__save_then_load__same_answers(support, rng):
    filesystem = MemFS()
    storage = AnnIndexStorage(filesystem)
    index = build_ann(support, AnnParams(tree_count=3, leaf_capacity=16, search_budget=128, seed=9))

    storage.save(index, "indexes/support.rsan")
    loaded = storage.load("indexes/support.rsan")

    assert loaded.params == index.params
    np.testing.assert_array_equal(loaded.ids, index.ids)
    np.testing.assert_array_equal(loaded.years, index.years)
    for query in rng.normal(size=(10, 8)):
        np.testing.assert_array_equal(ann_query(loaded, query, 5), ann_query(index, query, 5))


def test__ann_storage__truncated_file__raises(support):
    filesystem = MemFS()
    storage = AnnIndexStorage(filesystem)
    storage.save(build_ann(support, AnnParams(tree_count=1)), "index.rsan")
    with filesystem.open("index.rsan", "rb") as file:
        data = file.read()
    with filesystem.open("index.rsan", "wb") as file:
        file.write(data[:-3])

    with pytest.raises(FeatureFileError, match="Truncated"):
        storage.load("index.rsan")
