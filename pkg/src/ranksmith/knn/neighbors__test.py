import numpy as np

from ranksmith.knn.neighbors import top_k


def test__top_k__distinct_values__best_first():
    similarities = np.array([0.1, 0.9, 0.5, 0.7])

    np.testing.assert_array_equal(top_k(similarities, 2), [1, 3])


def test__top_k__ties_at_the_cut__lowest_positions_kept():
    similarities = np.array([0.2, 0.5, 0.5, 0.9, 0.5])

    np.testing.assert_array_equal(top_k(similarities, 3), [3, 1, 2])


def test__top_k__k_covers_everything__full_order():
    similarities = np.array([0.3, 0.3, 0.8])

    np.testing.assert_array_equal(top_k(similarities, 5), [2, 0, 1])


def test__top_k__candidate_positions__mapped_back():
    similarities = np.array([0.4, 0.6, 0.6])
    candidates = np.array([12, 7, 3])

    np.testing.assert_array_equal(top_k(similarities, 2, candidates), [3, 7])


def test__top_k__random_rows__agrees_with_full_sort(rng):
    for _ in range(20):
        similarities = rng.integers(0, 5, size=30) / 5
        expected = np.lexsort((np.arange(30), -similarities))[:7]
        np.testing.assert_array_equal(top_k(similarities, 7), expected)
