import numpy as np
import pytest

from ranksmith.core.ranking import (
    SimilarityRow,
    Temperature,
    hard_rank,
    smooth_indicator,
    smooth_rank,
)
from ranksmith.errors import UsageError


def test__smooth_indicator__zero__midpoint():
    assert smooth_indicator(0.0, 0.01) == pytest.approx(0.5)


def test__smooth_indicator__unit_input_unit_temperature__logistic_value():
    assert smooth_indicator(1.0, 1.0) == pytest.approx(0.7310586, abs=1e-7)


def test__smooth_indicator__far_from_zero__saturates():
    assert smooth_indicator(0.1, 0.001) == pytest.approx(1.0, abs=1e-9)


def test__smooth_indicator__opposite_inputs__sum_to_one():
    xs = np.linspace(-50, 50, 1001)
    for tau in (1.0, 0.1, 0.01):
        total = smooth_indicator(xs, tau) + smooth_indicator(-xs, tau)
        np.testing.assert_allclose(total, 1.0, atol=1e-12)


def test__smooth_indicator__increasing_input__monotone():
    values = smooth_indicator(np.linspace(-1, 1, 201), 0.1)
    assert np.all(np.diff(values) >= 0)


def test__temperature__non_positive__usage_error():
    with pytest.raises(UsageError):
        Temperature(0.0)


def test__hard_rank__top_item__one():
    row = SimilarityRow.create([0.9, 0.5, 0.1])
    assert hard_rank(0, row) == 1


def test__hard_rank__all_equal__every_item_rank_one():
    row = SimilarityRow.create([0.3, 0.3, 0.3, 0.3])
    assert [hard_rank(i, row) for i in range(4)] == [1, 1, 1, 1]


def test__hard_rank__middle_score__counts_strictly_greater():
    row = SimilarityRow.create([0.2, 0.8, 0.5])
    assert hard_rank(2, row) == 2


def test__hard_rank__unknown_candidate__usage_error():
    row = SimilarityRow.create([0.2, 0.8, 0.5])
    with pytest.raises(UsageError):
        hard_rank(7, row)


def test__hard_rank__distinct_scores__ranks_sum_to_triangular_number():
    rng = np.random.default_rng(5)
    scores = rng.permutation(np.linspace(-1, 1, 17))
    row = SimilarityRow.create(scores)
    assert sum(hard_rank(i, row) for i in range(17)) == 17 * 18 // 2


def test__smooth_rank__all_equal__half_per_competitor():
    row = SimilarityRow.create([0.4] * 5)
    assert smooth_rank(2, row, 0.3) == pytest.approx(1 + 4 * 0.5)


def test__smooth_rank__top_item_small_temperature__one():
    row = SimilarityRow.create([1.0, 0.0])
    assert smooth_rank(0, row, 0.01) == pytest.approx(1.0, abs=1e-12)


def test__smooth_rank__middle_item__antisymmetric_terms_cancel():
    row = SimilarityRow.create([0.6, 0.4, 0.2])
    assert smooth_rank(1, row, 0.1) == pytest.approx(2.0, abs=1e-12)


def test__smooth_rank__well_separated_scores__close_to_hard_rank():
    rng = np.random.default_rng(9)
    tau = 0.001
    for _ in range(50):
        scores = rng.permutation(np.arange(12) * 0.01)
        row = SimilarityRow.create(scores)
        for i in range(12):
            assert abs(smooth_rank(i, row, tau) - hard_rank(i, row)) < 0.01


def test__similarity_row__query_among_candidates__usage_error():
    with pytest.raises(UsageError):
        SimilarityRow(
            query_index=1,
            scores=np.array([0.1, 0.2]),
            candidate_indices=np.array([0, 1]),
        )


def test__similarity_row__from_matrix__excludes_query():
    sims = np.array([[1.0, 0.2, 0.3], [0.2, 1.0, 0.4], [0.3, 0.4, 1.0]])
    row = SimilarityRow.from_matrix(sims, 1)
    assert row.candidate_indices.tolist() == [0, 2]
    assert row.scores.tolist() == [0.2, 0.4]
