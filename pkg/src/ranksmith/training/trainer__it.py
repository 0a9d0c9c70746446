import time

import numpy as np
import pytest
from assertpy import assert_that

from ranksmith.analysis.baselines import random_baseline_metrics
from ranksmith.analysis.bin_similarity import bin_similarity, bin_similarity_correlation
from ranksmith.data.split import SplitConfig, split
from ranksmith.data.synthetic import SyntheticSpec, generate
from ranksmith.knn.predictor import predict_many
from ranksmith.knn.support_set import SupportSet
from ranksmith.metrics.regression import mean_absolute_error
from ranksmith.metrics.report import evaluate_retrieval
from ranksmith.setup.seeds import Seeds
from ranksmith.training.encoder import Encoder, EncoderMode
from ranksmith.training.train_config import TrainConfig
from ranksmith.training.trainer import train

pytestmark = pytest.mark.integration

SEEDS = Seeds(11)
D_OUT = 16
K = 10


@pytest.fixture(scope="module")
def splits():
    items = generate(SyntheticSpec(seed=SEEDS.data))
    train_items, _, test_items = split(
        items,
        SplitConfig(seed=SEEDS.split, balanced=True, test_per_year=2),
    )
    return train_items, test_items


@pytest.fixture(scope="module")
def initial(splits):
    train_items, _ = splits
    return Encoder.initialise(EncoderMode.AFFINE, train_items, D_OUT, seed=SEEDS.init)


@pytest.fixture(scope="module")
def trained(splits, initial):
    train_items, _ = splits
    started = time.perf_counter()
    encoder, log = train(train_items, TrainConfig(seed=SEEDS.train), initial)
    assert_that(time.perf_counter() - started).is_less_than(300)
    return encoder, log


def _embedded(encoder, splits):
    train_items, test_items = splits
    return (
        train_items.with_embeddings(encoder.encode(train_items)),
        test_items.with_embeddings(encoder.encode(test_items)),
    )


def _ndcg(support, queries):
    return evaluate_retrieval(
        query_ids=queries.ids,
        query_years=queries.years,
        query_embeddings=queries.embeddings,
        candidate_ids=support.ids,
        candidate_years=support.years,
        candidate_embeddings=support.embeddings,
    ).ndcg


def _mae(support, queries, *, weighted=False):
    predictions = predict_many(queries.embeddings, SupportSet.full(support), K, weighted=weighted)
    return mean_absolute_error([p.year for p in predictions], queries.years)


def test__train__synthetic_benchmark__test_ndcg_at_least_090(splits, trained):
    support, queries = _embedded(trained[0], splits)

    assert_that(_ndcg(support, queries)).is_greater_than_or_equal_to(0.90)


def test__train__synthetic_benchmark__mae_at_most_half_of_untrained(splits, initial, trained):
    trained_mae = _mae(*_embedded(trained[0], splits))
    untrained_mae = _mae(*_embedded(initial, splits))

    assert_that(trained_mae).is_less_than_or_equal_to(0.5 * untrained_mae)


def test__train__synthetic_benchmark__beats_random_rankings(splits, trained):
    support, queries = _embedded(trained[0], splits)
    random = random_baseline_metrics(queries, support, SEEDS.baselines)

    assert_that(_ndcg(support, queries)).is_greater_than_or_equal_to(random.ndcg + 0.1)


def test__train__synthetic_benchmark__close_years_have_close_embeddings(splits, trained):
    _, queries = _embedded(trained[0], splits)

    matrix = bin_similarity(queries, 5, seed=SEEDS.analysis)

    assert_that(bin_similarity_correlation(matrix)).is_less_than_or_equal_to(-0.7)


def test__train__synthetic_benchmark__weighted_knn_close_to_plain(splits, trained):
    support, queries = _embedded(trained[0], splits)

    gap = abs(_mae(support, queries, weighted=True) - _mae(support, queries))

    assert_that(gap).is_less_than_or_equal_to(1.0)


def test__train__synthetic_benchmark__loss_goes_down(trained):
    losses = np.asarray(trained[1].losses)

    assert_that(losses[-5:].mean()).is_less_than(losses[:5].mean())


def test__train__synthetic_benchmark__loss_moving_average_trends_down(trained):
    averages = trained[1].moving_average(50)
    sampled = averages[::250]

    assert_that(averages[-1]).is_less_than(averages[0])
    assert_that(float(np.max(np.diff(sampled)))).is_less_than_or_equal_to(0.02)


def test__initialise__free_table__retrieval_close_to_random(splits):
    train_items, _ = splits
    encoder = Encoder.initialise(EncoderMode.FREE_TABLE, train_items, D_OUT, seed=SEEDS.init)
    embedded = train_items.with_embeddings(encoder.encode(train_items))
    positions = np.arange(len(embedded))
    queries = embedded.subset(positions[::5])
    support = embedded.subset(positions[positions % 5 != 0])

    random = random_baseline_metrics(queries, support, SEEDS.baselines)

    assert_that(_ndcg(support, queries)).is_close_to(random.ndcg, 0.05)
