import numpy as np
import pytest

from ranksmith.core.ranking import Temperature
from ranksmith.errors import DomainError, UsageError
from ranksmith.losses._batches import random_batch, separated_query_batch
from ranksmith.losses.gradient_check import central_difference_gradient, relative_gradient_error
from ranksmith.losses.smooth_ap import smooth_ap_batch
from ranksmith.losses.types import LossConfig, Objective
from ranksmith.metrics.ranked_list import rank_candidates
from ranksmith.metrics.retrieval import average_precision

AP_CONFIG = LossConfig(objective=Objective.SMOOTH_AP)


def test__smooth_ap_batch__identical_embeddings__hand_expanded_loss():
    embeddings = np.array([[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]])
    years = np.array([1950, 1950, 1960])

    result = smooth_ap_batch(embeddings, years, AP_CONFIG)

    # Queries 0 and 1 each rank one positive against one negative with G = 0.5,
    # so AP = 1 / 1.5. Query 2 has no positive and is skipped.
    assert result.loss == pytest.approx(1 / 3, abs=1e-12)
    assert result.evaluated.tolist() == [True, True, False]
    assert result.n_skipped == 1
    assert result.per_query[2] == 0


def test__smooth_ap_batch__same_year_items_mutually_closest__loss_near_zero(rng):
    directions = np.eye(4)[[0, 0, 0, 1, 1, 1, 2, 2]]
    embeddings = directions + 0.01 * rng.normal(size=(8, 4))
    years = np.array([1950, 1950, 1950, 1960, 1960, 1960, 1970, 1970])

    result = smooth_ap_batch(
        embeddings, years, LossConfig(objective=Objective.SMOOTH_AP, tau=Temperature(1e-4))
    )

    assert result.loss < 1e-3


def test__smooth_ap_batch__random_batches__loss_in_unit_interval(rng):
    for _ in range(50):
        embeddings, years = random_batch(rng, tau=0.1)
        if not any((years == year).sum() > 1 for year in years):
            continue
        result = smooth_ap_batch(embeddings, years, AP_CONFIG)
        assert 0.0 <= result.loss <= 1.0


def test__smooth_ap_batch__positive_gap__widens_positives():
    embeddings = np.eye(3)
    years = np.array([1950, 1952, 1990])

    with pytest.raises(DomainError):
        smooth_ap_batch(embeddings, years, AP_CONFIG)

    result = smooth_ap_batch(
        embeddings, years, LossConfig(objective=Objective.SMOOTH_AP, positive_gap=2)
    )
    assert result.evaluated.tolist() == [True, True, False]


def test__smooth_ap_batch__single_item__usage_error():
    with pytest.raises(UsageError):
        smooth_ap_batch(np.ones((1, 3)), [1950], AP_CONFIG)


@pytest.mark.parametrize("tau", [1.0, 0.1, 0.01])
def test__smooth_ap_batch__gradient__matches_central_differences(rng, tau):
    cfg = LossConfig(objective=Objective.SMOOTH_AP, tau=Temperature(tau))
    embeddings, years = random_batch(rng, tau=tau)
    years[:2] = years[2]

    analytical = smooth_ap_batch(embeddings, years, cfg).gradient
    numerical = central_difference_gradient(
        lambda e: smooth_ap_batch(e, years, cfg).loss, embeddings
    )

    assert relative_gradient_error(analytical, numerical) <= 1e-4


def test__smooth_ap_batch__gradient__finite_and_embedding_shaped(rng):
    embeddings, years = random_batch(rng, size=12, dim=5)
    years[:] = 1950 + np.arange(12) % 3
    result = smooth_ap_batch(embeddings, years, AP_CONFIG)
    assert result.gradient.shape == embeddings.shape
    assert np.all(np.isfinite(result.gradient))


def test__smooth_ap_batch__small_temperature__matches_exact_ap_of_induced_ranking(rng):
    cfg = LossConfig(objective=Objective.SMOOTH_AP, tau=Temperature(1e-4), positive_gap=3)
    checked = 0
    while checked < 100:
        embeddings, years = separated_query_batch(rng)
        positives = np.abs(years[1:] - years[0]) <= cfg.positive_gap
        if not positives.any():
            continue

        result = smooth_ap_batch(embeddings, years, cfg)

        unit = embeddings / np.linalg.norm(embeddings, axis=1, keepdims=True)
        exact = average_precision(
            rank_candidates(
                query_id=0,
                candidate_ids=np.arange(1, embeddings.shape[0]),
                similarities=unit[1:] @ unit[0],
                relevance=positives.astype(np.float64),
                positive_mask=positives,
            )
        )
        assert abs((1.0 - result.per_query[0]) - exact) <= 1e-3
        checked += 1


def test__smooth_ap_batch__small_gradient_step__does_not_increase_loss(rng):
    cfg = LossConfig(objective=Objective.SMOOTH_AP, tau=Temperature(0.1))
    failures = 0
    for _ in range(100):
        embeddings, years = random_batch(rng, tau=0.1)
        result = smooth_ap_batch(embeddings, years, cfg)
        step = 1e-5 * np.linalg.norm(embeddings) / max(np.linalg.norm(result.gradient), 1e-12)
        moved = smooth_ap_batch(embeddings - step * result.gradient, years, cfg)
        if moved.loss > result.loss:
            failures += 1
    assert failures <= 2
