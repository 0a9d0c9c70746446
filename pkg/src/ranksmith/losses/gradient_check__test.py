import numpy as np
import pytest

from ranksmith.core.ranking import Temperature
from ranksmith.losses._batches import random_batch
from ranksmith.losses.batch_loss import compute_batch_loss
from ranksmith.losses.gradient_check import central_difference_gradient, relative_gradient_error
from ranksmith.losses.types import LossConfig, Objective


def test__central_difference_gradient__quadratic__exact_gradient():
    matrix = np.array([[2.0, 0.5], [0.5, 1.0]])
    x = np.array([0.3, -1.2])

    numerical = central_difference_gradient(lambda v: float(v @ matrix @ v), x)

    np.testing.assert_allclose(numerical, 2 * matrix @ x, rtol=1e-8)


def test__central_difference_gradient__matrix_input__shape_preserved():
    x = np.arange(6, dtype=float).reshape(2, 3)
    numerical = central_difference_gradient(lambda v: float(np.sum(v**2)), x)
    np.testing.assert_allclose(numerical, 2 * x, rtol=1e-8)


def test__relative_gradient_error__identical__zero():
    g = np.array([1.0, -2.0])
    assert relative_gradient_error(g, g) == 0.0


def test__relative_gradient_error__small_coordinate_off__scaled_by_largest_coordinate():
    analytical = np.array([100.0, 0.001])
    numerical = np.array([100.0, 0.002])

    assert relative_gradient_error(analytical, numerical) == pytest.approx(1e-5)


def test__relative_gradient_error__both_zero__floor_avoids_division_by_zero():
    assert relative_gradient_error(np.zeros(3), np.zeros(3)) == 0.0


@pytest.mark.parametrize("objective", list(Objective))
def test__compute_batch_loss__hundred_random_configurations__gradients_match(objective):
    rng = np.random.default_rng(100)
    taus = (1.0, 0.1, 0.01)
    worst = 0.0
    for trial in range(100):
        tau = taus[trial % 3]
        cfg = LossConfig(objective=objective, tau=Temperature(tau))
        embeddings, years = random_batch(rng, tau=tau, n_years=4)
        years[:2] = years[2]

        analytical = compute_batch_loss(embeddings, years, cfg).gradient
        numerical = central_difference_gradient(
            lambda e, y=years, c=cfg: compute_batch_loss(e, y, c).loss, embeddings
        )
        worst = max(worst, relative_gradient_error(analytical, numerical))

    assert worst <= 1e-4
