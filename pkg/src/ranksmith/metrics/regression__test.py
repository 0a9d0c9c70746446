import math

import numpy as np
import pytest

from ranksmith.errors import UsageError
from ranksmith.metrics.regression import mean_absolute_error


def test__mean_absolute_error__exact_predictions__zero():
    assert mean_absolute_error([1950, 1960], [1950, 1960]) == 0


def test__mean_absolute_error__two_pairs__mean_gap():
    assert mean_absolute_error([1950, 1960], [1955, 1958]) == pytest.approx(3.5)


def test__mean_absolute_error__span_extremes__full_span():
    assert mean_absolute_error([1930], [1999]) == pytest.approx(69)


def test__mean_absolute_error__length_mismatch__usage_error():
    with pytest.raises(UsageError):
        mean_absolute_error([1950], [1950, 1951])


def test__mean_absolute_error__empty__usage_error():
    with pytest.raises(UsageError):
        mean_absolute_error([], [])


def test__mean_absolute_error__shared_translation__unchanged():
    rng = np.random.default_rng(1)
    predictions = rng.integers(1930, 2000, size=50)
    truths = rng.integers(1930, 2000, size=50)
    base = mean_absolute_error(predictions, truths)
    for shift in (-1000, 7, 250):
        assert math.isclose(
            mean_absolute_error(predictions + shift, truths + shift), base, abs_tol=1e-9
        )
