"""Regression error of predicted years."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from sklearn.metrics import mean_absolute_error as sklearn_mean_absolute_error

from ranksmith.errors import UsageError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike


def mean_absolute_error(predictions: ArrayLike, truths: ArrayLike) -> float:
    """
    Mean absolute difference in years between predictions and truths.

    :raises UsageError: If the inputs are empty or differ in length.
    """
    predicted = np.asarray(predictions, dtype=np.float64).ravel()
    actual = np.asarray(truths, dtype=np.float64).ravel()
    if predicted.size != actual.size:
        msg = f"Length mismatch: {predicted.size} predictions for {actual.size} truths."
        raise UsageError(msg)
    if predicted.size == 0:
        msg = "Mean absolute error needs at least one prediction."
        raise UsageError(msg)
    return float(sklearn_mean_absolute_error(actual, predicted))
