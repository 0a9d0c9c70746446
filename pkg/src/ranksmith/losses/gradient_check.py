"""
Finite-difference gradients for checking analytical ones.

A centred difference with step ``h`` on every coordinate: (f(x + h e_i) - f(x - h e_i)) / 2h.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import NDArray

DEFAULT_STEP = 1e-6


def central_difference_gradient(
    func: Callable[[NDArray[np.float64]], float],
    x: NDArray[np.float64],
    step: float = DEFAULT_STEP,
) -> NDArray[np.float64]:
    """
    Approximate the gradient of a scalar function of an array of any shape.

    :param func: The function to differentiate. It must not modify its argument.
    :param x: The point at which to differentiate.
    :param step: The step applied to each coordinate in both directions.
    :return: An array shaped like ``x``.
    """
    point = np.array(x, dtype=np.float64, copy=True)
    flat = point.reshape(-1)
    gradient = np.zeros_like(flat)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + step
        forward = func(point)
        flat[index] = original - step
        backward = func(point)
        flat[index] = original
        gradient[index] = (forward - backward) / (2.0 * step)
    return gradient.reshape(point.shape)


def relative_gradient_error(
    analytical: NDArray[np.float64],
    numerical: NDArray[np.float64],
    floor: float = 1e-8,
) -> float:
    """
    Largest absolute coordinate error divided by the largest coordinate magnitude.

    This is a whole-gradient measure, max|a - n| / max(max|a|, max|n|), not a per-coordinate
    relative error: a coordinate much smaller than the largest one may be off by more than
    the tolerance in relative terms and still pass. ``floor`` bounds the scale from below
    for gradients that are zero everywhere.
    """
    scale = max(float(np.max(np.abs(analytical))), float(np.max(np.abs(numerical))), floor)
    return float(np.max(np.abs(analytical - numerical)) / scale)
