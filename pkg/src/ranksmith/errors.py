"""Errors raised across ranksmith."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ranksmith.training.encoder import Encoder
    from ranksmith.training.train_log import TrainLog


class UsageError(ValueError):
    """Raised when an operation is called with arguments it cannot accept."""


class DomainError(ValueError):
    """Raised when a quantity is mathematically undefined for the given input."""


class DataValidationError(ValueError):
    """Raised when loaded or generated data breaks an invariant."""


class FeatureFileError(ValueError):
    """Raised when a feature, model or index file cannot be parsed."""

    def __init__(self, message: str, *, path: str, location: str) -> None:
        """
        Initialize the error with the location of the malformed content.

        :param message: What is wrong with the file.
        :param path: The path of the file.
        :param location: A byte offset or line reference inside the file.
        """
        super().__init__(f"{path} ({location}): {message}")
        self.path = path
        self.location = location


class NonFiniteLossError(ArithmeticError):
    """Raised when training produces a non-finite loss."""

    def __init__(
        self,
        *,
        iteration: int,
        last_finite_encoder: Encoder | None,
        train_log: TrainLog | None = None,
    ) -> None:
        """
        Initialize the error with the state needed to diagnose the failure.

        :param iteration: The iteration at which the loss became non-finite.
        :param last_finite_encoder: A snapshot of the encoder before the failing update.
        :param train_log: The log up to the failing iteration.
        """
        super().__init__(f"Loss became non-finite at iteration {iteration}.")
        self.iteration = iteration
        self.last_finite_encoder = last_finite_encoder
        self.train_log = train_log
