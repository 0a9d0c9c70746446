"""Evaluation records collected while training."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, TYPE_CHECKING

import numpy as np
import polars as pl

from ranksmith.errors import UsageError

if TYPE_CHECKING:
    from numpy.typing import NDArray

TRAIN_LOG_SCHEMA = {
    "iteration": pl.Int64,
    "loss": pl.Float64,
    "ndcg": pl.Float64,
    "val_ndcg": pl.Float64,
    "mae": pl.Float64,
}

DEFAULT_LOSS_WINDOW = 50


@dataclass(frozen=True)
class TrainRecord:
    """Metrics at one evaluation point."""

    iteration: int
    loss: float
    ndcg: float | None
    """Exact nDCG of the current training batch."""
    val_ndcg: float | None = None
    mae: float | None = None
    """Validation k-NN MAE against the encoded training set."""


@dataclass
class TrainLog:
    """
    Evaluation records in strictly increasing iteration order.

    ``batch_losses`` holds the loss of every iteration, evaluated or not.
    """

    records: list[TrainRecord] = field(default_factory=list)
    batch_losses: list[float] = field(default_factory=list)

    def append(self, record: TrainRecord) -> None:
        """Add a record after the existing ones."""
        if self.records and record.iteration <= self.records[-1].iteration:
            msg = (
                f"Iteration {record.iteration} does not follow iteration "
                f"{self.records[-1].iteration}."
            )
            raise UsageError(msg)
        self.records.append(record)

    def __len__(self) -> int:
        """Number of records."""
        return len(self.records)

    @property
    def losses(self) -> list[float]:
        """The recorded losses, in order."""
        return [record.loss for record in self.records]

    def moving_average(self, window: int = DEFAULT_LOSS_WINDOW) -> NDArray[np.float64]:
        """
        Trailing mean of the per-iteration losses over ``window`` iterations.

        Entry i averages iterations i + 1 to i + window; the result is empty when fewer than
        ``window`` losses were recorded.
        """
        if window < 1:
            msg = f"The window must be at least 1, got {window}."
            raise UsageError(msg)
        losses = np.asarray(self.batch_losses, dtype=np.float64)
        if losses.size < window:
            return np.empty(0)
        cumulative = np.concatenate([[0.0], np.cumsum(losses)])
        return (cumulative[window:] - cumulative[:-window]) / window

    def to_frame(self) -> pl.DataFrame:
        """The records as a frame with the columns iteration, loss, ndcg, val_ndcg, mae."""
        return pl.DataFrame(
            [
                (record.iteration, record.loss, record.ndcg, record.val_ndcg, record.mae)
                for record in self.records
            ],
            schema=TRAIN_LOG_SCHEMA,
            orient="row",
        )

    def write_csv(self, target: str | IO[bytes]) -> None:
        """Write the log as CSV; missing values are empty fields."""
        self.to_frame().write_csv(target)
