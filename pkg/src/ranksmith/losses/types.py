"""Configuration and results of the smooth ranking objectives."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from ranksmith.core.ranking import Temperature
from ranksmith.errors import UsageError
from ranksmith.relevance import RelevanceSpec

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import NDArray


class Objective(Enum):
    """The ranking metric a loss approximates. The value is the command line name."""

    SMOOTH_AP = "smooth-ap"
    SMOOTH_NDCG = "smooth-ndcg"

    @staticmethod
    def from_name(name: str) -> Objective:
        """Resolve a command line name into an Objective."""
        for objective in Objective:
            if objective.value == name:
                return objective
        valid = ", ".join(objective.value for objective in Objective)
        msg = f"Unknown loss '{name}'. Valid values: {valid}"
        raise UsageError(msg)


@dataclass(frozen=True)
class LossConfig:
    """Which smooth objective to optimise and how."""

    objective: Objective = Objective.SMOOTH_NDCG
    tau: Temperature = field(default_factory=Temperature)
    relevance: RelevanceSpec = field(default_factory=RelevanceSpec)
    """Only used by smooth-nDCG."""
    positive_gap: int = 0
    """Only used by smooth-AP: candidates within this many years of the query are positives."""

    def __post_init__(self) -> None:
        """Validate the configuration."""
        if self.positive_gap < 0:
            msg = f"positive_gap must be non-negative, got {self.positive_gap}."
            raise UsageError(msg)


@dataclass(frozen=True)
class BatchLossResult:
    """
    The loss of one batch and its gradient with respect to every batch embedding.

    Skipped queries have a per-query loss of 0 and are excluded from the mean.
    """

    loss: float
    per_query: NDArray[np.float64]
    gradient: NDArray[np.float64]
    evaluated: NDArray[np.bool_]
    similarities: NDArray[np.float64]

    @property
    def n_skipped(self) -> int:
        """Number of queries without a defined objective."""
        return int((~self.evaluated).sum())
