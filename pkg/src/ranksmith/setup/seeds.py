"""Seeds for every random stage, derived from the single run seed by fixed offsets."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ranksmith.errors import UsageError


class SeedPurpose(Enum):
    """A random stage and its offset from the run seed."""

    DATA = 0
    SPLIT = 1
    TRAIN = 2
    ANN = 3
    ANALYSIS = 4
    BASELINES = 5
    INIT = 6


@dataclass(frozen=True)
class Seeds:
    """The seeds of one run."""

    base: int = 0

    def __post_init__(self) -> None:
        """Reject negative run seeds."""
        if self.base < 0:
            msg = f"The seed must be a non-negative integer, got {self.base}."
            raise UsageError(msg)

    def of(self, purpose: SeedPurpose) -> int:
        """The seed for ``purpose``."""
        return self.base + purpose.value

    @property
    def data(self) -> int:
        """Synthetic data generation."""
        return self.of(SeedPurpose.DATA)

    @property
    def split(self) -> int:
        """Train, validation and test splitting."""
        return self.of(SeedPurpose.SPLIT)

    @property
    def train(self) -> int:
        """Batch sampling during training."""
        return self.of(SeedPurpose.TRAIN)

    @property
    def ann(self) -> int:
        """Random projection forests."""
        return self.of(SeedPurpose.ANN)

    @property
    def analysis(self) -> int:
        """Support sampling and pair subsampling."""
        return self.of(SeedPurpose.ANALYSIS)

    @property
    def baselines(self) -> int:
        """Random baselines."""
        return self.of(SeedPurpose.BASELINES)

    @property
    def init(self) -> int:
        """Encoder initialisation."""
        return self.of(SeedPurpose.INIT)
