"""Configuration of a training run."""

from __future__ import annotations

from dataclasses import dataclass, field

from ranksmith.errors import UsageError
from ranksmith.losses.pairwise import MIN_BATCH_SIZE
from ranksmith.losses.types import LossConfig
from ranksmith.training.optimizers import OptimizerSpec

DEFAULT_BATCH_SIZE = 64
DEFAULT_ITERATIONS = 2000
DEFAULT_EVAL_EVERY = 100
DEFAULT_VALIDATION_K = 10


@dataclass(frozen=True)
class TrainConfig:
    """Everything that determines a training run besides the data and the initial encoder."""

    batch_size: int = DEFAULT_BATCH_SIZE
    max_iterations: int = DEFAULT_ITERATIONS
    optimizer: OptimizerSpec = field(default_factory=OptimizerSpec)
    loss: LossConfig = field(default_factory=LossConfig)
    seed: int = 0
    eval_every: int = DEFAULT_EVAL_EVERY
    normalize_embeddings: bool = False
    """Scale encoder outputs to unit length; overrides the flag of the initial encoder."""
    validation_k: int = DEFAULT_VALIDATION_K
    """Neighbours used for the validation MAE."""
    threads: int = 1

    def __post_init__(self) -> None:
        """Validate the configuration."""
        if self.batch_size < MIN_BATCH_SIZE:
            msg = f"batch_size must be at least {MIN_BATCH_SIZE}, got {self.batch_size}."
            raise UsageError(msg)
        for name in ("max_iterations", "eval_every", "validation_k", "threads"):
            if getattr(self, name) < 1:
                msg = f"{name} must be at least 1, got {getattr(self, name)}."
                raise UsageError(msg)
