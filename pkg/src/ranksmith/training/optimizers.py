"""Gradient descent update rules over named parameter arrays."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Protocol

import numpy as np

from ranksmith.errors import UsageError

if TYPE_CHECKING:
    from ranksmith.training.encoder import Parameters


class Optimizer(Protocol):
    """Updates parameters in place from their gradients."""

    def step(self, params: Parameters, grads: Parameters) -> None:
        """Apply one update."""
        ...


@dataclass
class Sgd:
    """Stochastic gradient descent with heavy-ball momentum."""

    lr: float
    momentum: float = 0.9
    _velocity: Parameters = field(default_factory=dict, repr=False)

    def step(self, params: Parameters, grads: Parameters) -> None:
        """Apply one update."""
        for name, grad in grads.items():
            velocity = self._velocity.get(name)
            velocity = grad.copy() if velocity is None else self.momentum * velocity + grad
            self._velocity[name] = velocity
            params[name] -= self.lr * velocity


@dataclass
class Adam:
    """Adam with bias-corrected moment estimates."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    _steps: int = field(default=0, repr=False)
    _first: Parameters = field(default_factory=dict, repr=False)
    _second: Parameters = field(default_factory=dict, repr=False)

    def step(self, params: Parameters, grads: Parameters) -> None:
        """Apply one update."""
        self._steps += 1
        first_correction = 1.0 - self.beta1**self._steps
        second_correction = 1.0 - self.beta2**self._steps
        for name, grad in grads.items():
            first = self._first.get(name, np.zeros_like(grad))
            second = self._second.get(name, np.zeros_like(grad))
            first = self.beta1 * first + (1.0 - self.beta1) * grad
            second = self.beta2 * second + (1.0 - self.beta2) * grad * grad
            self._first[name] = first
            self._second[name] = second
            denominator = np.sqrt(second / second_correction) + self.eps
            params[name] -= self.lr * (first / first_correction) / denominator


class OptimizerKind(Enum):
    """Available update rules, by command line name."""

    ADAM = "adam"
    SGD = "sgd"

    @staticmethod
    def from_name(name: str) -> OptimizerKind:
        """Resolve a command line name into an OptimizerKind."""
        for kind in OptimizerKind:
            if kind.value == name:
                return kind
        valid = ", ".join(kind.value for kind in OptimizerKind)
        msg = f"Unknown optimizer '{name}'. Valid values: {valid}"
        raise UsageError(msg)


@dataclass(frozen=True)
class OptimizerSpec:
    """Hyperparameters of an update rule; ``build`` returns a fresh, stateful optimizer."""

    kind: OptimizerKind = OptimizerKind.ADAM
    lr: float = 1e-3
    momentum: float = 0.9
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        """Validate the hyperparameters."""
        if not self.lr > 0:
            msg = f"The learning rate must be positive, got {self.lr}."
            raise UsageError(msg)
        for name in ("momentum", "beta1", "beta2"):
            value = getattr(self, name)
            if not 0 <= value < 1:
                msg = f"{name} must lie in [0, 1), got {value}."
                raise UsageError(msg)
        if not self.eps > 0:
            msg = f"eps must be positive, got {self.eps}."
            raise UsageError(msg)

    def build(self) -> Optimizer:
        """Create the optimizer with empty state."""
        match self.kind:
            case OptimizerKind.ADAM:
                return Adam(self.lr, self.beta1, self.beta2, self.eps)
            case OptimizerKind.SGD:
                return Sgd(self.lr, self.momentum)
