"""Graded relevance of a candidate's year with respect to a query's year."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import UsageError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

DEFAULT_GAMMA = 10.0


class RelevanceKind(Enum):
    """
    The shape of the relevance curve over the absolute year gap.

    The value is the name used on the command line.
    """

    CLIPPED_LINEAR = "clipped-linear"
    """max(0, gamma - |gap|): only the closest decade counts when gamma is 10."""

    INVERSE_LINEAR = "inverse-linear"
    """1 / (1 + |gap|)."""

    EXP_INVERSE = "exp-inverse"
    """exp(1 / (1 + |gap|)): far candidates keep a floor of 1."""

    @staticmethod
    def from_name(name: str) -> RelevanceKind:
        """Resolve a command line name into a RelevanceKind."""
        for kind in RelevanceKind:
            if kind.value == name:
                return kind
        valid = ", ".join(kind.value for kind in RelevanceKind)
        msg = f"Unknown relevance kind '{name}'. Valid values: {valid}"
        raise UsageError(msg)


@dataclass(frozen=True)
class RelevanceSpec:
    """Which relevance function to use, with its parameter."""

    kind: RelevanceKind = RelevanceKind.CLIPPED_LINEAR
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self) -> None:
        """Validate gamma for the clipped linear function."""
        if self.kind is RelevanceKind.CLIPPED_LINEAR and not self.gamma > 0:
            msg = f"gamma must be positive for {self.kind.value}, got {self.gamma}."
            raise UsageError(msg)


def relevance_of_gap(spec: RelevanceSpec, gaps: ArrayLike) -> NDArray[np.float64]:
    """Evaluate the relevance function on absolute year gaps."""
    abs_gaps = np.abs(np.asarray(gaps, dtype=np.float64))
    match spec.kind:
        case RelevanceKind.CLIPPED_LINEAR:
            return np.maximum(0.0, spec.gamma - abs_gaps)
        case RelevanceKind.INVERSE_LINEAR:
            return 1.0 / (1.0 + abs_gaps)
        case RelevanceKind.EXP_INVERSE:
            return np.exp(1.0 / (1.0 + abs_gaps))
    msg = f"Unsupported relevance kind: {spec.kind}"
    raise UsageError(msg)


def relevance(spec: RelevanceSpec, y_query: int, y_item: int) -> float:
    """Relevance of an item dated ``y_item`` for a query dated ``y_query``."""
    return float(relevance_of_gap(spec, int(y_query) - int(y_item)))


def relevance_matrix(
    spec: RelevanceSpec,
    query_years: ArrayLike,
    item_years: ArrayLike,
) -> NDArray[np.float64]:
    """Relevance of every item for every query, shape (n_queries, n_items)."""
    queries = np.asarray(query_years, dtype=np.int64)
    items = np.asarray(item_years, dtype=np.int64)
    return relevance_of_gap(spec, queries[:, None] - items[None, :])
