"""Synthetic year-labelled features lying on a helix over the year span."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ranksmith.data.labeled_item import DEFAULT_SPAN, ItemSet, YearSpan
from ranksmith.errors import DataValidationError
from ranksmith.logging import logger

HELIX_DIMS = 3
MANIFOLD_SEED = 19301999
"""Seeds the lift into feature space, shared by every dataset so that they are comparable."""


@dataclass(frozen=True)
class SyntheticSpec:
    """
    Shape of a synthetic dataset.

    Years are placed on a helix: an arc of ``arc_radians`` in one plane plus a linear rise,
    lifted into ``d_in`` dimensions by a fixed orthogonal map. Nuisance clusters independent
    of the year occupy ``distractor_dims`` further directions, and isotropic Gaussian noise
    of scale ``noise_sigma`` is added to every dimension.
    """

    n_items: int = 2000
    span: YearSpan = field(default=DEFAULT_SPAN)
    d_in: int = 32
    noise_sigma: float = 0.1
    distractor_dims: int = 8
    seed: int = 0
    arc_radians: float = 0.9 * np.pi
    rise: float = 1.0
    distractor_clusters: int = 4
    distractor_scale: float = 1.0

    def __post_init__(self) -> None:
        """Validate the parameters."""
        if self.n_items < len(self.span):
            msg = (
                f"n_items ({self.n_items}) must be at least the number of years in the span "
                f"({len(self.span)})."
            )
            raise DataValidationError(msg)
        if self.noise_sigma < 0:
            msg = f"noise_sigma must be non-negative, got {self.noise_sigma}."
            raise DataValidationError(msg)
        if self.distractor_dims < 0 or self.d_in < HELIX_DIMS + self.distractor_dims:
            msg = (
                f"d_in ({self.d_in}) must hold the {HELIX_DIMS} helix dimensions and "
                f"{self.distractor_dims} distractor dimensions."
            )
            raise DataValidationError(msg)


def _lift(spec: SyntheticSpec) -> np.ndarray:
    columns = HELIX_DIMS + spec.distractor_dims
    gaussian = np.random.default_rng(MANIFOLD_SEED).normal(size=(spec.d_in, columns))
    orthonormal, _ = np.linalg.qr(gaussian)
    return orthonormal


def helix_anchor(spec: SyntheticSpec, years: np.ndarray) -> np.ndarray:
    """Position on the helix of each year, before lifting, shape (n, 3)."""
    width = max(len(spec.span) - 1, 1)
    progress = (np.asarray(years, dtype=np.float64) - spec.span.start) / width
    angle = spec.arc_radians * progress
    return np.column_stack(
        [np.cos(angle), np.sin(angle), spec.rise * (2.0 * progress - 1.0)],
    )


def generate(spec: SyntheticSpec) -> ItemSet:
    """
    Generate a dataset following ``spec``.

    Years are uniform over the span. The same seed always produces the same dataset.
    """
    rng = np.random.default_rng(spec.seed)
    lift = _lift(spec)

    years = spec.span.start + rng.integers(0, len(spec.span), size=spec.n_items)
    features = helix_anchor(spec, years) @ lift[:, :HELIX_DIMS].T

    if spec.distractor_dims:
        centres = spec.distractor_scale * rng.normal(
            size=(spec.distractor_clusters, spec.distractor_dims),
        )
        assignment = rng.integers(0, spec.distractor_clusters, size=spec.n_items)
        features += centres[assignment] @ lift[:, HELIX_DIMS:].T

    if spec.noise_sigma:
        features += spec.noise_sigma * rng.normal(size=features.shape)

    logger.info(
        f"Generated {spec.n_items} synthetic items over {spec.span.start}-{spec.span.end}",
        extra={"d_in": spec.d_in, "seed": spec.seed, "noise_sigma": spec.noise_sigma},
    )
    return ItemSet(np.arange(spec.n_items, dtype=np.int64), years, features)
