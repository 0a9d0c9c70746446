"""Mean cosine similarity between the embeddings of year bins."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, TYPE_CHECKING

import numpy as np
import polars as pl
from scipy.stats import spearmanr

from ranksmith.core.vectors import unit_rows
from ranksmith.errors import UsageError
from ranksmith.logging import logger

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from ranksmith.data.labeled_item import ItemSet, YearSpan

DEFAULT_BIN_WIDTH = 5
MAX_PAIRS_PER_BIN_PAIR = 100_000
MIN_NONEMPTY_BINS = 2


@dataclass(frozen=True)
class BinSimilarityMatrix:
    """
    Mean pairwise similarity for every pair of year bins.

    ``matrix`` is symmetric; missing entries (an empty bin, or a bin with one item on the
    diagonal) are NaN. ``counts`` holds the number of pairs each entry averages.
    """

    edges: tuple[tuple[int, int], ...]
    matrix: NDArray[np.float64]
    counts: NDArray[np.int64]

    @property
    def labels(self) -> list[str]:
        """Bin labels such as "1930-1934"."""
        return [f"{start}-{end}" for start, end in self.edges]

    def to_frame(self) -> pl.DataFrame:
        """The matrix with a leading "bin" label column; missing entries are null."""
        columns: dict[str, list[str] | list[float | None]] = {"bin": self.labels}
        for column, label in enumerate(self.labels):
            columns[label] = [
                None if np.isnan(value) else float(value) for value in self.matrix[:, column]
            ]
        return pl.DataFrame(
            columns,
            schema={"bin": pl.String, **dict.fromkeys(self.labels, pl.Float64)},
        )

    def write_csv(self, target: str | IO[bytes]) -> None:
        """Write the matrix as CSV; missing entries are empty fields."""
        self.to_frame().write_csv(target)


def year_bins(span: YearSpan, bin_width: int) -> tuple[tuple[int, int], ...]:
    """Consecutive inclusive bins of ``bin_width`` years over ``span``; the last may be short."""
    if bin_width < 1:
        msg = f"bin_width must be at least 1, got {bin_width}."
        raise UsageError(msg)
    return tuple(
        (start, min(start + bin_width - 1, span.end))
        for start in range(span.start, span.end + 1, bin_width)
    )


def _mean_similarity(
    first: NDArray[np.float64],
    second: NDArray[np.float64] | None,
    rng: np.random.Generator,
    max_pairs: int,
) -> tuple[float, int]:
    if second is None:
        n = first.shape[0]
        n_pairs = n * (n - 1) // 2
        if n_pairs == 0:
            return float("nan"), 0
        if n_pairs <= max_pairs:
            similarities = first @ first.T
            return float(similarities[np.triu_indices(n, k=1)].mean()), n_pairs
        left = rng.integers(0, n, size=max_pairs)
        right = (left + rng.integers(1, n, size=max_pairs)) % n
        return float(np.einsum("ij,ij->i", first[left], first[right]).mean()), max_pairs

    n_pairs = first.shape[0] * second.shape[0]
    if n_pairs == 0:
        return float("nan"), 0
    if n_pairs <= max_pairs:
        return float((first @ second.T).mean()), n_pairs
    left = rng.integers(0, first.shape[0], size=max_pairs)
    right = rng.integers(0, second.shape[0], size=max_pairs)
    return float(np.einsum("ij,ij->i", first[left], second[right]).mean()), max_pairs


def bin_similarity(  # noqa: PLR0913
    items: ItemSet,
    bin_width: int = DEFAULT_BIN_WIDTH,
    *,
    span: YearSpan | None = None,
    seed: int = 0,
    max_pairs: int = MAX_PAIRS_PER_BIN_PAIR,
    threads: int = 1,
) -> BinSimilarityMatrix:
    """
    Average the cosine similarity of embeddings over every pair of year bins.

    Within a bin the pairs exclude self-pairs. Bin pairs with more than ``max_pairs`` pairs
    are subsampled under ``seed``. The result does not depend on the order of ``items``.

    :raises UsageError: Without embeddings, or with fewer than two nonempty bins.
    """
    if items.embeddings is None:
        msg = "Bin similarity needs items with embeddings."
        raise UsageError(msg)
    ordered = items.sorted_by_id()
    edges = year_bins(span or ordered.year_span(), bin_width)
    unit = unit_rows(ordered.embeddings)
    members = [unit[(ordered.years >= start) & (ordered.years <= end)] for start, end in edges]
    if sum(1 for member in members if member.shape[0]) < MIN_NONEMPTY_BINS:
        msg = f"At least {MIN_NONEMPTY_BINS} nonempty bins are needed."
        raise UsageError(msg)

    pairs = list(itertools.combinations_with_replacement(range(len(edges)), 2))

    def entry(pair: tuple[int, int]) -> tuple[float, int]:
        first, second = pair
        rng = np.random.default_rng([seed, first, second])
        return _mean_similarity(
            members[first],
            None if first == second else members[second],
            rng,
            max_pairs,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(entry, pairs))
    else:
        results = [entry(pair) for pair in pairs]

    matrix = np.full((len(edges), len(edges)), np.nan)
    counts = np.zeros((len(edges), len(edges)), dtype=np.int64)
    for (first, second), (mean, count) in zip(pairs, results, strict=True):
        matrix[first, second] = matrix[second, first] = mean
        counts[first, second] = counts[second, first] = count

    missing = int(np.isnan(matrix[np.triu_indices(len(edges))]).sum())
    if missing:
        logger.warning(f"{missing} bin pairs have no item pairs and are left missing.")
    return BinSimilarityMatrix(edges=edges, matrix=matrix, counts=counts)


def bin_similarity_correlation(matrix: BinSimilarityMatrix) -> float:
    """
    Spearman correlation between the bin index gap and the mean similarity.

    Uses the upper triangle including the diagonal, skipping missing entries.
    """
    rows, columns = np.triu_indices(matrix.matrix.shape[0])
    values = matrix.matrix[rows, columns]
    present = ~np.isnan(values)
    gaps = np.abs(rows - columns)[present]
    return float(spearmanr(gaps, values[present]).statistic)
