"""
Approximate nearest neighbour search with a forest of random projection trees.

Each tree splits its items by the side of a hyperplane through the origin, normal to the
difference of two random unit embeddings, until a node holds at most ``leaf_capacity`` items.
Queries walk all trees best-first from one shared priority queue, keyed by the smallest
margin seen on the way down, collect up to ``search_budget`` distinct candidates and rescore
them exactly.
"""

from __future__ import annotations

import heapq
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.core.vectors import as_vector, unit_rows
from ranksmith.errors import UsageError
from ranksmith.knn.neighbors import top_k
from ranksmith.logging import logger

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import ArrayLike, NDArray

    from ranksmith.knn.support_set import SupportSet

DEFAULT_TREE_COUNT = 16
DEFAULT_LEAF_CAPACITY = 32
MIN_SEARCH_BUDGET = 2048
BUDGET_PER_NEIGHBOR = 64
_SPLIT_ATTEMPTS = 8


def default_search_budget(k: int) -> int:
    """Candidates inspected per query when no budget is configured."""
    return max(MIN_SEARCH_BUDGET, BUDGET_PER_NEIGHBOR * k)


@dataclass(frozen=True)
class AnnParams:
    """Shape of the forest and how much of it a query inspects."""

    tree_count: int = DEFAULT_TREE_COUNT
    leaf_capacity: int = DEFAULT_LEAF_CAPACITY
    search_budget: int | None = None
    """Defaults to max(2048, 64 k) at query time."""
    seed: int = 0

    def __post_init__(self) -> None:
        """Validate the parameters."""
        if self.tree_count < 1 or self.leaf_capacity < 1:
            msg = "tree_count and leaf_capacity must be at least 1."
            raise UsageError(msg)
        if self.search_budget is not None and self.search_budget < 1:
            msg = f"search_budget must be at least 1, got {self.search_budget}."
            raise UsageError(msg)


@dataclass(frozen=True)
class RpTree:
    """
    One tree in flat arrays, rooted at node 0.

    Internal nodes store their hyperplane normal and the (left, right) child node indices;
    items with a positive margin go right. A leaf stores (-1 - start, count) in ``children``,
    naming a slice of ``indices``.
    """

    hyperplanes: NDArray[np.float64]
    children: NDArray[np.int32]
    indices: NDArray[np.int32]

    def is_leaf(self, node: int) -> bool:
        """Whether ``node`` is a leaf."""
        return bool(self.children[node, 0] < 0)

    def leaf_items(self, node: int) -> NDArray[np.int32]:
        """Item positions held by a leaf."""
        start = -1 - int(self.children[node, 0])
        return self.indices[start : start + int(self.children[node, 1])]


def _split(
    unit: NDArray[np.float64],
    positions: NDArray[np.int64],
    rng: np.random.Generator,
) -> tuple[NDArray[np.float64], NDArray[np.bool_]] | None:
    """A hyperplane normal and the right-hand mask, or None when the items are identical."""
    block = unit[positions]
    if np.all(block == block[0]):
        return None
    for _ in range(_SPLIT_ATTEMPTS):
        first, second = rng.choice(positions.size, size=2, replace=False)
        normal = block[first] - block[second]
        if np.any(normal):
            break
    normal = normal / max(float(np.linalg.norm(normal)), np.finfo(np.float64).tiny)
    margins = block @ normal
    right = margins > 0
    if right.all() or not right.any():
        right = np.zeros(positions.size, dtype=bool)
        right[rng.permutation(positions.size)[: positions.size // 2]] = True
    return normal, right


def _build_tree(
    unit: NDArray[np.float64],
    leaf_capacity: int,
    seed: np.random.SeedSequence,
) -> RpTree:
    rng = np.random.default_rng(seed)
    dim = unit.shape[1]
    hyperplanes: list[NDArray[np.float64]] = []
    children: list[list[int]] = []
    indices: list[NDArray[np.int64]] = []
    n_indices = 0
    degenerate = 0

    def new_node() -> int:
        hyperplanes.append(np.zeros(dim))
        children.append([0, 0])
        return len(children) - 1

    stack = [(new_node(), np.arange(unit.shape[0]))]
    while stack:
        node, positions = stack.pop()
        split = None if positions.size <= leaf_capacity else _split(unit, positions, rng)
        if split is None:
            if positions.size > leaf_capacity:
                degenerate += 1
            children[node] = [-1 - n_indices, positions.size]
            indices.append(positions)
            n_indices += positions.size
            continue
        normal, right = split
        left_node, right_node = new_node(), new_node()
        hyperplanes[node] = normal
        children[node] = [left_node, right_node]
        stack.append((right_node, positions[right]))
        stack.append((left_node, positions[~right]))

    if degenerate:
        logger.warning(f"{degenerate} oversized leaves hold identical embeddings.")
    return RpTree(
        hyperplanes=np.stack(hyperplanes),
        children=np.asarray(children, dtype=np.int32),
        indices=np.concatenate(indices).astype(np.int32),
    )


class AnnIndex:
    """An immutable forest over a support set; safe to query from many threads."""

    def __init__(  # noqa: PLR0913
        self,
        *,
        ids: NDArray[np.int64],
        years: NDArray[np.int64],
        unit: NDArray[np.float64],
        trees: Sequence[RpTree],
        params: AnnParams,
    ) -> None:
        """Assemble an index from its parts; ``build_ann`` is the usual entry point."""
        if not trees:
            msg = "An index needs at least one tree."
            raise UsageError(msg)
        self.ids = ids
        self.years = years
        self.unit = unit
        self.trees = tuple(trees)
        self.params = params

    def __len__(self) -> int:
        """Number of indexed items."""
        return int(self.ids.size)

    @property
    def dim(self) -> int:
        """Dimension of the embeddings."""
        return int(self.unit.shape[1])

    def candidates(self, query_unit: NDArray[np.float64], budget: int) -> NDArray[np.int64]:
        """Distinct item positions met while walking the trees best-first, up to ``budget``."""
        counter = itertools.count()
        heap = [(-np.inf, next(counter), tree, 0) for tree in range(len(self.trees))]
        seen = np.zeros(len(self), dtype=bool)
        found: list[NDArray[np.int32]] = []
        n_found = 0
        while heap and n_found < budget:
            negative_priority, _, tree_index, node = heapq.heappop(heap)
            tree = self.trees[tree_index]
            if tree.is_leaf(node):
                items = tree.leaf_items(node)
                fresh = items[~seen[items]]
                seen[fresh] = True
                found.append(fresh)
                n_found += fresh.size
                continue
            priority = -negative_priority
            margin = float(tree.hyperplanes[node] @ query_unit)
            left, right = tree.children[node]
            heapq.heappush(heap, (-min(priority, margin), next(counter), tree_index, int(right)))
            heapq.heappush(heap, (-min(priority, -margin), next(counter), tree_index, int(left)))
        if not found:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(found).astype(np.int64)

    def search(
        self,
        query_units: NDArray[np.float64],
        k: int,
    ) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
        """Approximate top ``k`` positions and exact similarities for every query row."""
        if query_units.shape[1] != self.dim:
            msg = f"Query dimension {query_units.shape[1]} does not match index {self.dim}."
            raise UsageError(msg)
        budget = self.params.search_budget or default_search_budget(k)
        k = min(k, len(self))
        all_positions = []
        all_similarities = []
        for query in query_units:
            candidates = np.sort(self.candidates(query, max(budget, k)))
            similarities = self.unit[candidates] @ query
            order = top_k(similarities, k)
            all_positions.append(candidates[order])
            all_similarities.append(similarities[order])
        return np.stack(all_positions), np.stack(all_similarities)


def build_ann(support: SupportSet, params: AnnParams | None = None, threads: int = 1) -> AnnIndex:
    """
    Build a forest over the support set.

    The result depends only on the support and the params; trees are built in parallel
    from independent child seeds.
    """
    params = params or AnnParams()
    if len(support) <= params.leaf_capacity:
        logger.info("The support fits in one leaf; every tree is a single leaf.")
    seeds = np.random.SeedSequence(params.seed).spawn(params.tree_count)

    def build(seed: np.random.SeedSequence) -> RpTree:
        return _build_tree(support.unit, params.leaf_capacity, seed)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            trees = list(executor.map(build, seeds))
    else:
        trees = [build(seed) for seed in seeds]

    logger.info(
        f"Built {params.tree_count} trees over {len(support)} items",
        extra={"leaf_capacity": params.leaf_capacity, "seed": params.seed},
    )
    return AnnIndex(
        ids=support.ids,
        years=support.years,
        unit=support.unit,
        trees=trees,
        params=params,
    )


def ann_query(index: AnnIndex, query: ArrayLike, k: int) -> NDArray[np.int64]:
    """Ids of the approximate ``k`` nearest items, most similar first."""
    if k < 1:
        msg = f"k must be at least 1, got {k}."
        raise UsageError(msg)
    positions, _ = index.search(unit_rows(as_vector(query)[None, :]), k)
    return index.ids[positions[0]]


def recall_at_k(approximate: Sequence[ArrayLike], exact: Sequence[ArrayLike]) -> float:
    """Mean fraction of the exact neighbours that the approximate search also returned."""
    if len(approximate) != len(exact) or not exact:
        msg = "recall_at_k needs the same, non-zero number of approximate and exact results."
        raise UsageError(msg)
    fractions = [
        np.intersect1d(found, truth).size / np.asarray(truth).size
        for found, truth in zip(approximate, exact, strict=True)
    ]
    return float(np.mean(fractions))
