"""Reading and writing ANN index files."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ranksmith.binary_format import BinaryReader, pack, prepare_parent
from ranksmith.knn.ann_index import AnnIndex, AnnParams, RpTree
from ranksmith.logging import logger

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem

INDEX_MAGIC = b"RSAN1"
_NO_BUDGET = 0


class AnnIndexStorage:
    """
    Storage for ANN indexes.

    The layout is the magic ``RSAN1``, uint32 tree_count, leaf_capacity, search_budget
    (0 when unset), dim and n_items, uint64 seed, then int64 ids, float64 unit embeddings and
    int32 years. Each tree follows as uint32 n_nodes and n_indices, float64 hyperplanes
    (n_nodes x dim), int32 children (n_nodes x 2) and int32 indices. All little-endian.
    """

    def __init__(self, filesystem: AbstractFileSystem) -> None:
        """Initialize the storage on ``filesystem``."""
        self.filesystem = filesystem

    def save(self, index: AnnIndex, path: str) -> None:
        """Write ``index`` to ``path``."""
        params = index.params
        prepare_parent(self.filesystem, path)
        with self.filesystem.open(path, "wb") as file:
            file.write(INDEX_MAGIC)
            file.write(
                pack(
                    "IIIIIQ",
                    params.tree_count,
                    params.leaf_capacity,
                    params.search_budget or _NO_BUDGET,
                    index.dim,
                    len(index),
                    params.seed,
                ),
            )
            file.write(index.ids.astype("<i8").tobytes())
            file.write(index.unit.astype("<f8").tobytes())
            file.write(index.years.astype("<i4").tobytes())
            for tree in index.trees:
                file.write(pack("II", tree.children.shape[0], tree.indices.size))
                file.write(tree.hyperplanes.astype("<f8").tobytes())
                file.write(tree.children.astype("<i4").tobytes())
                file.write(tree.indices.astype("<i4").tobytes())
        logger.info(f"Wrote an index of {len(index)} items to {path}")

    def load(self, path: str) -> AnnIndex:
        """
        Read an index from ``path``.

        :raises FeatureFileError: For a malformed or truncated file, with the byte offset.
        """
        with self.filesystem.open(path, "rb") as file:
            reader = BinaryReader(file.read(), path)

        reader.expect_magic(INDEX_MAGIC)
        tree_count, leaf_capacity, budget, dim, n_items, seed = reader.read_struct(
            "IIIIIQ",
            "header",
        )
        if tree_count == 0 or dim == 0:
            msg = "An index needs at least one tree and one dimension."
            raise reader.fail(msg, len(INDEX_MAGIC))

        ids = reader.read_array("<i8", n_items, "ids").astype(np.int64)
        unit = reader.read_array("<f8", n_items * dim, "embeddings").reshape(n_items, dim)
        years = reader.read_array("<i4", n_items, "years").astype(np.int64)

        trees = []
        for tree_number in range(tree_count):
            n_nodes, n_indices = reader.read_struct("II", f"tree {tree_number} header")
            hyperplanes = reader.read_array("<f8", n_nodes * dim, "hyperplanes")
            children = reader.read_array("<i4", n_nodes * 2, "children")
            start = reader.offset
            indices = reader.read_array("<i4", n_indices, "indices")
            if n_indices != n_items or np.any((indices < 0) | (indices >= n_items)):
                msg = f"Tree {tree_number} does not index every item exactly once."
                raise reader.fail(msg, start)
            trees.append(
                RpTree(
                    hyperplanes=hyperplanes.reshape(n_nodes, dim),
                    children=children.reshape(n_nodes, 2).astype(np.int32),
                    indices=indices.astype(np.int32),
                ),
            )
        reader.expect_end()

        return AnnIndex(
            ids=ids,
            years=years,
            unit=unit,
            trees=trees,
            params=AnnParams(
                tree_count=tree_count,
                leaf_capacity=leaf_capacity,
                search_budget=budget or None,
                seed=seed,
            ),
        )
