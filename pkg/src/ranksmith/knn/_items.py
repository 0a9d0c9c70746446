import numpy as np

from ranksmith.data.labeled_item import ItemSet


def embedded_items(ids, years, embeddings) -> ItemSet:
    embedding_array = np.asarray(embeddings, dtype=np.float64)
    return ItemSet(ids, years, np.zeros((len(ids), 1)), embedding_array)


def random_embedded_items(rng, n: int, dim: int = 8, start_id: int = 0) -> ItemSet:
    return embedded_items(
        np.arange(start_id, start_id + n),
        rng.integers(1930, 2000, size=n),
        rng.normal(size=(n, dim)),
    )
