"""Build and save an approximate nearest neighbour index."""

from __future__ import annotations

from typing import TYPE_CHECKING

from dependency_injector.wiring import Provide, inject

from ranksmith.knn.ann_index import build_ann
from ranksmith.knn.support_set import SupportSet
from ranksmith.run.common import (
    embed,
    load_items,
    prepare_outputs,
    print_metrics,
    require_nonempty,
)
from ranksmith.setup.dependency_injection import RanksmithContainer

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem

    from ranksmith.data.feature_storage import FeatureStorage
    from ranksmith.data.labeled_item import YearSpan
    from ranksmith.knn.ann_index import AnnParams
    from ranksmith.knn.ann_storage import AnnIndexStorage
    from ranksmith.training.model_storage import EncoderStorage


@inject
def run(  # noqa: PLR0913
    feature_storage: FeatureStorage = Provide[RanksmithContainer.feature_storage],
    encoder_storage: EncoderStorage = Provide[RanksmithContainer.encoder_storage],
    ann_index_storage: AnnIndexStorage = Provide[RanksmithContainer.ann_index_storage],
    filesystem: AbstractFileSystem = Provide[RanksmithContainer.filesystem],
    span: YearSpan = Provide[RanksmithContainer.year_span],
    params: AnnParams = Provide[RanksmithContainer.ann_params],
    model: str = Provide[RanksmithContainer.config.model],
    support_path: str = Provide[RanksmithContainer.config.support],
    out: str = Provide[RanksmithContainer.config.out],
    threads: int = Provide[RanksmithContainer.config.threads],
) -> None:
    """Encode the support file and index it."""
    prepare_outputs(filesystem, [out], [model, support_path])
    encoder = encoder_storage.load(model)
    items = embed(encoder, load_items(feature_storage, support_path, span))
    require_nonempty(items, "support")

    index = build_ann(SupportSet.full(items), params, threads=threads)
    ann_index_storage.save(index, out)
    print_metrics({"items": len(index), "trees": params.tree_count, "out": out})
