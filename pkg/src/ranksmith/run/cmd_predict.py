"""Predict years for query items with a trained encoder."""

from __future__ import annotations

from typing import TYPE_CHECKING

import polars as pl
from dependency_injector.wiring import Provide, inject

from ranksmith.errors import UsageError
from ranksmith.knn.predictor import Prediction, predict_many
from ranksmith.knn.support_set import ResampledSupport, SupportSet
from ranksmith.logging import logger
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
    from ranksmith.data.labeled_item import ItemSet, YearSpan
    from ranksmith.knn.ann_storage import AnnIndexStorage
    from ranksmith.knn.neighbors import NeighborSearch
    from ranksmith.setup.seeds import Seeds
    from ranksmith.training.model_storage import EncoderStorage

PREDICTION_SCHEMA = {
    "id": pl.Int64,
    "predicted_year": pl.Int64,
    "neighbor_ids": pl.String,
    "similarities": pl.String,
}


def predictions_frame(queries: ItemSet, predictions: list[Prediction]) -> pl.DataFrame:
    """One row per query with its neighbours joined by ";"."""
    return pl.DataFrame(
        {
            "id": queries.ids.tolist(),
            "predicted_year": [p.year for p in predictions],
            "neighbor_ids": [";".join(str(i) for i in p.neighbor_ids) for p in predictions],
            "similarities": [
                ";".join(f"{s:.6f}" for s in p.neighbor_similarities) for p in predictions
            ],
        },
        schema=PREDICTION_SCHEMA,
    )


@inject
def run(  # noqa: PLR0913
    feature_storage: FeatureStorage = Provide[RanksmithContainer.feature_storage],
    encoder_storage: EncoderStorage = Provide[RanksmithContainer.encoder_storage],
    ann_index_storage: AnnIndexStorage = Provide[RanksmithContainer.ann_index_storage],
    filesystem: AbstractFileSystem = Provide[RanksmithContainer.filesystem],
    span: YearSpan = Provide[RanksmithContainer.year_span],
    seeds: Seeds = Provide[RanksmithContainer.seeds],
    config: dict = Provide[RanksmithContainer.config],
) -> None:
    """
    Write a prediction CSV ordered by query id.

    The neighbours come from the ANN index given with --ann, otherwise from an exact scan of
    the encoded --support file. With --support-size every query draws its own random support
    of that size.
    """
    prepare_outputs(
        filesystem,
        [config["out"]],
        [config["model"], config["queries"], config["support"], config["ann"]],
    )
    encoder = encoder_storage.load(config["model"])
    queries = embed(encoder, load_items(feature_storage, config["queries"], span).sorted_by_id())
    require_nonempty(queries, "query")

    search: NeighborSearch | ResampledSupport
    if config["ann"]:
        search = ann_index_storage.load(config["ann"])
        if search.dim != queries.embeddings.shape[1]:
            msg = f"The index holds {search.dim}-d embeddings, the model makes {encoder.d_out}."
            raise UsageError(msg)
    elif config["support"]:
        pool = embed(encoder, load_items(feature_storage, config["support"], span))
        support_size = int(config["support_size"])
        if support_size:
            search = ResampledSupport(pool, support_size, seeds.analysis)
        else:
            search = SupportSet.full(pool)
    else:
        msg = "predict needs --support or --ann."
        raise UsageError(msg)

    predictions = predict_many(
        queries.embeddings,
        search,
        int(config["k"]),
        weighted=bool(config["weighted"]),
        threads=int(config["threads"]),
    )
    with filesystem.open(config["out"], "wb") as file:
        predictions_frame(queries, predictions).write_csv(file)
    logger.info(f"Wrote {len(predictions)} predictions to {config['out']}")

    print_metrics(
        {
            "queries": len(predictions),
            "k_clamped": sum(p.k_clamped for p in predictions),
            "weighted_fallback": sum(p.weighted_fallback for p in predictions),
        },
    )
