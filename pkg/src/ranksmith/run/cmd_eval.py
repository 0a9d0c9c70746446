"""Evaluate a trained encoder on the test split."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING

from dependency_injector.wiring import Provide, inject

from ranksmith.analysis.baselines import feature_baseline_metrics, random_baseline_metrics
from ranksmith.analysis.bin_similarity import bin_similarity
from ranksmith.errors import UsageError
from ranksmith.knn.ann_index import build_ann
from ranksmith.knn.curves import mae_vs_k_curve, write_curve_csv
from ranksmith.knn.predictor import predict_many
from ranksmith.knn.support_set import SupportSet
from ranksmith.metrics.regression import mean_absolute_error
from ranksmith.metrics.report import evaluate_retrieval
from ranksmith.run.common import (
    embed,
    load_splits,
    prepare_outputs,
    print_metrics,
    require_nonempty,
)
from ranksmith.setup.dependency_injection import RanksmithContainer

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem

    from ranksmith.data.feature_storage import FeatureStorage
    from ranksmith.data.labeled_item import ItemSet, YearSpan
    from ranksmith.data.split import SplitConfig
    from ranksmith.knn.ann_index import AnnParams
    from ranksmith.knn.neighbors import NeighborSearch
    from ranksmith.relevance import RelevanceSpec
    from ranksmith.setup.seeds import Seeds
    from ranksmith.training.model_storage import EncoderStorage


def parse_ks(text: str) -> list[int]:
    """Parse neighbour counts such as "1,2,5,10" or "k=1,2,5,10"."""
    body = text.removeprefix("k=")
    try:
        ks = [int(part) for part in body.split(",") if part.strip()]
    except ValueError as error:
        msg = f"Expected comma separated integers for --curve, got '{text}'."
        raise UsageError(msg) from error
    if not ks or min(ks) < 1:
        msg = f"--curve needs positive neighbour counts, got '{text}'."
        raise UsageError(msg)
    return ks


def _mae(
    queries: ItemSet,
    search: NeighborSearch,
    k: int,
    *,
    weighted: bool,
    threads: int,
) -> float:
    predictions = predict_many(queries.embeddings, search, k, weighted=weighted, threads=threads)
    return mean_absolute_error([p.year for p in predictions], queries.years)


@inject
def run(  # noqa: PLR0913
    feature_storage: FeatureStorage = Provide[RanksmithContainer.feature_storage],
    encoder_storage: EncoderStorage = Provide[RanksmithContainer.encoder_storage],
    filesystem: AbstractFileSystem = Provide[RanksmithContainer.filesystem],
    span: YearSpan = Provide[RanksmithContainer.year_span],
    split_config: SplitConfig = Provide[RanksmithContainer.split_config],
    relevance_spec: RelevanceSpec = Provide[RanksmithContainer.relevance_spec],
    ann_params: AnnParams = Provide[RanksmithContainer.ann_params],
    seeds: Seeds = Provide[RanksmithContainer.seeds],
    config: dict = Provide[RanksmithContainer.config],
) -> None:
    """Compute retrieval metrics, k-NN errors, baselines and the optional curve and matrix."""
    threads = int(config["threads"])
    k = int(config["k"])
    positive_gap = int(config["positive_gap"])
    ks = parse_ks(config["curve"]) if config["curve"] else []
    if ks and not config["curve_out"]:
        msg = "--curve needs --curve-out."
        raise UsageError(msg)
    prepare_outputs(
        filesystem,
        [config["out"], config["curve_out"], config["bin_sim_out"]],
        [config["data"], config["model"]],
    )

    train_items, _, test_items = load_splits(feature_storage, config["data"], span, split_config)
    require_nonempty(train_items, "train")
    require_nonempty(test_items, "test")

    encoder = encoder_storage.load(config["model"])
    support_pool = embed(encoder, train_items)
    queries = embed(encoder, test_items)
    if config["support"] == "sample":
        support_size = int(config["support_size"])
        support = SupportSet.random_sample(support_pool, support_size, seeds.analysis)
    else:
        support = SupportSet.full(support_pool)

    report = evaluate_retrieval(
        query_ids=queries.ids,
        query_years=queries.years,
        query_embeddings=queries.embeddings,
        candidate_ids=support.ids,
        candidate_years=support.years,
        candidate_embeddings=support.items.embeddings,
        relevance_spec=relevance_spec,
        positive_gap=positive_gap,
        threads=threads,
    ).with_mae(_mae(queries, support, k, weighted=False, threads=threads))

    metrics: dict[str, object] = dict(report.to_dict())
    metrics["mae_weighted"] = _mae(queries, support, k, weighted=True, threads=threads)
    if config["ann"]:
        index = build_ann(support, ann_params, threads=threads)
        metrics["mae_ann"] = _mae(queries, index, k, weighted=False, threads=threads)
        metrics["mae_ann_weighted"] = _mae(queries, index, k, weighted=True, threads=threads)
    metrics["mae_self_k1"] = mae_vs_k_curve(queries, SupportSet.full(queries), [1])[0][1]

    random_report = random_baseline_metrics(
        test_items,
        support.items,
        seeds.baselines,
        relevance_spec=relevance_spec,
        positive_gap=positive_gap,
        span=span,
        threads=threads,
    )
    feature_report = feature_baseline_metrics(
        test_items,
        support.items,
        relevance_spec=relevance_spec,
        k=k,
        positive_gap=positive_gap,
        threads=threads,
    )
    metrics |= {
        "random_map": random_report.map,
        "random_ndcg": random_report.ndcg,
        "random_mae": random_report.mae,
        "feature_map": feature_report.map,
        "feature_ndcg": feature_report.ndcg,
        "feature_mae": feature_report.mae,
    }

    if ks:
        curve = mae_vs_k_curve(queries, support, ks)
        with filesystem.open(config["curve_out"], "wb") as file:
            write_curve_csv(curve, file)

    if config["bin_sim_out"]:
        matrix = bin_similarity(
            queries,
            int(config["bin_width"]),
            span=span,
            seed=seeds.analysis,
            threads=threads,
        )
        with filesystem.open(config["bin_sim_out"], "wb") as file:
            matrix.write_csv(file)

    if config["out"]:
        with filesystem.open(config["out"], "w") as file:
            json.dump(metrics, file, indent=2, sort_keys=True)
    print_metrics(metrics)
