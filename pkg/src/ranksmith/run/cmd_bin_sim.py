"""Average embedding similarity between year bins."""

from __future__ import annotations

from typing import TYPE_CHECKING

from dependency_injector.wiring import Provide, inject

from ranksmith.analysis.bin_similarity import bin_similarity, bin_similarity_correlation
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
    from ranksmith.data.labeled_item import YearSpan
    from ranksmith.data.split import SplitConfig
    from ranksmith.setup.seeds import Seeds
    from ranksmith.training.model_storage import EncoderStorage


@inject
def run(  # noqa: PLR0913
    feature_storage: FeatureStorage = Provide[RanksmithContainer.feature_storage],
    encoder_storage: EncoderStorage = Provide[RanksmithContainer.encoder_storage],
    filesystem: AbstractFileSystem = Provide[RanksmithContainer.filesystem],
    span: YearSpan = Provide[RanksmithContainer.year_span],
    split_config: SplitConfig = Provide[RanksmithContainer.split_config],
    seeds: Seeds = Provide[RanksmithContainer.seeds],
    config: dict = Provide[RanksmithContainer.config],
) -> None:
    """Write the bin similarity matrix of one split and print its rank correlation."""
    prepare_outputs(filesystem, [config["out"]], [config["data"], config["model"]])
    train_items, _, test_items = load_splits(feature_storage, config["data"], span, split_config)
    items = test_items if config["which"] == "test" else train_items
    require_nonempty(items, config["which"])

    encoder = encoder_storage.load(config["model"])
    matrix = bin_similarity(
        embed(encoder, items),
        int(config["bin_width"]),
        span=span,
        seed=seeds.analysis,
        threads=int(config["threads"]),
    )
    with filesystem.open(config["out"], "wb") as file:
        matrix.write_csv(file)
    print_metrics(
        {
            "bins": len(matrix.edges),
            "spearman": bin_similarity_correlation(matrix),
            "out": config["out"],
        },
    )
