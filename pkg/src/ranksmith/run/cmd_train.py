"""Train an encoder on a feature file."""

from __future__ import annotations

from typing import TYPE_CHECKING

from dependency_injector.wiring import Provide, inject

from ranksmith.errors import NonFiniteLossError
from ranksmith.logging import logger
from ranksmith.run.common import load_splits, prepare_outputs, print_metrics, require_nonempty
from ranksmith.setup.dependency_injection import RanksmithContainer
from ranksmith.training.encoder import Encoder, EncoderMode
from ranksmith.training.trainer import train

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem

    from ranksmith.data.feature_storage import FeatureStorage
    from ranksmith.data.labeled_item import YearSpan
    from ranksmith.data.split import SplitConfig
    from ranksmith.setup.seeds import Seeds
    from ranksmith.training.model_storage import EncoderStorage
    from ranksmith.training.train_config import TrainConfig
    from ranksmith.training.train_log import TrainLog


def log_path_for(out: str, log: str) -> str:
    """The training log path: ``log`` when given, else next to the model."""
    return log or f"{out}.log.csv"


@inject
def run(  # noqa: PLR0913
    feature_storage: FeatureStorage = Provide[RanksmithContainer.feature_storage],
    encoder_storage: EncoderStorage = Provide[RanksmithContainer.encoder_storage],
    filesystem: AbstractFileSystem = Provide[RanksmithContainer.filesystem],
    span: YearSpan = Provide[RanksmithContainer.year_span],
    split_config: SplitConfig = Provide[RanksmithContainer.split_config],
    train_config: TrainConfig = Provide[RanksmithContainer.train_config],
    mode: EncoderMode = Provide[RanksmithContainer.encoder_mode],
    d_out: int = Provide[RanksmithContainer.config.d_out],
    seeds: Seeds = Provide[RanksmithContainer.seeds],
    data: str = Provide[RanksmithContainer.config.data],
    out: str = Provide[RanksmithContainer.config.out],
    log: str = Provide[RanksmithContainer.config.log],
) -> None:
    """
    Train an encoder and write it with its log.

    The model file is rewritten at every evaluation. A run that fails with a non-finite loss
    writes the last encoder with a finite loss, and the log up to the failure, before
    re-raising.
    """
    log_path = log_path_for(out, log)
    prepare_outputs(filesystem, [out, log_path], [data])

    train_items, validation, _ = load_splits(feature_storage, data, span, split_config)
    require_nonempty(train_items, "train")

    initial = Encoder.initialise(
        mode,
        train_items,
        d_out,
        seed=seeds.init,
        normalize=train_config.normalize_embeddings,
    )

    def checkpoint(iteration: int, snapshot: Encoder) -> None:
        encoder_storage.save(snapshot, out)
        logger.debug(f"Checkpoint at iteration {iteration}")

    def write_log(train_log: TrainLog) -> None:
        with filesystem.open(log_path, "wb") as file:
            train_log.write_csv(file)

    try:
        encoder, train_log = train(
            train_items,
            train_config,
            initial,
            validation=validation if len(validation) else None,
            on_checkpoint=checkpoint,
        )
    except NonFiniteLossError as error:
        encoder_storage.save(error.last_finite_encoder or initial, out)
        if error.train_log is not None:
            write_log(error.train_log)
        logger.error(
            f"Training stopped at iteration {error.iteration}; "
            f"wrote the last finite encoder to {out}",
        )
        raise

    encoder_storage.save(encoder, out)
    write_log(train_log)

    final = train_log.records[-1] if train_log.records else None
    print_metrics(
        {
            "iterations": train_config.max_iterations,
            "loss": None if final is None else final.loss,
            "ndcg": None if final is None else final.ndcg,
            "val_ndcg": None if final is None else final.val_ndcg,
            "mae": None if final is None else final.mae,
        },
    )
