"""The training loop: sample a batch, embed it, score its rankings and update the encoder."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import NonFiniteLossError, UsageError
from ranksmith.knn.predictor import predict_many
from ranksmith.knn.support_set import SupportSet
from ranksmith.logging import logger
from ranksmith.losses.batch_loss import compute_batch_loss
from ranksmith.metrics.regression import mean_absolute_error
from ranksmith.metrics.report import evaluate_retrieval
from ranksmith.training.encoder import EncoderMode
from ranksmith.training.train_log import TrainLog, TrainRecord

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator

    from numpy.typing import NDArray

    from ranksmith.data.labeled_item import ItemSet
    from ranksmith.training.encoder import Encoder
    from ranksmith.training.train_config import TrainConfig

type CheckpointCallback = Callable[[int, Encoder], None]


def epoch_batches(n_items: int, batch_size: int, rng: np.random.Generator) -> Iterator[NDArray]:
    """
    Endless disjoint batches of positions.

    Each epoch is a fresh permutation cut into full batches; the remainder is dropped.
    """
    per_epoch = n_items // batch_size
    while True:
        order = rng.permutation(n_items)
        for batch in range(per_epoch):
            yield order[batch * batch_size : (batch + 1) * batch_size]


def _evaluate(  # noqa: PLR0913
    *,
    iteration: int,
    loss: float,
    batch: ItemSet,
    batch_embeddings: NDArray[np.float64],
    items: ItemSet,
    validation: ItemSet | None,
    encoder: Encoder,
    cfg: TrainConfig,
) -> TrainRecord:
    batch_report = evaluate_retrieval(
        query_ids=batch.ids,
        query_years=batch.years,
        query_embeddings=batch_embeddings,
        candidate_ids=batch.ids,
        candidate_years=batch.years,
        candidate_embeddings=batch_embeddings,
        relevance_spec=cfg.loss.relevance,
        positive_gap=cfg.loss.positive_gap,
    )

    val_ndcg = None
    mae = None
    if validation is not None and len(validation) and encoder.mode is EncoderMode.AFFINE:
        train_embeddings = encoder.encode(items)
        val_embeddings = encoder.encode(validation)
        val_report = evaluate_retrieval(
            query_ids=validation.ids,
            query_years=validation.years,
            query_embeddings=val_embeddings,
            candidate_ids=items.ids,
            candidate_years=items.years,
            candidate_embeddings=train_embeddings,
            relevance_spec=cfg.loss.relevance,
            positive_gap=cfg.loss.positive_gap,
            threads=cfg.threads,
        )
        val_ndcg = val_report.ndcg
        support = SupportSet.full(items.with_embeddings(train_embeddings))
        predictions = predict_many(
            val_embeddings,
            support,
            cfg.validation_k,
            threads=cfg.threads,
        )
        mae = mean_absolute_error([p.year for p in predictions], validation.years)

    return TrainRecord(
        iteration=iteration,
        loss=loss,
        ndcg=batch_report.ndcg,
        val_ndcg=val_ndcg,
        mae=mae,
    )


def train(
    items: ItemSet,
    cfg: TrainConfig,
    enc: Encoder,
    validation: ItemSet | None = None,
    on_checkpoint: CheckpointCallback | None = None,
) -> tuple[Encoder, TrainLog]:
    """
    Train a copy of ``enc`` on ``items`` for ``cfg.max_iterations`` iterations.

    Every iteration samples a batch, embeds it, computes the smooth ranking loss over all
    pairs of the batch and applies one optimizer step. Every ``cfg.eval_every`` iterations a
    record is logged and ``on_checkpoint`` receives a snapshot of the encoder. The run is
    reproducible from ``cfg.seed``.

    :param items: The training items.
    :param cfg: The run configuration.
    :param enc: The initial encoder; it is not modified.
    :param validation: Held-out items for validation nDCG and MAE (affine encoders only).
    :param on_checkpoint: Called with (iteration, encoder snapshot) at each evaluation.
    :return: The trained encoder and the log.
    :raises UsageError: If there are fewer items than one batch.
    :raises NonFiniteLossError: If the loss or the gradient stops being finite.
    """
    if len(items) < cfg.batch_size:
        msg = f"Training needs at least batch_size={cfg.batch_size} items, got {len(items)}."
        raise UsageError(msg)

    encoder = enc.copy()
    encoder.normalize = cfg.normalize_embeddings
    optimizer = cfg.optimizer.build()
    rng = np.random.default_rng(cfg.seed)
    batches = epoch_batches(len(items), cfg.batch_size, rng)
    log = TrainLog()
    last_finite: Encoder | None = None

    logger.info(
        f"Training a {encoder.mode.cli_name} encoder for {cfg.max_iterations} iterations",
        extra={
            "objective": cfg.loss.objective.value,
            "batch_size": cfg.batch_size,
            "tau": cfg.loss.tau.tau,
            "seed": cfg.seed,
        },
    )

    for iteration in range(1, cfg.max_iterations + 1):
        batch = items.subset(next(batches))
        embeddings = encoder.encode(batch)
        if not np.all(np.isfinite(embeddings)):
            logger.error(f"Non-finite embeddings at iteration {iteration}")
            raise NonFiniteLossError(
                iteration=iteration,
                last_finite_encoder=last_finite,
                train_log=log,
            )
        result = compute_batch_loss(embeddings, batch.years, cfg.loss)
        if not math.isfinite(result.loss) or not np.all(np.isfinite(result.gradient)):
            logger.error(f"Non-finite loss at iteration {iteration}")
            raise NonFiniteLossError(
                iteration=iteration,
                last_finite_encoder=last_finite,
                train_log=log,
            )

        gradients = encoder.chain_gradient(result.gradient, batch)
        last_finite = encoder.copy()
        optimizer.step(encoder.params, gradients)
        log.batch_losses.append(result.loss)
        logger.debug(f"Iteration {iteration}: loss {result.loss:.6f}")

        if not encoder.is_finite():
            logger.error(f"Parameters became non-finite at iteration {iteration}")
            raise NonFiniteLossError(
                iteration=iteration,
                last_finite_encoder=last_finite,
                train_log=log,
            )

        if iteration % cfg.eval_every == 0:
            record = _evaluate(
                iteration=iteration,
                loss=result.loss,
                batch=batch,
                batch_embeddings=encoder.encode(batch),
                items=items,
                validation=validation,
                encoder=encoder,
                cfg=cfg,
            )
            log.append(record)
            logger.info(
                f"Iteration {iteration}: loss {record.loss:.4f}, batch nDCG {record.ndcg}",
                extra={"val_ndcg": record.val_ndcg, "mae": record.mae},
            )
            if on_checkpoint is not None:
                on_checkpoint(iteration, encoder.copy())

    return encoder, log
