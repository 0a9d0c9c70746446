"""A module for setting up ranksmith runs using Dependency Injection."""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

from dependency_injector import containers, providers
from fsspec.implementations.local import LocalFileSystem

from ranksmith.core.ranking import Temperature
from ranksmith.data.feature_storage import FeatureStorage
from ranksmith.data.labeled_item import YearSpan
from ranksmith.data.split import SplitConfig
from ranksmith.data.synthetic import SyntheticSpec
from ranksmith.errors import UsageError
from ranksmith.knn.ann_index import AnnParams
from ranksmith.knn.ann_storage import AnnIndexStorage
from ranksmith.logging import logger
from ranksmith.losses.types import LossConfig, Objective
from ranksmith.relevance import RelevanceKind, RelevanceSpec
from ranksmith.setup.seeds import Seeds
from ranksmith.training.encoder import EncoderMode
from ranksmith.training.model_storage import EncoderStorage
from ranksmith.training.optimizers import OptimizerKind, OptimizerSpec
from ranksmith.training.train_config import TrainConfig

if TYPE_CHECKING:
    from argparse import Namespace


def _split_fractions(val_fraction: float, test_fraction: float) -> tuple[float, float, float]:
    train_fraction = 1.0 - val_fraction - test_fraction
    if train_fraction < 0:
        msg = f"Validation ({val_fraction}) and test ({test_fraction}) fractions exceed 1."
        raise UsageError(msg)
    return (train_fraction, val_fraction, test_fraction)


def _unset_if_zero(value: int) -> int | None:
    return value or None


class RanksmithContainer(containers.DeclarativeContainer):
    """
    Dependency Injection container for ranksmith.

    Configuration comes from the parsed command line; only the providers a subcommand
    uses are ever resolved, so each subcommand only needs its own flags.
    """

    config = providers.Configuration(strict=True)

    filesystem = providers.Singleton(LocalFileSystem, auto_mkdir=True)

    feature_storage = providers.Singleton(FeatureStorage, filesystem=filesystem)

    encoder_storage = providers.Singleton(EncoderStorage, filesystem=filesystem)

    ann_index_storage = providers.Singleton(AnnIndexStorage, filesystem=filesystem)

    seeds = providers.Singleton(Seeds, base=config.seed)

    year_span = providers.Singleton(YearSpan.parse, config.years)

    synthetic_spec = providers.Factory(
        SyntheticSpec,
        n_items=config.n,
        span=year_span,
        d_in=config.d_in,
        noise_sigma=config.noise,
        distractor_dims=config.distractor_dims,
        seed=seeds.provided.data,
    )

    split_config = providers.Factory(
        SplitConfig,
        fractions=providers.Callable(
            _split_fractions,
            config.val_fraction,
            config.test_fraction,
        ),
        seed=seeds.provided.split,
        balanced=config.balanced,
        test_per_year=config.test_per_year,
        span=year_span,
    )

    relevance_spec = providers.Factory(
        RelevanceSpec,
        kind=providers.Callable(RelevanceKind.from_name, config.relevance),
        gamma=config.gamma,
    )

    loss_config = providers.Factory(
        LossConfig,
        objective=providers.Callable(Objective.from_name, config.loss),
        tau=providers.Factory(Temperature, config.tau),
        relevance=relevance_spec,
        positive_gap=config.positive_gap,
    )

    optimizer_spec = providers.Factory(
        OptimizerSpec,
        kind=providers.Callable(OptimizerKind.from_name, config.optimizer),
        lr=config.lr,
        momentum=config.momentum,
    )

    encoder_mode = providers.Callable(EncoderMode.from_name, config.encoder)

    train_config = providers.Factory(
        TrainConfig,
        batch_size=config.batch_size,
        max_iterations=config.iterations,
        optimizer=optimizer_spec,
        loss=loss_config,
        seed=seeds.provided.train,
        eval_every=config.eval_every,
        normalize_embeddings=config.normalize,
        threads=config.threads,
    )

    ann_params = providers.Factory(
        AnnParams,
        tree_count=config.trees,
        leaf_capacity=config.leaf_capacity,
        search_budget=providers.Callable(_unset_if_zero, config.budget),
        seed=seeds.provided.ann,
    )


def init_dependencies_from_args(args: Namespace) -> RanksmithContainer:
    """
    Create a container with configuration taken from parsed command line arguments.

    The thread count falls back to RANKSMITH_THREADS, then to the number of CPUs.

    :param args: The parsed arguments; options left as None are not set.
    :return: The configured container.
    """
    container = RanksmithContainer()

    values = {
        key: value
        for key, value in vars(args).items()
        if value is not None and key not in {"threads", "handler"}
    }
    container.config.from_dict(values)

    container.config.threads.from_env(
        "RANKSMITH_THREADS",
        as_=int,
        default=str(os.cpu_count() or 1),
    )
    if args.threads is not None:
        container.config.threads.from_value(args.threads)

    logger.debug(f"Configured {args.command} with {container.config.threads()} threads")
    return container
