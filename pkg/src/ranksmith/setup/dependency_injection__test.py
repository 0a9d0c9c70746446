import os
from argparse import Namespace
from unittest.mock import patch

import pytest

from ranksmith.data.labeled_item import YearSpan
from ranksmith.errors import UsageError
from ranksmith.losses.types import Objective
from ranksmith.relevance import RelevanceKind
from ranksmith.setup.dependency_injection import init_dependencies_from_args
from ranksmith.training.encoder import EncoderMode
from ranksmith.training.optimizers import OptimizerKind


def _train_args(**overrides):
    values = {
        "command": "train",
        "handler": None,
        "threads": None,
        "config": None,
        "seed": 5,
        "years": "1930:1999",
        "encoder": "affine",
        "d_out": 16,
        "batch_size": 32,
        "iterations": 50,
        "eval_every": 10,
        "optimizer": "sgd",
        "lr": 0.01,
        "momentum": 0.5,
        "loss": "smooth-ap",
        "tau": 0.05,
        "normalize": True,
        "relevance": "exp-inverse",
        "gamma": 10.0,
        "positive_gap": 3,
        "val_fraction": 0.1,
        "test_fraction": 0.0,
        "test_per_year": 2,
        "balanced": True,
        "trees": 4,
        "leaf_capacity": 8,
        "budget": 0,
    }
    values.update(overrides)
    return Namespace(**values)


def test__init_dependencies_from_args__train_flags__train_config_built():
    container = init_dependencies_from_args(_train_args(threads=2))

    config = container.train_config()

    assert config.batch_size == 32
    assert config.max_iterations == 50
    assert config.normalize_embeddings
    assert config.seed == 7
    assert config.threads == 2
    assert config.optimizer.kind is OptimizerKind.SGD
    assert config.loss.objective is Objective.SMOOTH_AP
    assert config.loss.tau.tau == 0.05
    assert config.loss.positive_gap == 3
    assert config.loss.relevance.kind is RelevanceKind.EXP_INVERSE
    assert container.encoder_mode() is EncoderMode.AFFINE


def test__init_dependencies_from_args__no_thread_flag__environment_used():
    with patch.dict(os.environ, {"RANKSMITH_THREADS": "3"}):
        container = init_dependencies_from_args(_train_args())

    assert container.config.threads() == 3


def test__init_dependencies_from_args__split_and_span__derived():
    container = init_dependencies_from_args(_train_args(years="1950:1959"))

    split_config = container.split_config()

    assert container.year_span() == YearSpan(1950, 1959)
    assert split_config.fractions == pytest.approx((0.9, 0.1, 0.0))
    assert split_config.seed == 6
    assert split_config.balanced


def test__init_dependencies_from_args__fractions_above_one__usage_error():
    container = init_dependencies_from_args(_train_args(val_fraction=0.7, test_fraction=0.5))

    with pytest.raises(UsageError):
        container.split_config()


def test__init_dependencies_from_args__zero_budget__unset():
    container = init_dependencies_from_args(_train_args())

    params = container.ann_params()

    assert params.search_budget is None
    assert params.tree_count == 4
    assert params.seed == 8
