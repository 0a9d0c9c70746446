"""Helpers shared by the subcommands."""

from __future__ import annotations

import sys
from typing import TYPE_CHECKING

from ranksmith.binary_format import prepare_parent
from ranksmith.data.split import split
from ranksmith.errors import DataValidationError, UsageError
from ranksmith.training.encoder import EncoderMode

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from fsspec import AbstractFileSystem

    from ranksmith.data.feature_storage import FeatureStorage
    from ranksmith.data.labeled_item import ItemSet, YearSpan
    from ranksmith.data.split import SplitConfig
    from ranksmith.training.encoder import Encoder


def load_items(storage: FeatureStorage, path: str, span: YearSpan) -> ItemSet:
    """Read a feature file, as CSV when the path ends in ".csv"."""
    if path.lower().endswith(".csv"):
        return storage.load_csv(path, span)
    return storage.load(path, span)


def load_splits(
    storage: FeatureStorage,
    path: str,
    span: YearSpan,
    split_config: SplitConfig,
) -> tuple[ItemSet, ItemSet, ItemSet]:
    """Read a dataset and split it the same way every subcommand does."""
    return split(load_items(storage, path, span), split_config)


def embed(encoder: Encoder, items: ItemSet) -> ItemSet:
    """
    Attach the encoder's embeddings to ``items``.

    :raises DataValidationError: If the features do not match the encoder.
    """
    if encoder.mode is EncoderMode.AFFINE and items.dim != encoder.d_in:
        msg = f"The model expects {encoder.d_in} features, the data has {items.dim}."
        raise DataValidationError(msg)
    return items.with_embeddings(encoder.encode(items))


def require_nonempty(items: ItemSet, name: str) -> None:
    """Fail with a usage error when a split is empty."""
    if len(items) == 0:
        msg = f"The {name} split is empty; adjust the split flags."
        raise UsageError(msg)


def _format(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def print_metrics(metrics: Mapping[str, object]) -> None:
    """Print one line of key=value pairs to stdout."""
    sys.stdout.write(" ".join(f"{key}={_format(value)}" for key, value in metrics.items()) + "\n")


def prepare_outputs(
    filesystem: AbstractFileSystem,
    outputs: Sequence[str],
    inputs: Sequence[str] = (),
) -> None:
    """
    Check output paths and create their directories before any work starts.

    Empty paths are ignored.

    :raises UsageError: If an output is also an input, or two outputs are the same file.
    """
    seen = {filesystem.unstrip_protocol(path): path for path in inputs if path}
    for path in outputs:
        if not path:
            continue
        resolved = filesystem.unstrip_protocol(path)
        if resolved in seen:
            msg = f"The output {path} would overwrite {seen[resolved]}."
            raise UsageError(msg)
        seen[resolved] = path
        prepare_parent(filesystem, path)
