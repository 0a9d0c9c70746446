"""Trainable maps from items to embeddings."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import UsageError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from ranksmith.data.labeled_item import ItemSet

MIN_EMBEDDING_DIM = 2
INIT_SCALE = 0.1

type Parameters = dict[str, NDArray[np.float64]]


class EncoderMode(Enum):
    """How an encoder turns an item into an embedding."""

    FREE_TABLE = ("free-table", 0)
    """One directly optimised embedding per known item id."""

    AFFINE = ("affine", 1)
    """A linear map with bias applied to the item features."""

    def __init__(self, cli_name: str, code: int) -> None:
        """
        Initialize the mode.

        :param cli_name: The command line name of the mode.
        :param code: The mode byte of the encoder file format.
        """
        self.cli_name = cli_name
        self.code = code

    @staticmethod
    def from_name(name: str) -> EncoderMode:
        """Resolve a command line name into a mode."""
        for mode in EncoderMode:
            if mode.cli_name == name:
                return mode
        valid = ", ".join(mode.cli_name for mode in EncoderMode)
        msg = f"Unknown encoder '{name}'. Valid values: {valid}"
        raise UsageError(msg)

    @staticmethod
    def from_code(code: int) -> EncoderMode:
        """Resolve a file format mode byte into a mode."""
        for mode in EncoderMode:
            if mode.code == code:
                return mode
        msg = f"Unknown encoder mode byte {code}."
        raise UsageError(msg)


@dataclass
class Encoder:
    """
    The trainable parameters that produce embeddings.

    Free table encoders hold ``table`` rows aligned with the ascending ``ids``. Affine
    encoders hold ``weights`` (d_in x d_out) and ``bias`` (d_out). When ``normalize`` is set
    the outputs are scaled to unit length.
    """

    mode: EncoderMode
    params: Parameters
    ids: NDArray[np.int64] | None = None
    normalize: bool = False
    d_in: int = field(init=False)
    d_out: int = field(init=False)

    def __post_init__(self) -> None:
        """Validate the parameters and derive the dimensions."""
        match self.mode:
            case EncoderMode.AFFINE:
                weights, bias = self.params["weights"], self.params["bias"]
                if weights.ndim != 2 or bias.shape != (weights.shape[1],):  # noqa: PLR2004
                    msg = f"Affine weights {weights.shape} do not match bias {bias.shape}."
                    raise UsageError(msg)
                self.d_in, self.d_out = weights.shape
            case EncoderMode.FREE_TABLE:
                table = self.params["table"]
                if self.ids is None or table.ndim != 2 or table.shape[0] != self.ids.size:  # noqa: PLR2004
                    msg = "A free table needs one row per id."
                    raise UsageError(msg)
                if np.any(np.diff(self.ids) <= 0):
                    msg = "Free table ids must be strictly increasing."
                    raise UsageError(msg)
                self.d_in, self.d_out = 0, table.shape[1]

        if self.d_out < MIN_EMBEDDING_DIM:
            msg = f"Embeddings need at least {MIN_EMBEDDING_DIM} dimensions, got {self.d_out}."
            raise UsageError(msg)
        if not self.is_finite():
            msg = "Encoder parameters must be finite."
            raise UsageError(msg)

    @staticmethod
    def affine(weights: ArrayLike, bias: ArrayLike, *, normalize: bool = False) -> Encoder:
        """Build an affine encoder from its weights and bias."""
        return Encoder(
            EncoderMode.AFFINE,
            {
                "weights": np.array(weights, dtype=np.float64),
                "bias": np.array(bias, dtype=np.float64),
            },
            normalize=normalize,
        )

    @staticmethod
    def free_table(ids: ArrayLike, rows: ArrayLike, *, normalize: bool = False) -> Encoder:
        """Build a free table encoder, sorting the rows by id."""
        id_array = np.asarray(ids, dtype=np.int64)
        order = np.argsort(id_array, kind="stable")
        return Encoder(
            EncoderMode.FREE_TABLE,
            {"table": np.array(rows, dtype=np.float64)[order]},
            ids=id_array[order],
            normalize=normalize,
        )

    @staticmethod
    def initialise(
        mode: EncoderMode,
        items: ItemSet,
        d_out: int,
        *,
        seed: int,
        normalize: bool = False,
    ) -> Encoder:
        """
        Draw initial parameters uniformly in [-0.1, 0.1], with a zero bias.

        Free tables get one row for every id of ``items``.
        """
        rng = np.random.default_rng(seed)
        match mode:
            case EncoderMode.AFFINE:
                weights = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(items.dim, d_out))
                return Encoder.affine(weights, np.zeros(d_out), normalize=normalize)
            case EncoderMode.FREE_TABLE:
                rows = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(len(items), d_out))
                return Encoder.free_table(items.ids, rows, normalize=normalize)

    def copy(self) -> Encoder:
        """A snapshot whose parameters are independent of this encoder."""
        return Encoder(
            self.mode,
            {name: value.copy() for name, value in self.params.items()},
            ids=None if self.ids is None else self.ids.copy(),
            normalize=self.normalize,
        )

    def is_finite(self) -> bool:
        """Whether every parameter is finite."""
        return all(np.all(np.isfinite(value)) for value in self.params.values())

    def _table_rows(self, ids: NDArray[np.int64]) -> NDArray[np.int64]:
        known = self.ids if self.ids is not None else np.empty(0, dtype=np.int64)
        rows = np.minimum(np.searchsorted(known, ids), max(known.size - 1, 0))
        unknown = known.size == 0 or np.any(known[rows] != ids)
        if unknown:
            missing = np.setdiff1d(ids, known)[:10].tolist()
            msg = f"The free table has no rows for ids {missing}."
            raise UsageError(msg)
        return rows

    def _raw(self, items: ItemSet) -> NDArray[np.float64]:
        match self.mode:
            case EncoderMode.AFFINE:
                if items.dim != self.d_in:
                    msg = f"The encoder expects {self.d_in} features, got {items.dim}."
                    raise UsageError(msg)
                return items.features @ self.params["weights"] + self.params["bias"]
            case EncoderMode.FREE_TABLE:
                return self.params["table"][self._table_rows(items.ids)]

    def encode(self, items: ItemSet) -> NDArray[np.float64]:
        """
        Embed every item, in order.

        :raises UsageError: For unknown ids in free table mode, or a feature dimension
            mismatch in affine mode.
        """
        raw = self._raw(items)
        if not self.normalize:
            return raw
        return raw / np.linalg.norm(raw, axis=1, keepdims=True)

    def chain_gradient(
        self,
        dloss_dembedding: ArrayLike,
        items: ItemSet,
    ) -> Parameters:
        """
        Chain the loss gradient with respect to the embeddings of ``items`` into the parameters.

        :return: Gradients keyed like ``params``.
        :raises UsageError: If the gradient shape does not match the encoded items.
        """
        upstream = np.asarray(dloss_dembedding, dtype=np.float64)
        if upstream.shape != (len(items), self.d_out):
            msg = f"Expected a gradient of shape {(len(items), self.d_out)}, got {upstream.shape}."
            raise UsageError(msg)

        if self.normalize:
            raw = self._raw(items)
            norms = np.linalg.norm(raw, axis=1, keepdims=True)
            unit = raw / norms
            upstream = (upstream - (upstream * unit).sum(axis=1, keepdims=True) * unit) / norms

        match self.mode:
            case EncoderMode.AFFINE:
                if items.dim != self.d_in:
                    msg = f"The encoder expects {self.d_in} features, got {items.dim}."
                    raise UsageError(msg)
                return {"weights": items.features.T @ upstream, "bias": upstream.sum(axis=0)}
            case EncoderMode.FREE_TABLE:
                table_gradient = np.zeros_like(self.params["table"])
                np.add.at(table_gradient, self._table_rows(items.ids), upstream)
                return {"table": table_gradient}
