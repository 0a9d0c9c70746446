"""Storage for trained encoders."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ranksmith.binary_format import BinaryReader, pack, prepare_parent
from ranksmith.errors import UsageError
from ranksmith.logging import logger
from ranksmith.training.encoder import Encoder, EncoderMode

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem

MODEL_MAGIC = b"RSMK1"


class EncoderStorage:
    """
    Storage for encoders.

    The layout is the magic ``RSMK1``, uint8 mode (0 free table, 1 affine), uint8 normalize
    flag, uint32 d_in, uint32 d_out and uint32 item count, followed for free tables by the
    int64 ids and the float64 rows, and for affine encoders by the float64 weights
    (d_in x d_out, row-major) and bias. All little-endian.
    """

    def __init__(self, filesystem: AbstractFileSystem) -> None:
        """
        Initialize the encoder storage.

        :param filesystem: The filesystem to use for storage.
        """
        self.filesystem = filesystem

    def save(self, encoder: Encoder, path: str) -> None:
        """Write ``encoder`` to ``path``."""
        count = 0 if encoder.ids is None else int(encoder.ids.size)
        prepare_parent(self.filesystem, path)
        with self.filesystem.open(path, "wb") as file:
            file.write(MODEL_MAGIC)
            file.write(
                pack(
                    "BBIII",
                    encoder.mode.code,
                    int(encoder.normalize),
                    encoder.d_in,
                    encoder.d_out,
                    count,
                ),
            )
            match encoder.mode:
                case EncoderMode.FREE_TABLE:
                    file.write(np.asarray(encoder.ids, dtype="<i8").tobytes())
                    file.write(encoder.params["table"].astype("<f8").tobytes())
                case EncoderMode.AFFINE:
                    file.write(encoder.params["weights"].astype("<f8").tobytes())
                    file.write(encoder.params["bias"].astype("<f8").tobytes())
        logger.info(f"Saved {encoder.mode.cli_name} encoder to {path}")

    def load(self, path: str) -> Encoder:
        """
        Read an encoder from ``path``.

        :raises FeatureFileError: For a malformed or truncated file, with the byte offset.
        """
        with self.filesystem.open(path, "rb") as file:
            reader = BinaryReader(file.read(), path)

        reader.expect_magic(MODEL_MAGIC)
        mode_code, normalize, d_in, d_out, count = reader.read_struct("BBIII", "header")
        try:
            mode = EncoderMode.from_code(mode_code)
        except UsageError as error:
            raise reader.fail(str(error), len(MODEL_MAGIC)) from error

        start = reader.offset
        try:
            match mode:
                case EncoderMode.FREE_TABLE:
                    ids = reader.read_array("<i8", count, "ids").astype(np.int64)
                    rows = reader.read_array("<f8", count * d_out, "rows").reshape(count, d_out)
                    encoder = Encoder.free_table(ids, rows, normalize=bool(normalize))
                case EncoderMode.AFFINE:
                    weights = reader.read_array("<f8", d_in * d_out, "weights")
                    bias = reader.read_array("<f8", d_out, "bias")
                    encoder = Encoder.affine(
                        weights.reshape(d_in, d_out),
                        bias,
                        normalize=bool(normalize),
                    )
        except UsageError as error:
            raise reader.fail(str(error), start) from error
        reader.expect_end()

        logger.info(f"Loaded {mode.cli_name} encoder from {path}")
        return encoder
