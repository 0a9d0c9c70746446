"""Reading and writing feature files."""

from __future__ import annotations

from io import BytesIO
from typing import TYPE_CHECKING

import numpy as np
import polars as pl

from ranksmith.binary_format import BinaryReader, pack, prepare_parent
from ranksmith.data.labeled_item import DEFAULT_SPAN, ItemSet, YearSpan
from ranksmith.errors import FeatureFileError
from ranksmith.logging import logger

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem

FEATURE_MAGIC = b"RSFT1"


def _record_dtype(d_in: int) -> np.dtype:
    return np.dtype([("id", "<i8"), ("year", "<i4"), ("features", "<f8", (d_in,))])


class FeatureStorage:
    """
    Storage for year-labelled feature files.

    The binary layout is the magic ``RSFT1``, uint32 d_in, uint32 count, then ``count``
    packed records of int64 id, int32 year and d_in float64 features, all little-endian.
    CSV files carry the header ``id,year,f0,...,f{d-1}``.
    """

    def __init__(self, filesystem: AbstractFileSystem) -> None:
        """
        Initialize the storage.

        :param filesystem: The filesystem files are read from and written to.
        """
        self.filesystem = filesystem

    def save(self, items: ItemSet, path: str) -> None:
        """Write ``items`` in the binary format."""
        records = np.empty(len(items), dtype=_record_dtype(items.dim))
        records["id"] = items.ids
        records["year"] = items.years
        records["features"] = items.features

        prepare_parent(self.filesystem, path)
        with self.filesystem.open(path, "wb") as file:
            file.write(FEATURE_MAGIC + pack("II", items.dim, len(items)))
            file.write(records.tobytes())
        logger.info(f"Wrote {len(items)} items to {path}")

    def load(self, path: str, span: YearSpan = DEFAULT_SPAN) -> ItemSet:
        """
        Read a binary feature file.

        :raises FeatureFileError: For a malformed header or truncated records.
        :raises DataValidationError: For years outside ``span``, duplicate ids or
            non-finite features.
        """
        with self.filesystem.open(path, "rb") as file:
            reader = BinaryReader(file.read(), path)

        reader.expect_magic(FEATURE_MAGIC)
        d_in, count = reader.read_struct("II", "header")
        if d_in == 0:
            msg = "Feature dimension must be positive."
            raise reader.fail(msg, len(FEATURE_MAGIC))

        record_dtype = _record_dtype(d_in)
        if reader.remaining < count * record_dtype.itemsize:
            complete = reader.remaining // record_dtype.itemsize
            msg = f"Truncated record {complete} of {count}."
            raise reader.fail(msg, reader.offset + complete * record_dtype.itemsize)
        records = reader.read_array(record_dtype, count, "records")
        reader.expect_end()

        items = ItemSet(
            records["id"],
            records["year"],
            records["features"].reshape(count, d_in),
        )
        items.validate_years(span)
        logger.info(f"Read {len(items)} items of dimension {d_in} from {path}")
        return items

    def save_csv(self, items: ItemSet, path: str) -> None:
        """Write ``items`` as CSV."""
        prepare_parent(self.filesystem, path)
        with self.filesystem.open(path, "wb") as file:
            items.to_frame().write_csv(file)
        logger.info(f"Wrote {len(items)} items to {path}")

    def load_csv(self, path: str, span: YearSpan = DEFAULT_SPAN) -> ItemSet:
        """
        Read a CSV feature file.

        :raises FeatureFileError: For a malformed header or rows, naming the line.
        :raises DataValidationError: For years outside ``span``, duplicate ids or
            non-finite features.
        """
        with self.filesystem.open(path, "rb") as file:
            content = file.read()

        try:
            frame = pl.read_csv(BytesIO(content), infer_schema=False)
        except pl.exceptions.PolarsError as error:
            raise FeatureFileError(str(error), path=path, location="line ?") from error

        feature_columns = frame.columns[2:]
        expected = ["id", "year", *(f"f{index}" for index in range(len(feature_columns)))]
        if frame.columns != expected or not feature_columns:
            msg = f"Expected header {','.join(expected[:3])},..., got {','.join(frame.columns)}."
            raise FeatureFileError(msg, path=path, location="line 1")

        typed = frame.with_row_index("line", offset=2).select(
            pl.col("line"),
            pl.col("id").cast(pl.Int64, strict=False),
            pl.col("year").cast(pl.Int64, strict=False),
            *(pl.col(column).cast(pl.Float64, strict=False) for column in feature_columns),
        )
        broken = typed.filter(pl.any_horizontal(pl.all().exclude("line").is_null()))
        if broken.height:
            msg = "Missing or unparsable value."
            raise FeatureFileError(msg, path=path, location=f"line {broken['line'][0]}")

        items = ItemSet(
            typed["id"].to_numpy(),
            typed["year"].to_numpy(),
            typed.select(feature_columns).to_numpy(),
        )
        items.validate_years(span)
        logger.info(f"Read {len(items)} items of dimension {items.dim} from {path}")
        return items
