"""Little-endian readers shared by the feature, encoder and index file formats."""

from __future__ import annotations

import struct
from pathlib import PurePosixPath
from typing import TYPE_CHECKING

import numpy as np

from ranksmith.errors import FeatureFileError

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem
    from numpy.typing import DTypeLike, NDArray


class BinaryReader:
    """Sequential reader over the bytes of a file, reporting failures with their byte offset."""

    def __init__(self, data: bytes, path: str) -> None:
        """
        Initialize the reader.

        :param data: The complete file contents.
        :param path: The path of the file, for error messages.
        """
        self.data = data
        self.path = path
        self.offset = 0

    def fail(self, message: str, offset: int | None = None) -> FeatureFileError:
        """Build an error located at ``offset``, or at the current position."""
        return FeatureFileError(
            message,
            path=self.path,
            location=f"byte offset {self.offset if offset is None else offset}",
        )

    def expect_magic(self, magic: bytes) -> None:
        """Consume and check the leading magic bytes."""
        found = self.data[: len(magic)]
        if found != magic:
            msg = f"Expected magic {magic!r}, found {found!r}."
            raise self.fail(msg, 0)
        self.offset = len(magic)

    def read_struct(self, fmt: str, what: str) -> tuple[int, ...]:
        """Unpack a little-endian struct at the current position."""
        layout = struct.Struct("<" + fmt)
        if self.offset + layout.size > len(self.data):
            msg = f"Truncated {what}: needs {layout.size} bytes, {self.remaining} left."
            raise self.fail(msg)
        values = layout.unpack_from(self.data, self.offset)
        self.offset += layout.size
        return values

    def read_array(self, dtype: DTypeLike, count: int, what: str) -> NDArray:
        """Read ``count`` consecutive values of ``dtype`` into a fresh array."""
        resolved = np.dtype(dtype)
        size = resolved.itemsize * count
        if self.offset + size > len(self.data):
            msg = f"Truncated {what}: needs {size} bytes, {self.remaining} left."
            raise self.fail(msg)
        values = np.frombuffer(self.data, dtype=resolved, count=count, offset=self.offset).copy()
        self.offset += size
        return values

    @property
    def remaining(self) -> int:
        """Bytes left after the current position."""
        return len(self.data) - self.offset

    def expect_end(self) -> None:
        """Fail if bytes remain after the last expected field."""
        if self.remaining:
            msg = f"{self.remaining} unexpected trailing bytes."
            raise self.fail(msg)


def pack(fmt: str, *values: int) -> bytes:
    """Pack values as a little-endian struct."""
    return struct.pack("<" + fmt, *values)


def prepare_parent(filesystem: AbstractFileSystem, path: str) -> None:
    """Create the directory that will hold ``path``."""
    parent = str(PurePosixPath(path).parent)
    if parent not in {"", ".", "/"}:
        filesystem.makedirs(parent, exist_ok=True)
