# src/vos_tracking/ingestion/flow_io.py
from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path
from typing import Iterator

import numpy as np

from vos_tracking.segmentation.flow import FlowField
from vos_tracking.utils.errors import InputFormatError, MissingFlowError
from vos_tracking.utils.io import atomic_write_bytes

__all__ = ["FLO_MAGIC", "read_flo", "write_flo", "flow_filename", "FlowDirectory"]

FLO_MAGIC = np.float32(202021.25)
_HEADER_BYTES = 12


def flow_filename(frame: int) -> str:
    """Flow for frame t -> t+1 lives in ``{t:06d}.flo``."""
    return f"{frame:06d}.flo"


def read_flo(path: str | Path) -> FlowField:
    """
    Read a Middlebury .flo file.

    Layout (little-endian): float32 magic 202021.25, int32 width, int32 height,
    then height*width interleaved (dx, dy) float32 pairs in row-major order.

    Raises
    ------
    InputFormatError
        Wrong magic, truncated or oversized payload, non-positive size, or
        non-finite vectors.
    """
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER_BYTES:
        raise InputFormatError("truncated .flo header", path=path)
    magic = np.frombuffer(raw, dtype="<f4", count=1, offset=0)[0]
    if magic != FLO_MAGIC:
        raise InputFormatError(f"bad .flo magic {magic!r}", path=path)
    width, height = (int(v) for v in np.frombuffer(raw, dtype="<i4", count=2, offset=4))
    if width <= 0 or height <= 0:
        raise InputFormatError(f"invalid .flo size {width}x{height}", path=path)
    expected = _HEADER_BYTES + 8 * width * height
    if len(raw) != expected:
        raise InputFormatError(f".flo payload is {len(raw)} bytes, expected {expected}", path=path)
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER_BYTES).reshape(height, width, 2)
    if not np.isfinite(data).all():
        raise InputFormatError("flow contains NaN or Inf values", path=path)
    return FlowField(height, width, data)


def write_flo(path: str | Path, flow: FlowField) -> Path:
    header = FLO_MAGIC.astype("<f4").tobytes() + np.array([flow.width, flow.height], dtype="<i4").tobytes()
    body = np.ascontiguousarray(flow.vectors, dtype="<f4").tobytes()
    return atomic_write_bytes(path, header + body)


class FlowDirectory(Mapping):
    """
    Read-only ``{frame: FlowField}`` view over a directory of ``NNNNNN.flo`` files.

    Files are read on access; a missing file raises MissingFlowError naming the
    frame pair, and a size mismatch with the sequence raises InputFormatError.
    """

    def __init__(self, root: str | Path, *, height: int, width: int) -> None:
        self.root = Path(root)
        self.height = height
        self.width = width

    def _path(self, frame: int) -> Path:
        return self.root / flow_filename(frame)

    def __getitem__(self, frame: int) -> FlowField:
        path = self._path(frame)
        if not path.is_file():
            raise MissingFlowError(frame, path=path)
        flow = read_flo(path)
        if flow.shape != (self.height, self.width):
            raise InputFormatError(
                f"flow is {flow.height}x{flow.width}, sequence is {self.height}x{self.width}", path=path
            )
        return flow

    def __contains__(self, frame: object) -> bool:
        return isinstance(frame, int) and self._path(frame).is_file()

    def __iter__(self) -> Iterator[int]:
        if not self.root.is_dir():
            return iter(())
        frames = []
        for p in self.root.glob("*.flo"):
            if p.stem.isdigit():
                frames.append(int(p.stem))
        return iter(sorted(frames))

    def __len__(self) -> int:
        return sum(1 for _ in self)
