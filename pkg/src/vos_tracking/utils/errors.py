from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional

__all__ = [
    "TrackingError",
    "InputFormatError",
    "MaskFormatError",
    "MissingFlowError",
    "MissingEmbeddingError",
    "ConfigError",
    "ScenarioError",
    "RenderLimitError",
    "format_location",
]


def format_location(parts: Iterable[object]) -> str:
    """Render a JSON path (as given by jsonschema) like ``frames[3].proposals[0].rle``."""
    out = ""
    for p in parts:
        if isinstance(p, int):
            out += f"[{p}]"
        else:
            out += f".{p}" if out else str(p)
    return out or "<root>"


class TrackingError(Exception):
    """Base class for errors raised by the tracking engine."""


class InputFormatError(TrackingError, ValueError):
    """Malformed input file. Commands map this to exit status 1."""

    def __init__(
        self,
        message: str,
        *,
        path: Optional[str | Path] = None,
        location: Optional[str] = None,
    ) -> None:
        self.path = str(path) if path is not None else None
        self.location = location
        where = ""
        if self.path:
            where = self.path
        if location:
            where = f"{where}:{location}" if where else location
        super().__init__(f"{where}: {message}" if where else message)


class MaskFormatError(InputFormatError):
    """Run list that does not describe the declared pixel grid."""


class MissingFlowError(InputFormatError):
    """No flow field for a frame pair that has proposals on both sides."""

    def __init__(self, frame: int, *, path: Optional[str | Path] = None) -> None:
        self.frame = frame
        super().__init__(f"missing flow for frame pair {frame}->{frame + 1}", path=path)


class MissingEmbeddingError(InputFormatError):
    """A proposal reaching stage two has no appearance embedding."""


class ConfigError(TrackingError, ValueError):
    """Invalid tracking configuration. Commands map this to exit status 2."""


class ScenarioError(ConfigError):
    """Invalid synthetic scenario description."""


class RenderLimitError(TrackingError, ValueError):
    """Track ids do not fit into an 8-bit label image."""
