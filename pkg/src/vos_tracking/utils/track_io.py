# src/vos_tracking/utils/track_io.py
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from vos_tracking.segmentation.masks import Mask
from vos_tracking.utils.checks import assert_pixel_disjoint, assert_unique_ids
from vos_tracking.utils.errors import InputFormatError, MaskFormatError
from vos_tracking.utils.io import read_json, validate_json, write_json

__all__ = ["TRACK_SCHEMA", "OutputTrack", "TrackOutput", "parse_tracks", "load_tracks", "write_tracks"]

TRACK_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["height", "width", "num_frames", "tracks"],
    "properties": {
        "height": {"type": "integer", "minimum": 1},
        "width": {"type": "integer", "minimum": 1},
        "num_frames": {"type": "integer", "minimum": 0},
        "tracks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["track_id", "saliency", "segments"],
                "properties": {
                    "track_id": {"type": "integer", "minimum": 1},
                    "saliency": {"type": "number", "minimum": 0},
                    "segments": {
                        "type": "object",
                        "propertyNames": {"pattern": "^[0-9]+$"},
                        "additionalProperties": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    },
                },
            },
        },
    },
}


@dataclass(frozen=True)
class OutputTrack:
    track_id: int
    saliency: float
    segments: Dict[int, Mask] = field(default_factory=dict)

    @property
    def frames(self) -> List[int]:
        return sorted(self.segments)


@dataclass(frozen=True)
class TrackOutput:
    """Serialized result of a run (also the ground-truth format)."""

    height: int
    width: int
    num_frames: int
    tracks: tuple[OutputTrack, ...] = ()

    def masks_at(self, frame: int) -> Dict[int, Mask]:
        return {t.track_id: t.segments[frame] for t in self.tracks if frame in t.segments}

    def validate(self) -> None:
        """Unique ids, frames in range, matching grids, pixel-disjoint frames (ValueError otherwise)."""
        assert_unique_ids([t.track_id for t in self.tracks], what="track_id")
        for t in self.tracks:
            for frame, mask in t.segments.items():
                if not 0 <= frame < self.num_frames:
                    raise ValueError(f"track {t.track_id}: frame {frame} outside 0..{self.num_frames - 1}")
                if mask.shape != (self.height, self.width):
                    raise ValueError(f"track {t.track_id} frame {frame}: mask is {mask.shape}")
        for frame in range(self.num_frames):
            assert_pixel_disjoint(self.masks_at(frame), where=f"frame {frame}")

    def to_json(self) -> Dict[str, Any]:
        return {
            "height": self.height,
            "width": self.width,
            "num_frames": self.num_frames,
            "tracks": [
                {
                    "track_id": t.track_id,
                    "saliency": float(t.saliency),
                    "segments": {str(f): t.segments[f].to_list() for f in t.frames},
                }
                for t in self.tracks
            ],
        }


def parse_tracks(doc: Any, *, path: Optional[str | Path] = None) -> TrackOutput:
    """Schema-check, decode and re-check the per-frame disjointness of a track document."""
    validate_json(doc, TRACK_SCHEMA, path=path)
    h, w = doc["height"], doc["width"]
    tracks = []
    for ti, raw in enumerate(doc["tracks"]):
        segments: Dict[int, Mask] = {}
        for key, runs in raw["segments"].items():
            try:
                segments[int(key)] = Mask(h, w, tuple(runs))
            except MaskFormatError as e:
                raise MaskFormatError(str(e), path=path, location=f"tracks[{ti}].segments.{key}") from e
        tracks.append(OutputTrack(raw["track_id"], float(raw["saliency"]), segments))
    out = TrackOutput(h, w, doc["num_frames"], tuple(tracks))
    try:
        out.validate()
    except ValueError as e:
        raise InputFormatError(str(e), path=path) from e
    return out


def load_tracks(path: str | Path) -> TrackOutput:
    return parse_tracks(read_json(path), path=path)


def write_tracks(path: str | Path, output: TrackOutput) -> Path:
    return write_json(path, output.to_json())
