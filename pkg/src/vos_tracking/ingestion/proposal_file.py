# src/vos_tracking/ingestion/proposal_file.py
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from vos_tracking.preprocessing.proposal_pipeline import FrameProposalSet, Proposal, ProposalSequence
from vos_tracking.segmentation.masks import Mask
from vos_tracking.utils.errors import InputFormatError, MaskFormatError
from vos_tracking.utils.io import read_json, validate_json, write_json

__all__ = ["PROPOSAL_SCHEMA", "load_proposals", "parse_proposals", "proposals_to_json", "write_proposals"]

logger = logging.getLogger(__name__)

PROPOSAL_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["height", "width", "num_frames", "frames"],
    "properties": {
        "height": {"type": "integer", "minimum": 1},
        "width": {"type": "integer", "minimum": 1},
        "num_frames": {"type": "integer", "minimum": 0},
        "frames": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["frame", "proposals"],
                "properties": {
                    "frame": {"type": "integer", "minimum": 0},
                    "proposals": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "score", "rle"],
                            "properties": {
                                "id": {"type": "integer"},
                                "score": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                                "rle": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                                "embedding": {"type": "array", "items": {"type": "number"}},
                            },
                        },
                    },
                },
            },
        },
    },
}


def parse_proposals(doc: Any, *, path: Optional[str | Path] = None) -> ProposalSequence:
    """
    Validate and convert a decoded proposal document.

    Beyond the JSON schema this checks frame indices against ``num_frames``,
    duplicate frames and ids, run sums, finite scores/embeddings and a uniform
    embedding length. Frames absent from the file get empty proposal sets.
    """
    validate_json(doc, PROPOSAL_SCHEMA, path=path)
    height, width, num_frames = doc["height"], doc["width"], doc["num_frames"]

    by_frame: Dict[int, List[Proposal]] = {}
    embedding_dim: Optional[int] = None
    for fi, entry in enumerate(doc["frames"]):
        t = entry["frame"]
        where = f"frames[{fi}]"
        if t >= num_frames:
            raise InputFormatError(f"frame {t} outside 0..{num_frames - 1}", path=path, location=where)
        if t in by_frame:
            raise InputFormatError(f"frame {t} listed twice", path=path, location=where)
        seen_ids: set[int] = set()
        props: List[Proposal] = []
        for pi, raw in enumerate(entry["proposals"]):
            loc = f"{where}.proposals[{pi}]"
            if raw["id"] in seen_ids:
                raise InputFormatError(f"duplicate proposal id {raw['id']} in frame {t}", path=path, location=loc)
            seen_ids.add(raw["id"])
            try:
                mask = Mask(height, width, tuple(raw["rle"]))
            except MaskFormatError as e:
                raise MaskFormatError(str(e), path=path, location=f"{loc}.rle") from e
            score = float(raw["score"])
            if not np.isfinite(score):
                raise InputFormatError("score is not finite", path=path, location=f"{loc}.score")
            embedding = None
            if "embedding" in raw:
                embedding = np.asarray(raw["embedding"], dtype=np.float64)
                if not np.isfinite(embedding).all():
                    raise InputFormatError("embedding has non-finite values", path=path, location=f"{loc}.embedding")
                if embedding_dim is None:
                    embedding_dim = embedding.size
                elif embedding.size != embedding_dim:
                    raise InputFormatError(
                        f"embedding length {embedding.size} differs from {embedding_dim}",
                        path=path,
                        location=f"{loc}.embedding",
                    )
            props.append(Proposal(t, mask, score, int(raw["id"]), embedding))
        by_frame[t] = props

    frames = tuple(FrameProposalSet(t, tuple(by_frame.get(t, ()))) for t in range(num_frames))
    return ProposalSequence(height, width, num_frames, frames, embedding_dim)


def load_proposals(path: str | Path) -> ProposalSequence:
    seq = parse_proposals(read_json(path), path=path)
    logger.info(
        f"Loaded {seq.num_proposals} proposals over {seq.num_frames} frames "
        f"({seq.height}x{seq.width}) from {path}"
    )
    return seq


def proposals_to_json(sequence: ProposalSequence) -> Dict[str, Any]:
    frames = []
    for fs in sequence.frames:
        if not fs.proposals:
            continue
        entries = []
        for p in fs.proposals:
            item: Dict[str, Any] = {"id": p.source_id, "score": float(p.score), "rle": p.mask.to_list()}
            if p.embedding is not None:
                item["embedding"] = [float(v) for v in p.embedding]
            entries.append(item)
        frames.append({"frame": fs.frame, "proposals": entries})
    return {
        "height": sequence.height,
        "width": sequence.width,
        "num_frames": sequence.num_frames,
        "frames": frames,
    }


def write_proposals(path: str | Path, sequence: ProposalSequence) -> Path:
    return write_json(path, proposals_to_json(sequence))
