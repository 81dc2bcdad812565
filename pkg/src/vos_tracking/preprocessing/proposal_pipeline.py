# src/vos_tracking/preprocessing/proposal_pipeline.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from vos_tracking.segmentation.masks import Mask, clip_stack, iou_matrix
from vos_tracking.utils.errors import MissingEmbeddingError

__all__ = [
    "Proposal",
    "FrameProposalSet",
    "ProposalSequence",
    "priority_order",
    "filter_by_score",
    "nms_suppress",
    "clip_overlaps",
    "process_frame",
    "run_proposal_pipeline",
    "require_embeddings",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Proposal:
    """One candidate object in one frame. Object categories are not kept."""

    frame: int
    mask: Mask
    score: float
    source_id: int
    embedding: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.embedding is not None:
            e = np.array(self.embedding, dtype=np.float64, copy=True).reshape(-1)
            e.setflags(write=False)
            object.__setattr__(self, "embedding", e)

    def with_mask(self, mask: Mask) -> "Proposal":
        return Proposal(self.frame, mask, self.score, self.source_id, self.embedding)


@dataclass(frozen=True)
class FrameProposalSet:
    frame: int
    proposals: tuple[Proposal, ...] = ()

    def __len__(self) -> int:
        return len(self.proposals)


@dataclass(frozen=True)
class ProposalSequence:
    """All proposals of one video, one FrameProposalSet per frame 0..num_frames-1."""

    height: int
    width: int
    num_frames: int
    frames: tuple[FrameProposalSet, ...] = field(default=())
    embedding_dim: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.frames) != self.num_frames:
            raise ValueError(f"expected {self.num_frames} frame sets, got {len(self.frames)}")
        for t, fs in enumerate(self.frames):
            if fs.frame != t:
                raise ValueError(f"frame set at position {t} is labelled frame {fs.frame}")

    @property
    def num_proposals(self) -> int:
        return sum(len(fs) for fs in self.frames)

    def with_frames(self, frames: Iterable[FrameProposalSet]) -> "ProposalSequence":
        return ProposalSequence(self.height, self.width, self.num_frames, tuple(frames), self.embedding_dim)


def priority_order(proposals: Iterable[Proposal]) -> list[Proposal]:
    """Descending score; equal scores keep the lower source id first."""
    return sorted(proposals, key=lambda p: (-p.score, p.source_id))


def filter_by_score(proposals: Sequence[Proposal], min_score: float) -> list[Proposal]:
    """Keep proposals scoring strictly above ``min_score``, in input order."""
    return [p for p in proposals if p.score > min_score]


def nms_suppress(frame_set: FrameProposalSet, iou_threshold: float) -> FrameProposalSet:
    """
    Greedy mask NMS: walk proposals by priority and accept one only if its IoU
    with every accepted proposal is <= iou_threshold. Output is in priority order.
    """
    ordered = priority_order(frame_set.proposals)
    if len(ordered) < 2:
        return FrameProposalSet(frame_set.frame, tuple(ordered))
    overlap = iou_matrix([p.mask for p in ordered], [p.mask for p in ordered])
    accepted: list[int] = []
    for i in range(len(ordered)):
        if all(overlap[i, j] <= iou_threshold for j in accepted):
            accepted.append(i)
    return FrameProposalSet(frame_set.frame, tuple(ordered[i] for i in accepted))


def clip_overlaps(frame_set: FrameProposalSet) -> FrameProposalSet:
    """Clip masks so higher-priority proposals lie on top; drop proposals left empty."""
    ordered = priority_order(frame_set.proposals)
    clipped = clip_stack([p.mask for p in ordered])
    kept = tuple(p if m is p.mask else p.with_mask(m) for p, m in zip(ordered, clipped) if m.area > 0)
    return FrameProposalSet(frame_set.frame, kept)


def process_frame(frame_set: FrameProposalSet, *, min_score: float, nms_iou: float) -> FrameProposalSet:
    """Score filter, mask NMS and clipping for a single frame."""
    kept = filter_by_score(frame_set.proposals, min_score)
    nms = nms_suppress(FrameProposalSet(frame_set.frame, tuple(kept)), nms_iou)
    return clip_overlaps(nms)


def run_proposal_pipeline(
    sequence: ProposalSequence,
    *,
    min_score: float = 0.1,
    nms_iou: float = 0.2,
    threads: int = 1,
) -> ProposalSequence:
    """
    Reduce raw proposals to per-frame non-overlapping sets.

    Frames are independent and may run on a thread pool; the result does not
    depend on ``threads``.
    """
    if threads > 1 and sequence.num_frames > 1:
        frames = Parallel(n_jobs=threads, prefer="threads")(
            delayed(process_frame)(fs, min_score=min_score, nms_iou=nms_iou) for fs in sequence.frames
        )
    else:
        frames = [process_frame(fs, min_score=min_score, nms_iou=nms_iou) for fs in sequence.frames]
    out = sequence.with_frames(frames)
    logger.info(
        f"Proposal pipeline: {sequence.num_proposals} raw -> {out.num_proposals} kept "
        f"(score>{min_score}, nms_iou<={nms_iou})"
    )
    return out


def require_embeddings(sequence: ProposalSequence) -> None:
    """Fail before association if any surviving proposal lacks an embedding."""
    for fs in sequence.frames:
        for p in fs.proposals:
            if p.embedding is None:
                raise MissingEmbeddingError(
                    f"proposal {p.source_id} in frame {p.frame} has no embedding",
                    location=f"frames[frame={p.frame}].proposals[id={p.source_id}]",
                )
