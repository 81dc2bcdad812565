# src/vos_tracking/tracking/tracklets.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from vos_tracking.preprocessing.proposal_pipeline import FrameProposalSet, Proposal
from vos_tracking.segmentation.flow import FlowField
from vos_tracking.segmentation.masks import iou, iou_matrix, warp
from vos_tracking.tracking.assignment import Matching, ScoreMatrix, greedy_max, hungarian_max
from vos_tracking.utils.errors import MissingFlowError

__all__ = [
    "Tracklet",
    "MATCHERS",
    "consistency_score",
    "consistency_matrix",
    "build_tracklets",
    "tracklets_to_json",
]

logger = logging.getLogger(__name__)

MATCHERS: Dict[str, Callable[[ScoreMatrix], Matching]] = {
    "hungarian": hungarian_max,
    "greedy": greedy_max,
}


@dataclass(frozen=True, eq=False)
class Tracklet:
    """Proposals in consecutive frames begin..end, with their mean embedding."""

    id: int
    proposals: tuple[Proposal, ...]
    mean_embedding: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if not self.proposals:
            raise ValueError("a tracklet needs at least one proposal")
        frames = [p.frame for p in self.proposals]
        if frames != list(range(frames[0], frames[0] + len(frames))):
            raise ValueError(f"tracklet {self.id} frames are not consecutive: {frames}")

    @classmethod
    def from_proposals(cls, tracklet_id: int, proposals: Sequence[Proposal]) -> "Tracklet":
        embeddings = [p.embedding for p in proposals]
        mean = None
        if all(e is not None for e in embeddings):
            mean = np.mean(np.stack(embeddings), axis=0)
            mean.setflags(write=False)
        return cls(tracklet_id, tuple(proposals), mean)

    @property
    def begin(self) -> int:
        return self.proposals[0].frame

    @property
    def end(self) -> int:
        return self.proposals[-1].frame

    @property
    def length(self) -> int:
        return self.end - self.begin + 1

    @property
    def mean_score(self) -> float:
        return float(np.mean([p.score for p in self.proposals]))

    def proposal_at(self, frame: int) -> Proposal:
        return self.proposals[frame - self.begin]


def consistency_score(p: Proposal, q: Proposal, flow: FlowField) -> float:
    """IoU between p's mask warped into the next frame and q's mask."""
    if p.frame + 1 != q.frame:
        raise ValueError(f"proposals must be in consecutive frames, got {p.frame} and {q.frame}")
    return iou(warp(p.mask, flow), q.mask)


def consistency_matrix(
    earlier: Sequence[Proposal], later: Sequence[Proposal], flow: FlowField, edge_min: float
) -> ScoreMatrix:
    """Consistency scores for all pairs of two consecutive frames; scores below edge_min are forbidden."""
    warped = [warp(p.mask, flow) for p in earlier]
    scores = iou_matrix(warped, [q.mask for q in later])
    scores[scores < edge_min] = np.nan
    return ScoreMatrix(scores)


def _pair_matching(
    t: int,
    earlier: FrameProposalSet,
    later: FrameProposalSet,
    flows: Mapping[int, FlowField],
    edge_min: float,
    matcher: Callable[[ScoreMatrix], Matching],
) -> Matching:
    try:
        flow = flows[t]
    except KeyError:
        raise MissingFlowError(t) from None
    return matcher(consistency_matrix(earlier.proposals, later.proposals, flow, edge_min))


def build_tracklets(
    frames: Sequence[FrameProposalSet],
    flows: Mapping[int, FlowField],
    *,
    edge_min: float = 0.05,
    matcher: str = "hungarian",
    threads: int = 1,
) -> List[Tracklet]:
    """
    Link proposals of consecutive frames into tracklets.

    For every frame pair with proposals on both sides a consistency matrix is
    solved with the chosen matcher; matched proposals extend a tracklet and
    unmatched ones end or start one. Score matrices may be computed on a thread
    pool, linking is sequential. Tracklet ids follow (begin frame, source id of
    the first proposal).

    Raises
    ------
    MissingFlowError
        A needed flow field (frame t -> t+1) is absent from ``flows``.
    """
    if matcher not in MATCHERS:
        raise ValueError(f"unknown matcher {matcher!r}; expected one of {sorted(MATCHERS)}")
    solve = MATCHERS[matcher]
    pairs = [t for t in range(len(frames) - 1) if frames[t].proposals and frames[t + 1].proposals]

    jobs = (delayed(_pair_matching)(t, frames[t], frames[t + 1], flows, edge_min, solve) for t in pairs)
    if threads > 1 and len(pairs) > 1:
        results = Parallel(n_jobs=threads, prefer="threads")(jobs)
    else:
        results = [fn(*args, **kwargs) for fn, args, kwargs in jobs]
    links: Dict[int, Dict[int, int]] = {t: {c: r for r, c in m} for t, m in zip(pairs, results)}

    chains: List[List[Proposal]] = []
    open_chains: Dict[int, int] = {}  # index within frame -> chain
    for t, fs in enumerate(frames):
        back = links.get(t - 1, {})
        now: Dict[int, int] = {}
        for j, p in enumerate(fs.proposals):
            if j in back:
                chain = open_chains[back[j]]
                chains[chain].append(p)
            else:
                chain = len(chains)
                chains.append([p])
            now[j] = chain
        open_chains = now

    chains.sort(key=lambda c: (c[0].frame, c[0].source_id))
    tracklets = [Tracklet.from_proposals(i, c) for i, c in enumerate(chains)]
    logger.info(f"Built {len(tracklets)} tracklets from {sum(len(c) for c in chains)} proposals ({matcher})")
    return tracklets


def tracklets_to_json(tracklets: Sequence[Tracklet]) -> List[Dict[str, Any]]:
    """Stage-one dump: one record per tracklet."""
    out = []
    for t in tracklets:
        out.append(
            {
                "id": t.id,
                "b": t.begin,
                "e": t.end,
                "proposal_ids": [p.source_id for p in t.proposals],
                "mean_embedding": None if t.mean_embedding is None else [float(v) for v in t.mean_embedding],
            }
        )
    return out
