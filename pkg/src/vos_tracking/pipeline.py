# src/vos_tracking/pipeline.py
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from vos_tracking.preprocessing.proposal_pipeline import (
    ProposalSequence,
    require_embeddings,
    run_proposal_pipeline,
)
from vos_tracking.segmentation.flow import FlowField
from vos_tracking.tracking.finalize import ScoredTrack, score_tracks, select_top
from vos_tracking.tracking.fpc import FpcResult, forest_path_cutting, tracklets_as_tracks
from vos_tracking.tracking.tracklets import Tracklet, build_tracklets
from vos_tracking.utils.config_loader import TrackingConfig
from vos_tracking.utils.track_io import OutputTrack, TrackOutput

__all__ = ["TrackingResult", "run_tracking", "to_track_output"]

logger = logging.getLogger(__name__)


@dataclass
class TrackingResult:
    """Every intermediate stage of one run, kept for debugging dumps."""

    clipped: ProposalSequence
    tracklets: List[Tracklet]
    association: FpcResult
    selected: List[ScoredTrack]
    output: TrackOutput
    counts: dict = field(default_factory=dict)


class _StageClock:
    """Wall time per pipeline stage, measured between consecutive laps."""

    def __init__(self) -> None:
        self._last = time.perf_counter()
        self.seconds: Dict[str, float] = {}

    def lap(self, stage: str) -> None:
        now = time.perf_counter()
        self.seconds[stage] = now - self._last
        self._last = now

    def per_frame(self, num_frames: int) -> Dict[str, float]:
        n = max(num_frames, 1)
        return {stage: s / n for stage, s in self.seconds.items()}


def to_track_output(sequence: ProposalSequence, selected: List[ScoredTrack]) -> TrackOutput:
    tracks = tuple(OutputTrack(s.track_id, s.saliency, s.track.segments()) for s in selected)
    return TrackOutput(sequence.height, sequence.width, sequence.num_frames, tracks)


def run_tracking(
    sequence: ProposalSequence,
    flows: Mapping[int, FlowField],
    config: Optional[TrackingConfig] = None,
) -> TrackingResult:
    """
    Full pipeline: score filter -> mask NMS -> clipping -> tracklets ->
    association (FPC, or tracklets as tracks) -> saliency -> top-K selection.
    """
    config = config or TrackingConfig()
    clock = _StageClock()
    clipped = run_proposal_pipeline(
        sequence,
        min_score=config.detection_score_min,
        nms_iou=config.nms_iou,
        threads=config.threads,
    )
    if config.association == "fpc":
        require_embeddings(clipped)
    clock.lap("pipeline")

    tracklets = build_tracklets(
        clipped.frames,
        flows,
        edge_min=config.edge_min,
        matcher=config.matcher,
        threads=config.threads,
    )
    clock.lap("tracklets")

    if config.association == "fpc":
        association = forest_path_cutting(
            tracklets,
            sequence.num_frames,
            w_visual=config.w_visual,
            w_temporal=config.w_temporal,
            density_mode=config.density_mode,
        )
    else:
        association = FpcResult(tracks=tracklets_as_tracks(tracklets))
    clock.lap("fpc")

    selected = select_top(score_tracks(association.tracks), config.max_tracks)
    output = to_track_output(sequence, selected)
    clock.lap("selection")
    counts = {
        "raw_proposals": sequence.num_proposals,
        "kept_proposals": clipped.num_proposals,
        "tracklets": len(tracklets),
        "tracks": len(association.tracks),
        "selected_tracks": len(selected),
        "seconds_per_frame": clock.per_frame(sequence.num_frames),
    }
    logger.info(
        f"Tracking done: {counts['tracklets']} tracklets -> {counts['tracks']} tracks, "
        f"{counts['selected_tracks']} selected"
    )
    return TrackingResult(clipped, tracklets, association, selected, output, counts)
