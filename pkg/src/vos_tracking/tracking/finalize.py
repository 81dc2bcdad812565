from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Sequence

from vos_tracking.tracking.fpc import Track

__all__ = ["ScoredTrack", "saliency", "score_tracks", "select_top"]


@dataclass(frozen=True)
class ScoredTrack:
    track: Track
    saliency: float
    track_id: int = 0


def saliency(track: Track) -> float:
    """Sum over member tracklets of temporal length times mean proposal score."""
    if not track.tracklets:
        raise ValueError("cannot score an empty track")
    return float(sum(t.length * t.mean_score for t in track.tracklets))


def score_tracks(tracks: Sequence[Track]) -> List[ScoredTrack]:
    return [ScoredTrack(t, saliency(t)) for t in tracks]


def select_top(scored: Sequence[ScoredTrack], max_tracks: int = 20) -> List[ScoredTrack]:
    """
    Rank by descending saliency (ties: earlier start, then lower leading
    tracklet id), keep the first ``max_tracks`` (0 keeps all) and number
    them 1..K in rank order.
    """
    if max_tracks < 0:
        raise ValueError(f"max_tracks must be >= 0, got {max_tracks}")
    ranked = sorted(scored, key=lambda s: (-s.saliency, s.track.begin, s.track.lead_id))
    if max_tracks:
        ranked = ranked[:max_tracks]
    return [replace(s, track_id=rank) for rank, s in enumerate(ranked, start=1)]
