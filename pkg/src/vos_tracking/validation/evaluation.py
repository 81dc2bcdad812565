# src/vos_tracking/validation/evaluation.py
"""
Region-similarity (J) evaluation of predicted tracks against ground truth.

Every ground-truth track is matched to at most one prediction by maximising
the summed track-level J with the Hungarian solver; unmatched predictions are
not penalised. Track-level J is the mean per-frame IoU over the frames where
either track has a non-empty mask.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from vos_tracking.segmentation.masks import Mask, iou
from vos_tracking.tracking.assignment import Matching, ScoreMatrix, hungarian_max
from vos_tracking.utils.errors import InputFormatError
from vos_tracking.utils.track_io import OutputTrack, TrackOutput

__all__ = ["EvalReport", "track_j", "match_tracks", "mean_j"]


@dataclass
class EvalReport:
    per_track_j: Dict[int, float]
    mean_j: float
    matching: List[Tuple[int, int]] = field(default_factory=list)  # (gt track_id, pred track_id)
    matched_predictions: int = 0
    unmatched_predictions: int = 0

    def to_frame(self) -> pd.DataFrame:
        pred_of = dict(self.matching)
        rows = [
            {"gt_track": gt, "pred_track": pred_of.get(gt), "J": j}
            for gt, j in sorted(self.per_track_j.items())
        ]
        df = pd.DataFrame(rows, columns=["gt_track", "pred_track", "J"])
        df["pred_track"] = df["pred_track"].astype("Int64")
        return df.set_index("gt_track")

    def to_json(self) -> Dict[str, Any]:
        return {
            "per_track_j": {str(k): float(v) for k, v in sorted(self.per_track_j.items())},
            "mean_j": float(self.mean_j),
            "matching": [[int(g), int(p)] for g, p in self.matching],
            "matched_predictions": self.matched_predictions,
            "unmatched_predictions": self.unmatched_predictions,
        }

    def to_table(self) -> str:
        df = self.to_frame()
        body = df.to_string(float_format=lambda v: f"{v:.4f}") if len(df) else "(no ground-truth tracks)"
        return (
            f"{body}\n\nmean J = {self.mean_j:.4f}  "
            f"(matched predictions: {self.matched_predictions}, unmatched: {self.unmatched_predictions})"
        )


def track_j(gt: OutputTrack, pred: Optional[OutputTrack], height: int, width: int) -> float:
    """Mean per-frame IoU over frames where either track is non-empty; 0 without such frames."""
    empty = Mask.empty(height, width)
    frames = {f for f, m in gt.segments.items() if m.area}
    if pred is not None:
        frames |= {f for f, m in pred.segments.items() if m.area}
    if not frames:
        return 0.0
    pred_segments = pred.segments if pred is not None else {}
    values = [iou(gt.segments.get(f, empty), pred_segments.get(f, empty)) for f in sorted(frames)]
    return float(np.mean(values))


def _check_same_grid(predictions: TrackOutput, ground_truth: TrackOutput) -> None:
    if (predictions.height, predictions.width) != (ground_truth.height, ground_truth.width):
        raise InputFormatError(
            f"prediction grid {predictions.height}x{predictions.width} differs from "
            f"ground truth {ground_truth.height}x{ground_truth.width}"
        )


def match_tracks(predictions: TrackOutput, ground_truth: TrackOutput) -> Tuple[Matching, ScoreMatrix]:
    """Hungarian matching of ground-truth rows to prediction columns on track-level J."""
    _check_same_grid(predictions, ground_truth)
    h, w = ground_truth.height, ground_truth.width
    scores = np.array(
        [[track_j(g, p, h, w) for p in predictions.tracks] for g in ground_truth.tracks],
        dtype=np.float64,
    ).reshape(len(ground_truth.tracks), len(predictions.tracks))
    matrix = ScoreMatrix(scores)
    return hungarian_max(matrix), matrix


def mean_j(predictions: TrackOutput, ground_truth: TrackOutput) -> EvalReport:
    matching, matrix = match_tracks(predictions, ground_truth)
    matched = matching.as_dict()
    per_track: Dict[int, float] = {}
    pairs: List[Tuple[int, int]] = []
    for gi, g in enumerate(ground_truth.tracks):
        if gi in matched:
            pi = matched[gi]
            per_track[g.track_id] = float(matrix.scores[gi, pi])
            pairs.append((g.track_id, predictions.tracks[pi].track_id))
        else:
            per_track[g.track_id] = 0.0
    mean = float(np.mean(list(per_track.values()))) if per_track else 0.0
    return EvalReport(
        per_track_j=per_track,
        mean_j=mean,
        matching=pairs,
        matched_predictions=len(pairs),
        unmatched_predictions=len(predictions.tracks) - len(pairs),
    )
