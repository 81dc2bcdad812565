# src/vos_tracking/synthetic/purity.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from vos_tracking.segmentation.masks import iou
from vos_tracking.utils.errors import InputFormatError
from vos_tracking.utils.track_io import TrackOutput

__all__ = ["HIT_IOU", "PurityReport", "purity"]

HIT_IOU = 0.5


@dataclass
class PurityReport:
    per_object: Dict[int, float]
    mean: float
    assignment: Dict[int, int] = field(default_factory=dict)  # pred track_id -> gt track_id


def purity(predictions: TrackOutput, ground_truth: TrackOutput) -> PurityReport:
    """
    Identity consistency of predicted tracks.

    A frame is a hit for (prediction, object) when both have a mask there with
    IoU >= 0.5. Each prediction is assigned the object it hits most often
    (lower ground-truth id on ties, unassigned with no hits). An object's
    purity is the hit count of its best assigned prediction over its visible
    frames; the mean is taken over ground-truth objects (0 when there are none).
    """
    if (predictions.height, predictions.width) != (ground_truth.height, ground_truth.width):
        raise InputFormatError("prediction and ground-truth grids differ")
    gt_tracks = sorted(ground_truth.tracks, key=lambda t: t.track_id)
    hits = np.zeros((len(predictions.tracks), len(gt_tracks)), dtype=np.int64)
    for pi, pred in enumerate(predictions.tracks):
        for gi, gt in enumerate(gt_tracks):
            shared = pred.segments.keys() & gt.segments.keys()
            hits[pi, gi] = sum(1 for f in shared if iou(pred.segments[f], gt.segments[f]) >= HIT_IOU)

    best_hits: Dict[int, int] = {gt.track_id: 0 for gt in gt_tracks}
    assignment: Dict[int, int] = {}
    for pi, pred in enumerate(predictions.tracks):
        if not gt_tracks or hits[pi].max() == 0:
            continue
        gi = int(np.argmax(hits[pi]))
        gid = gt_tracks[gi].track_id
        assignment[pred.track_id] = gid
        best_hits[gid] = max(best_hits[gid], int(hits[pi, gi]))

    per_object = {
        gt.track_id: (best_hits[gt.track_id] / len(gt.segments) if gt.segments else 0.0) for gt in gt_tracks
    }
    mean = float(np.mean(list(per_object.values()))) if per_object else 0.0
    return PurityReport(per_object, mean, assignment)
