from __future__ import annotations

import numpy as np
import pytest

from conftest import rect
from vos_tracking.segmentation.masks import Mask
from vos_tracking.utils.errors import InputFormatError
from vos_tracking.utils.track_io import OutputTrack, TrackOutput
from vos_tracking.validation.evaluation import match_tracks, mean_j, track_j

H, W, T = 4, 12, 6


def _track(track_id: int, cols: tuple[int, int], frames, saliency: float = 1.0) -> OutputTrack:
    return OutputTrack(track_id, saliency, {f: rect(H, W, (0, 2), cols) for f in frames})


def _output(*tracks: OutputTrack) -> TrackOutput:
    return TrackOutput(H, W, T, tuple(tracks))


GT = _output(_track(1, (0, 3), range(6)), _track(2, (6, 9), range(2, 6)))


def test_identical_predictions_score_one():
    report = mean_j(GT, GT)
    assert report.mean_j == 1.0
    assert report.per_track_j == {1: 1.0, 2: 1.0}
    assert report.matching == [(1, 1), (2, 2)]
    assert (report.matched_predictions, report.unmatched_predictions) == (2, 0)


def test_no_predictions_score_zero():
    report = mean_j(_output(), GT)
    assert report.mean_j == 0.0
    assert report.per_track_j == {1: 0.0, 2: 0.0}
    assert mean_j(_output(), _output()).mean_j == 0.0


def test_half_coverage():
    gt = _output(_track(1, (0, 3), range(6)))
    pred = _output(_track(1, (0, 3), range(3)))
    assert mean_j(pred, gt).mean_j == 0.5


def test_swapped_identities_recovered():
    pred = _output(_track(7, (6, 9), range(2, 6)), _track(3, (0, 3), range(6)))
    report = mean_j(pred, GT)
    assert report.mean_j == 1.0
    assert report.matching == [(1, 3), (2, 7)]
    matching, matrix = match_tracks(pred, GT)
    assert matching.pairs == ((0, 1), (1, 0))
    assert matrix.scores.shape == (2, 2)


def test_extra_predictions_are_not_penalised():
    clutter = [_track(10 + i, (11, 12), [i], saliency=0.1) for i in range(3)]
    pred = _output(*GT.tracks, *clutter, _track(20, (10, 11), range(6)), _track(21, (4, 5), [0]))
    report = mean_j(pred, GT)
    assert report.mean_j == 1.0
    assert (report.matched_predictions, report.unmatched_predictions) == (2, 5)


def test_invariant_to_prediction_order(rng):
    preds = []
    for i in range(6):
        start = int(rng.integers(0, 10))
        frames = sorted(set(rng.integers(0, T, size=4).tolist()))
        preds.append(_track(i + 1, (start, start + 2), frames))
    forward = mean_j(_output(*preds), GT)
    backward = mean_j(_output(*reversed(preds)), GT)
    assert forward.mean_j == pytest.approx(backward.mean_j)
    assert 0.0 <= forward.mean_j <= 1.0


def test_track_j_excludes_frames_empty_in_both():
    gt = _track(1, (0, 3), [0, 1])
    pred = OutputTrack(2, 1.0, {0: rect(H, W, (0, 2), (0, 3)), 1: Mask.empty(H, W), 4: Mask.empty(H, W)})
    assert track_j(gt, pred, H, W) == 0.5
    assert track_j(OutputTrack(3, 0.0, {}), None, H, W) == 0.0


def test_grid_mismatch():
    other = TrackOutput(H + 1, W, T, ())
    with pytest.raises(InputFormatError):
        mean_j(other, GT)


def test_report_outputs():
    report = mean_j(_output(GT.tracks[0]), GT)
    frame = report.to_frame()
    assert list(frame.index) == [1, 2]
    assert frame.loc[1, "J"] == 1.0
    assert frame.loc[2, "J"] == 0.0
    assert "mean J = 0.5000" in report.to_table()
    doc = report.to_json()
    assert doc["per_track_j"] == {"1": 1.0, "2": 0.0}
    assert doc["matching"] == [[1, 1]]
    assert np.isclose(doc["mean_j"], 0.5)


def test_ground_truth_without_overlap_stays_unmatched():
    pred = _output(GT.tracks[0], _track(5, (10, 12), range(6)))
    report = mean_j(pred, GT)
    assert report.matching == [(1, 1)]
    assert report.per_track_j == {1: 1.0, 2: 0.0}
    assert (report.matched_predictions, report.unmatched_predictions) == (1, 1)
