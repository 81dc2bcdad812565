from __future__ import annotations

import pytest

from conftest import tracklet
from vos_tracking.preprocessing.proposal_pipeline import Proposal
from vos_tracking.segmentation.masks import Mask
from vos_tracking.tracking.finalize import saliency, score_tracks, select_top
from vos_tracking.tracking.fpc import Track
from vos_tracking.tracking.tracklets import Tracklet


def test_saliency_sums_length_times_mean_score():
    track = Track((tracklet(0, 0, 4, [0.0], score=0.8), tracklet(1, 6, 8, [0.0], score=0.5)))
    assert saliency(track) == pytest.approx(5 * 0.8 + 3 * 0.5)


def test_select_top_orders_and_numbers():
    tracks = [
        Track((tracklet(0, 0, 1, [0.0]),)),  # 2.0
        Track((tracklet(1, 0, 4, [0.0]),)),  # 5.0
        Track((tracklet(2, 3, 4, [0.0]),)),  # 2.0, later start
        Track((tracklet(3, 0, 1, [0.0]),)),  # 2.0, higher lead id
    ]
    ranked = select_top(score_tracks(tracks), max_tracks=20)
    assert [s.track.lead_id for s in ranked] == [1, 0, 3, 2]
    assert [s.track_id for s in ranked] == [1, 2, 3, 4]
    assert [s.saliency for s in ranked] == [5.0, 2.0, 2.0, 2.0]


def test_select_top_limit():
    tracks = [Track((tracklet(i, 0, i, [0.0]),)) for i in range(25)]
    ranked = select_top(score_tracks(tracks))
    assert len(ranked) == 20
    assert ranked[0].track.lead_id == 24
    assert len(select_top(score_tracks(tracks), max_tracks=0)) == 25
    assert select_top([], 20) == []
    with pytest.raises(ValueError):
        select_top(score_tracks(tracks), max_tracks=-1)


def _scored_tracklets(rng, n):
    out = []
    for i in range(n):
        b = int(rng.integers(0, 6))
        e = b + int(rng.integers(0, 4))
        out.append((i, b, e, float(rng.choice([0.25, 0.5, 0.75, 1.0]))))
    return out


def test_select_top_invariant_to_positive_score_scaling(rng):
    for _ in range(100):
        specs = _scored_tracklets(rng, int(rng.integers(1, 12)))
        plain = [Track((tracklet(i, b, e, [0.0], score=s),)) for i, b, e, s in specs]
        halved = [Track((tracklet(i, b, e, [0.0], score=s * 0.5),)) for i, b, e, s in specs]
        for k in (0, 3):
            expected = [s.track.lead_id for s in select_top(score_tracks(plain), k)]
            assert [s.track.lead_id for s in select_top(score_tracks(halved), k)] == expected


def test_saliency_additive_over_tracklet_splits(rng):
    full = Mask.full(2, 2)
    for _ in range(100):
        begin, length = int(rng.integers(0, 10)), int(rng.integers(2, 15))
        props = [
            Proposal(begin + t, full, float(rng.uniform(0.1, 1.0)), t, None) for t in range(length)
        ]
        cut = int(rng.integers(1, length))
        whole = Track((Tracklet.from_proposals(0, props),))
        split = Track((Tracklet.from_proposals(1, props[:cut]), Tracklet.from_proposals(2, props[cut:])))
        assert saliency(split) == pytest.approx(saliency(whole), rel=1e-12)
        assert saliency(whole) == pytest.approx(sum(p.score for p in props), rel=1e-12)
