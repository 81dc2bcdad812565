from __future__ import annotations

import numpy as np
import pytest

from conftest import proposal, rect, sequence
from vos_tracking.preprocessing.proposal_pipeline import (
    FrameProposalSet,
    clip_overlaps,
    filter_by_score,
    nms_suppress,
    require_embeddings,
    run_proposal_pipeline,
)
from vos_tracking.segmentation.masks import Mask, decode, encode
from vos_tracking.utils.checks import overlapping_pairs
from vos_tracking.utils.errors import MissingEmbeddingError


def _span(a: int, b: int, width: int = 20) -> Mask:
    return rect(1, width, (0, 1), (a, b))


def _ids(frame_set: FrameProposalSet) -> list[int]:
    return [p.source_id for p in frame_set.proposals]


def test_filter_is_strict():
    m = _span(0, 2)
    props = [proposal(0, m, s, i) for i, s in enumerate([0.05, 0.1, 0.3])]
    assert [p.score for p in filter_by_score(props, 0.1)] == [0.3]
    assert filter_by_score(props, 0.0) == props
    assert filter_by_score([], 0.1) == []


def test_nms_identical_and_disjoint():
    m = _span(0, 5)
    fs = FrameProposalSet(0, (proposal(0, m, 0.8, 1), proposal(0, m, 0.9, 2)))
    assert _ids(nms_suppress(fs, 0.2)) == [2]
    fs = FrameProposalSet(0, (proposal(0, _span(0, 5), 0.8, 1), proposal(0, _span(5, 10), 0.9, 2)))
    assert _ids(nms_suppress(fs, 0.2)) == [2, 1]


def test_nms_greedy_chain():
    # IoU(A,B)=1/3, IoU(B,C)=3/7, IoU(A,C)=1/19: B is suppressed by A, C survives
    a, b, c = _span(0, 10), _span(5, 15), _span(9, 19)
    fs = FrameProposalSet(0, (proposal(0, c, 0.7, 3), proposal(0, b, 0.8, 2), proposal(0, a, 0.9, 1)))
    assert _ids(nms_suppress(fs, 0.2)) == [1, 3]


def test_equal_scores_prefer_lower_source_id():
    m = _span(0, 5)
    fs = FrameProposalSet(0, (proposal(0, m, 0.5, 7), proposal(0, m, 0.5, 3)))
    assert _ids(nms_suppress(fs, 0.2)) == [3]


def test_clip_examples():
    fs = FrameProposalSet(0, (proposal(0, _span(0, 10), 0.9, 1), proposal(0, _span(9, 19), 0.8, 2)))
    out = clip_overlaps(fs)
    assert out.proposals[1].mask == _span(10, 19)
    assert out.proposals[1].score == 0.8

    fs = FrameProposalSet(0, (proposal(0, _span(0, 20), 0.9, 1), proposal(0, _span(0, 3), 0.8, 2)))
    assert _ids(clip_overlaps(fs)) == [1]


def _random_sequence(rng: np.random.Generator, frames: int = 6, h: int = 6, w: int = 7):
    by_frame = {}
    next_id = 0
    for t in range(frames):
        props = []
        for _ in range(int(rng.integers(0, 6))):
            grid = np.zeros((h, w), bool)
            r0, c0 = int(rng.integers(0, h)), int(rng.integers(0, w))
            grid[r0 : r0 + int(rng.integers(1, 4)), c0 : c0 + int(rng.integers(1, 4))] = True
            props.append(proposal(t, encode(grid), float(rng.uniform(0.01, 1.0)), next_id, rng.normal(size=3)))
            next_id += 1
        by_frame[t] = props
    return sequence(h, w, frames, by_frame)


def test_pipeline_invariants(rng):
    for _ in range(30):
        seq = _random_sequence(rng)
        out = run_proposal_pipeline(seq)
        again = run_proposal_pipeline(out)
        inputs = {p.source_id: p for fs in seq.frames for p in fs.proposals}
        for fs, fs2 in zip(out.frames, again.frames):
            assert not overlapping_pairs([p.mask for p in fs.proposals])
            assert _ids(fs) == _ids(fs2)
            assert [p.mask for p in fs.proposals] == [p.mask for p in fs2.proposals]
            for p in fs.proposals:
                assert p.mask.area > 0
                assert p.score > 0.1
                assert not (decode(p.mask) & ~decode(inputs[p.source_id].mask)).any()
        assert all(len(a) <= len(b) for a, b in zip(out.frames, seq.frames))


def test_pipeline_independent_of_threads(rng):
    seq = _random_sequence(rng, frames=10)
    one = run_proposal_pipeline(seq, threads=1)
    two = run_proposal_pipeline(seq, threads=3)
    for a, b in zip(one.frames, two.frames):
        assert _ids(a) == _ids(b)
        assert [p.mask for p in a.proposals] == [p.mask for p in b.proposals]


def test_missing_embedding_detected():
    seq = sequence(1, 4, 2, {1: [proposal(1, _span(0, 2, 4), 0.9, 4)]})
    with pytest.raises(MissingEmbeddingError, match="proposal 4 in frame 1"):
        require_embeddings(seq)
