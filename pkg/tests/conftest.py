from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pytest

from vos_tracking.preprocessing.proposal_pipeline import FrameProposalSet, Proposal, ProposalSequence
from vos_tracking.segmentation.masks import Mask
from vos_tracking.synthetic.scenario import NoiseSpec, ObjectSpec, ScenarioSpec
from vos_tracking.tracking.tracklets import Tracklet


def rect(h: int, w: int, rows: Tuple[int, int], cols: Tuple[int, int]) -> Mask:
    """Mask of the half-open block rows[0]:rows[1] x cols[0]:cols[1]."""
    grid = np.zeros((h, w), dtype=bool)
    grid[rows[0] : rows[1], cols[0] : cols[1]] = True
    return Mask.from_grid(grid)


def proposal(
    frame: int,
    mask: Mask,
    score: float = 0.9,
    source_id: int = 0,
    embedding: Optional[Sequence[float]] = None,
) -> Proposal:
    return Proposal(frame, mask, score, source_id, None if embedding is None else np.asarray(embedding, float))


def sequence(h: int, w: int, num_frames: int, by_frame: Dict[int, List[Proposal]]) -> ProposalSequence:
    frames = tuple(FrameProposalSet(t, tuple(by_frame.get(t, ()))) for t in range(num_frames))
    return ProposalSequence(h, w, num_frames, frames)


def tracklet(
    tracklet_id: int,
    begin: int,
    end: int,
    embedding: Sequence[float],
    *,
    shape: Tuple[int, int] = (4, 4),
    score: float = 1.0,
) -> Tracklet:
    """Tracklet of full-grid masks spanning begin..end with one shared embedding."""
    full = Mask.full(*shape)
    props = [Proposal(t, full, score, 1000 * tracklet_id + t, np.asarray(embedding, float)) for t in range(begin, end + 1)]
    return Tracklet.from_proposals(tracklet_id, props)


def random_tracklets(rng: np.random.Generator, n: int, num_frames: int = 30, dim: int = 4) -> List[Tracklet]:
    """Random intervals and embeddings, sorted by begin frame with ids in that order."""
    spans = []
    for _ in range(n):
        b = int(rng.integers(0, num_frames))
        e = int(rng.integers(b, min(num_frames, b + 8)))
        spans.append((b, e))
    spans.sort()
    return [tracklet(i, b, e, rng.normal(size=dim)) for i, (b, e) in enumerate(spans)]


LANE_PITCH = 14
OBJECT_SIZE = (10, 14)


def lane_scenario(
    n_objects: int,
    frames: int,
    *,
    seed: int = 0,
    gaps: Optional[Iterable[Optional[Tuple[int, int]]]] = None,
    noise: Optional[NoiseSpec] = None,
) -> ScenarioSpec:
    """
    Rectangles in separate horizontal lanes moving right by one pixel per
    frame, so masks never overlap and the flow is exactly integer.

    ``gaps`` gives an inclusive invisible interval per object (or None).
    """
    gaps = list(gaps) if gaps is not None else [None] * n_objects
    objects = []
    for k in range(n_objects):
        y = 2 + LANE_PITCH * k
        trajectory = ((0, 1.0, float(y)),) if frames == 1 else ((0, 1.0, float(y)), (frames - 1, float(frames), float(y)))
        gap = gaps[k]
        visible = None
        if gap is not None:
            ranges = []
            if gap[0] > 0:
                ranges.append((0, gap[0] - 1))
            if gap[1] < frames - 1:
                ranges.append((gap[1] + 1, frames - 1))
            visible = tuple(ranges)
        objects.append(ObjectSpec(OBJECT_SIZE, trajectory, visible))
    return ScenarioSpec(
        seed=seed,
        frames=frames,
        height=LANE_PITCH * max(n_objects, 1) + 4,
        width=frames + OBJECT_SIZE[1] + 2,
        objects=tuple(objects),
        noise=noise or NoiseSpec(),
    )


def random_scenario(rng: np.random.Generator, *, frames: int = 12, height: int = 24, width: int = 32) -> ScenarioSpec:
    """Small scenario with overlapping, partially visible objects and every kind of noise."""
    objects = []
    for _ in range(int(rng.integers(1, 5))):
        h, w = int(rng.integers(3, 9)), int(rng.integers(3, 11))
        waypoints = []
        for f in sorted(rng.choice(frames, size=int(rng.integers(1, 4)), replace=False).tolist()):
            waypoints.append((int(f), float(rng.uniform(0, width - w)), float(rng.uniform(0, height - h))))
        s = int(rng.integers(0, frames))
        e = int(rng.integers(s, frames))
        objects.append(ObjectSpec((h, w), tuple(waypoints), ((s, e),)))
    noise = NoiseSpec(
        score_range=(0.2, 1.0),
        embedding_sigma=0.2,
        dropout_prob=0.1,
        clutter_rate=1.0,
    )
    return ScenarioSpec(int(rng.integers(0, 2**32)), frames, height, width, tuple(objects), noise, 8)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
