"""
Forest Path Cutting: stage-two association of tracklets into tracks.

Part one gives every tracklet (in order of begin frame) a single optimal
predecessor chosen by visual similarity among the tracklets that end before
it starts, which turns the tracklets into a forest of track hypotheses.
Part two scores every root-to-leaf path by a mix of visual consistency and
temporal density, then repeatedly cuts the best path out of the forest.

Indices used here are positions in the tracklet list handed to
``build_forest`` (sorted by begin frame); ties always go to the lower
tracklet id.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from vos_tracking.segmentation.masks import Mask
from vos_tracking.tracking.tracklets import Tracklet
from vos_tracking.utils.errors import MissingEmbeddingError

__all__ = [
    "Track",
    "PredecessorForest",
    "PathHypothesis",
    "PathScore",
    "CutRecord",
    "FpcResult",
    "visual_similarity",
    "build_forest",
    "enumerate_paths",
    "score_path",
    "cut_paths",
    "forest_path_cutting",
    "tracklets_as_tracks",
]

logger = logging.getLogger(__name__)

DENSITY_MODES = ("normalized", "raw")


@dataclass(frozen=True)
class Track:
    """One object identity: temporally disjoint tracklets ordered by begin frame."""

    tracklets: tuple[Tracklet, ...]

    def __post_init__(self) -> None:
        if not self.tracklets:
            raise ValueError("a track needs at least one tracklet")
        ordered = tuple(sorted(self.tracklets, key=lambda t: (t.begin, t.id)))
        for a, b in zip(ordered, ordered[1:]):
            if b.begin <= a.end:
                raise ValueError(f"tracklets {a.id} and {b.id} overlap in time")
        object.__setattr__(self, "tracklets", ordered)

    @property
    def begin(self) -> int:
        return self.tracklets[0].begin

    @property
    def end(self) -> int:
        return self.tracklets[-1].end

    @property
    def lead_id(self) -> int:
        return self.tracklets[0].id

    @property
    def tracklet_ids(self) -> tuple[int, ...]:
        return tuple(t.id for t in self.tracklets)

    def segments(self) -> Dict[int, Mask]:
        return {p.frame: p.mask for t in self.tracklets for p in t.proposals}


@dataclass(frozen=True)
class PredecessorForest:
    """``predecessors[i]`` is the position of tracklet i's predecessor, or None for a root."""

    tracklet_ids: tuple[int, ...]
    predecessors: tuple[Optional[int], ...]

    def to_json(self) -> Dict[str, Optional[int]]:
        ids = self.tracklet_ids
        return {str(ids[i]): (None if m is None else ids[m]) for i, m in enumerate(self.predecessors)}


@dataclass(frozen=True)
class PathHypothesis:
    """Root-to-leaf path; ``members`` and ``spans`` are aligned, earliest tracklet first."""

    leaf: int
    members: tuple[int, ...]
    spans: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.members)

    @property
    def start(self) -> int:
        return min(b for b, _ in self.spans)

    def without(self, removed: frozenset[int]) -> "PathHypothesis":
        keep = [(m, s) for m, s in zip(self.members, self.spans) if m not in removed]
        return PathHypothesis(self.leaf, tuple(m for m, _ in keep), tuple(s for _, s in keep))


@dataclass(frozen=True)
class PathScore:
    visual: float
    temporal: float
    total: float


@dataclass(frozen=True)
class CutRecord:
    iteration: int
    leaf: int
    members: tuple[int, ...]
    score: PathScore


@dataclass
class FpcResult:
    tracks: List[Track]
    forest: Optional[PredecessorForest] = None
    cut_log: List[CutRecord] = field(default_factory=list)

    def cut_log_rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "iteration": r.iteration,
                "leaf": r.leaf,
                "tracklets": " ".join(str(m) for m in r.members),
                "visual": r.score.visual,
                "temporal": r.score.temporal,
                "score": r.score.total,
            }
            for r in self.cut_log
        ]


def visual_similarity(tracklets: Sequence[Tracklet]) -> np.ndarray:
    """
    V[i, j] = 1 - |R_i - R_j| / D_max with D_max the largest distance between
    any two tracklet mean embeddings; V is all ones when D_max is 0.
    """
    if not tracklets:
        raise ValueError("visual similarity needs at least one tracklet")
    for t in tracklets:
        if t.mean_embedding is None:
            raise MissingEmbeddingError(f"tracklet {t.id} has no mean embedding")
    dims = {t.mean_embedding.size for t in tracklets}
    if len(dims) > 1:
        raise ValueError(f"embedding lengths differ across tracklets: {sorted(dims)}")
    n = len(tracklets)
    if n == 1:
        return np.ones((1, 1))
    R = np.stack([t.mean_embedding for t in tracklets])
    D = squareform(pdist(R, metric="euclidean"))
    d_max = float(D.max())
    if d_max == 0.0:
        return np.ones((n, n))
    V = 1.0 - D / d_max
    np.fill_diagonal(V, 1.0)
    return V


def _argmax(candidates: Iterable[int], row: np.ndarray, ids: Sequence[int]) -> int:
    return max(candidates, key=lambda j: (row[j], -ids[j]))


def build_forest(tracklets: Sequence[Tracklet], V: np.ndarray) -> PredecessorForest:
    """
    Optimal predecessor for each tracklet, following the literal refinement
    rule: starting from the most similar earlier tracklet k, move to the most
    similar earlier tracklet other than k while that one lies between k and
    the current tracklet and has k as its own predecessor.
    """
    n = len(tracklets)
    begins = np.array([t.begin for t in tracklets], dtype=np.int64)
    ends = np.array([t.end for t in tracklets], dtype=np.int64)
    ids = [t.id for t in tracklets]
    if np.any(np.diff(begins) < 0):
        raise ValueError("tracklets must be sorted by begin frame")
    if V.shape != (n, n):
        raise ValueError(f"similarity matrix is {V.shape}, expected {(n, n)}")

    preds: List[Optional[int]] = [None] * n
    pred_arr = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        cands = np.flatnonzero(ends < begins[i])
        if cands.size == 0:
            continue
        row = V[i]
        k = _argmax(cands.tolist(), row, ids)
        while True:
            between = cands[(begins[cands] > ends[k]) & (pred_arr[cands] == k)]
            if between.size == 0:
                break
            others = [j for j in cands.tolist() if j != k]
            l = _argmax(others, row, ids)
            if l in set(between.tolist()):
                k = l
            else:
                break
        preds[i] = k
        pred_arr[i] = k
    return PredecessorForest(tuple(ids), tuple(preds))


def enumerate_paths(forest: PredecessorForest, tracklets: Sequence[Tracklet]) -> List[PathHypothesis]:
    """One path per leaf (a tracklet nobody points to), ordered by leaf id."""
    preds = forest.predecessors
    has_successor = {m for m in preds if m is not None}
    leaves = sorted((i for i in range(len(preds)) if i not in has_successor), key=lambda i: tracklets[i].id)
    paths = []
    for leaf in leaves:
        chain = [leaf]
        while preds[chain[-1]] is not None:
            chain.append(preds[chain[-1]])
        chain.reverse()
        spans = tuple((tracklets[m].begin, tracklets[m].end) for m in chain)
        paths.append(PathHypothesis(leaf, tuple(chain), spans))
    return paths


def score_path(
    path: PathHypothesis,
    V: np.ndarray,
    num_frames: int,
    *,
    w_visual: float = 0.1,
    w_temporal: float = 0.9,
    density_mode: str = "normalized",
) -> PathScore:
    """Visual consistency (min pairwise V, 1 for a single tracklet), temporal density and their weighted sum."""
    if len(path) == 0:
        raise ValueError("cannot score an empty path")
    if density_mode not in DENSITY_MODES:
        raise ValueError(f"density_mode must be one of {DENSITY_MODES}, got {density_mode!r}")
    members = list(path.members)
    if len(members) == 1:
        visual = 1.0
    else:
        sub = V[np.ix_(members, members)]
        visual = float(sub[np.triu_indices(len(members), 1)].min())
    covered = sum(e - b + 1 for b, e in path.spans)
    temporal = covered / num_frames if density_mode == "normalized" else float(covered)
    return PathScore(visual, temporal, w_visual * visual + w_temporal * temporal)


def cut_paths(
    paths: Sequence[PathHypothesis],
    V: np.ndarray,
    num_frames: int,
    *,
    w_visual: float = 0.1,
    w_temporal: float = 0.9,
    density_mode: str = "normalized",
    tracklet_ids: Optional[Sequence[int]] = None,
) -> tuple[List[tuple[int, ...]], List[CutRecord]]:
    """
    Repeatedly select the best-scoring path, emit it, and remove its
    tracklets from all other paths; paths left empty disappear.

    Ties go to the path starting earliest, then to the lower leaf id. Scores
    are cached and recomputed only for paths that lost tracklets.

    Returns the selected member lists (positions) and one CutRecord per cut.
    """
    ids = tracklet_ids if tracklet_ids is not None else range(V.shape[0])
    ids = list(ids)

    def _score(p: PathHypothesis) -> PathScore:
        return score_path(p, V, num_frames, w_visual=w_visual, w_temporal=w_temporal, density_mode=density_mode)

    live: Dict[int, PathHypothesis] = {p.leaf: p for p in paths if len(p)}
    scores: Dict[int, PathScore] = {leaf: _score(p) for leaf, p in live.items()}
    selected: List[tuple[int, ...]] = []
    log: List[CutRecord] = []
    while live:
        best = max(live, key=lambda leaf: (scores[leaf].total, -live[leaf].start, -ids[leaf]))
        chosen = live.pop(best)
        log.append(CutRecord(len(log), ids[best], tuple(ids[m] for m in chosen.members), scores.pop(best)))
        selected.append(chosen.members)
        logger.debug(f"cut {len(log)}: leaf {ids[best]} members {chosen.members} score {log[-1].score.total:.4f}")
        removed = frozenset(chosen.members)
        for leaf in list(live):
            path = live[leaf]
            if removed.isdisjoint(path.members):
                continue
            shrunk = path.without(removed)
            if len(shrunk) == 0:
                del live[leaf]
                del scores[leaf]
            else:
                live[leaf] = shrunk
                scores[leaf] = _score(shrunk)
    return selected, log


def tracklets_as_tracks(tracklets: Sequence[Tracklet]) -> List[Track]:
    """Stage one only: every tracklet becomes a track of its own."""
    return [Track((t,)) for t in tracklets]


def forest_path_cutting(
    tracklets: Sequence[Tracklet],
    num_frames: int,
    *,
    w_visual: float = 0.1,
    w_temporal: float = 0.9,
    density_mode: str = "normalized",
) -> FpcResult:
    """Run both parts of Forest Path Cutting on tracklets sorted by begin frame."""
    if not tracklets:
        return FpcResult(tracks=[], forest=PredecessorForest((), ()))
    V = visual_similarity(tracklets)
    forest = build_forest(tracklets, V)
    paths = enumerate_paths(forest, tracklets)
    selected, log = cut_paths(
        paths,
        V,
        num_frames,
        w_visual=w_visual,
        w_temporal=w_temporal,
        density_mode=density_mode,
        tracklet_ids=[t.id for t in tracklets],
    )
    tracks = [Track(tuple(tracklets[m] for m in members)) for members in selected]
    roots = sum(1 for m in forest.predecessors if m is None)
    logger.info(
        f"FPC: {len(tracklets)} tracklets, {roots} roots, {len(paths)} paths -> {len(tracks)} tracks"
    )
    return FpcResult(tracks=tracks, forest=forest, cut_log=log)
