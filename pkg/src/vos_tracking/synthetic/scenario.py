# src/vos_tracking/synthetic/scenario.py
"""
Seeded synthetic scenes: moving rectangles with ground-truth tracks, noisy
proposals, exact flow fields and identity-clustered embeddings.

All randomness comes from numpy's ``PCG64`` bit generator (PCG-XSL-RR 128/64,
multiplier 0x2360ED051FC65DA44385DF649FCCF645, state seeded through
``SeedSequence(seed)``), drawn in a fixed order:

for every frame, for every object in list order: dropout draw ``u``, score,
``embedding_dim`` standard normals; then the clutter count (Poisson) and, per
clutter mask: height, width, row, column, score, centroid normals, noise normals.

Draws happen whether or not the object is visible, so toggling one object's
visibility does not reshuffle the others.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from vos_tracking.ingestion.flow_io import flow_filename, write_flo
from vos_tracking.ingestion.proposal_file import write_proposals
from vos_tracking.preprocessing.proposal_pipeline import FrameProposalSet, Proposal, ProposalSequence
from vos_tracking.segmentation.flow import FlowField
from vos_tracking.segmentation.masks import Mask
from vos_tracking.utils.errors import InputFormatError, ScenarioError
from vos_tracking.utils.io import read_json, validate_json
from vos_tracking.utils.track_io import OutputTrack, TrackOutput, write_tracks

__all__ = [
    "SCENARIO_SCHEMA",
    "NoiseSpec",
    "ObjectSpec",
    "ScenarioSpec",
    "SyntheticScenario",
    "generate",
    "write_scenario",
    "PROPOSALS_FILE",
    "GROUND_TRUTH_FILE",
    "FLOW_DIR",
]

logger = logging.getLogger(__name__)

PROPOSALS_FILE = "proposals.json"
GROUND_TRUTH_FILE = "ground_truth.json"
FLOW_DIR = "flows"

_PAIR = {"type": "array", "minItems": 2, "maxItems": 2}

SCENARIO_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["seed", "frames", "height", "width", "objects"],
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "frames": {"type": "integer", "minimum": 1},
        "height": {"type": "integer", "minimum": 1},
        "width": {"type": "integer", "minimum": 1},
        "embedding_dim": {"type": "integer", "minimum": 1},
        "objects": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["size", "trajectory"],
                "additionalProperties": False,
                "properties": {
                    "size": {**_PAIR, "items": {"type": "integer", "minimum": 1}},
                    "trajectory": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "array",
                            "minItems": 3,
                            "maxItems": 3,
                            "prefixItems": [{"type": "integer", "minimum": 0}, {"type": "number"}, {"type": "number"}],
                        },
                    },
                    "visible_ranges": {
                        "type": "array",
                        "items": {**_PAIR, "items": {"type": "integer", "minimum": 0}},
                    },
                },
            },
        },
        "noise": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "score_range": {**_PAIR, "items": {"type": "number"}},
                "embedding_sigma": {"type": "number", "minimum": 0},
                "dropout_prob": {"type": "number", "minimum": 0, "maximum": 1},
                "clutter_rate": {"type": "number", "minimum": 0},
            },
        },
    },
}


@dataclass(frozen=True)
class NoiseSpec:
    score_range: Tuple[float, float] = (1.0, 1.0)
    embedding_sigma: float = 0.0
    dropout_prob: float = 0.0
    clutter_rate: float = 0.0

    def __post_init__(self) -> None:
        lo, hi = self.score_range
        if not 0.0 < lo <= hi <= 1.0:
            raise ScenarioError(f"score_range must satisfy 0 < lo <= hi <= 1, got [{lo}, {hi}]")
        if self.embedding_sigma < 0 or self.clutter_rate < 0:
            raise ScenarioError("embedding_sigma and clutter_rate must be >= 0")
        if not 0.0 <= self.dropout_prob <= 1.0:
            raise ScenarioError(f"dropout_prob must be in [0, 1], got {self.dropout_prob}")


@dataclass(frozen=True)
class ObjectSpec:
    """
    An axis-aligned rectangle of ``size`` (height, width) whose top-left corner
    follows the piecewise-linear ``trajectory`` of (frame, x, y) waypoints.

    Positions are held constant before the first and after the last waypoint.
    ``visible_ranges`` are inclusive frame intervals; ``None`` means always visible.
    """

    size: Tuple[int, int]
    trajectory: Tuple[Tuple[int, float, float], ...]
    visible_ranges: Optional[Tuple[Tuple[int, int], ...]] = None

    def position(self, frame: int) -> Tuple[int, int]:
        """Rounded (x, y) of the top-left corner; halves round up."""
        fs = [w[0] for w in self.trajectory]
        x = float(np.interp(frame, fs, [w[1] for w in self.trajectory]))
        y = float(np.interp(frame, fs, [w[2] for w in self.trajectory]))
        return math.floor(x + 0.5), math.floor(y + 0.5)

    def visible(self, frame: int) -> bool:
        if self.visible_ranges is None:
            return True
        return any(s <= frame <= e for s, e in self.visible_ranges)


@dataclass(frozen=True)
class ScenarioSpec:
    seed: int
    frames: int
    height: int
    width: int
    objects: Tuple[ObjectSpec, ...] = ()
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    embedding_dim: int = 16

    def __post_init__(self) -> None:
        if self.frames < 1 or self.height < 1 or self.width < 1:
            raise ScenarioError("frames, height and width must be positive")
        for k, obj in enumerate(self.objects):
            fs = [w[0] for w in obj.trajectory]
            if not fs:
                raise ScenarioError(f"object {k}: empty trajectory")
            if any(b <= a for a, b in zip(fs, fs[1:])):
                raise ScenarioError(f"object {k}: trajectory frames must be strictly increasing")
            for s, e in obj.visible_ranges or ():
                if not 0 <= s <= e < self.frames:
                    raise ScenarioError(f"object {k}: visible range [{s}, {e}] outside 0..{self.frames - 1}")
            h, w = obj.size
            for t in range(self.frames):
                if not obj.visible(t):
                    continue
                x, y = obj.position(t)
                if x < 0 or y < 0 or x + w > self.width or y + h > self.height:
                    raise ScenarioError(
                        f"object {k} ({h}x{w} at x={x}, y={y}) leaves the "
                        f"{self.height}x{self.width} grid on visible frame {t}"
                    )

    @property
    def feature_dim(self) -> int:
        """Embedding length; large enough for one orthogonal centroid per object."""
        return max(self.embedding_dim, len(self.objects))

    @classmethod
    def from_json(cls, doc: Any, *, path: Optional[str | Path] = None) -> "ScenarioSpec":
        try:
            validate_json(doc, SCENARIO_SCHEMA, path=path)
        except InputFormatError as e:
            raise ScenarioError(str(e)) from e
        objects = tuple(
            ObjectSpec(
                size=(int(o["size"][0]), int(o["size"][1])),
                trajectory=tuple((int(f), float(x), float(y)) for f, x, y in o["trajectory"]),
                visible_ranges=(
                    tuple((int(s), int(e)) for s, e in o["visible_ranges"]) if "visible_ranges" in o else None
                ),
            )
            for o in doc["objects"]
        )
        raw_noise = doc.get("noise", {})
        noise = NoiseSpec(
            score_range=tuple(float(v) for v in raw_noise.get("score_range", (1.0, 1.0))),
            embedding_sigma=float(raw_noise.get("embedding_sigma", 0.0)),
            dropout_prob=float(raw_noise.get("dropout_prob", 0.0)),
            clutter_rate=float(raw_noise.get("clutter_rate", 0.0)),
        )
        return cls(
            seed=int(doc["seed"]),
            frames=int(doc["frames"]),
            height=int(doc["height"]),
            width=int(doc["width"]),
            objects=objects,
            noise=noise,
            embedding_dim=int(doc.get("embedding_dim", 16)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ScenarioSpec":
        try:
            doc = read_json(path)
        except InputFormatError as e:
            raise ScenarioError(str(e)) from e
        return cls.from_json(doc, path=path)


@dataclass
class SyntheticScenario:
    spec: ScenarioSpec
    proposals: ProposalSequence
    flows: Dict[int, FlowField]
    ground_truth: TrackOutput


def _label_grid(spec: ScenarioSpec, frame: int) -> np.ndarray:
    """0 = background, k+1 = object k; later objects paint over earlier ones."""
    labels = np.zeros((spec.height, spec.width), dtype=np.int32)
    for k, obj in enumerate(spec.objects):
        if obj.visible(frame):
            x, y = obj.position(frame)
            h, w = obj.size
            labels[y : y + h, x : x + w] = k + 1
    return labels


def _flow_between(spec: ScenarioSpec, labels: np.ndarray, frame: int) -> FlowField:
    vectors = np.zeros((spec.height, spec.width, 2), dtype=np.float32)
    for k, obj in enumerate(spec.objects):
        x0, y0 = obj.position(frame)
        x1, y1 = obj.position(frame + 1)
        vectors[labels == k + 1] = (x1 - x0, y1 - y0)
    return FlowField(spec.height, spec.width, vectors)


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal(dim)
    n = np.linalg.norm(g)
    return g / n if n > 0 else np.eye(dim)[0]


def generate(spec: ScenarioSpec) -> SyntheticScenario:
    """Build proposals, flows for frames 0..T-2 and the ground-truth tracks of ``spec``."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    dim = spec.feature_dim
    noise = spec.noise
    lo, hi = noise.score_range
    centroids = np.eye(dim)[: len(spec.objects)] / math.sqrt(2.0)
    noise_scale = noise.embedding_sigma / math.sqrt(dim)

    gt_segments: List[Dict[int, Mask]] = [{} for _ in spec.objects]
    frame_sets: List[FrameProposalSet] = []
    flows: Dict[int, FlowField] = {}
    next_id = 0

    for t in range(spec.frames):
        labels = _label_grid(spec, t)
        props: List[Proposal] = []
        for k in range(len(spec.objects)):
            u = rng.random()
            score = float(rng.uniform(lo, hi))
            jitter = rng.standard_normal(dim)
            mask = Mask.from_grid(labels == k + 1)
            if mask.area == 0:
                continue
            gt_segments[k][t] = mask
            if u < noise.dropout_prob:
                continue
            props.append(Proposal(t, mask, score, next_id, centroids[k] + noise_scale * jitter))
            next_id += 1

        for _ in range(int(rng.poisson(noise.clutter_rate))):
            h = int(rng.integers(1, max(1, spec.height // 16) + 1))
            w = int(rng.integers(1, max(1, spec.width // 16) + 1))
            y = int(rng.integers(0, spec.height - h + 1))
            x = int(rng.integers(0, spec.width - w + 1))
            score = float(rng.uniform(lo, hi))
            centroid = _unit(rng, dim) / math.sqrt(2.0)
            jitter = rng.standard_normal(dim)
            grid = np.zeros((spec.height, spec.width), dtype=bool)
            grid[y : y + h, x : x + w] = True
            props.append(Proposal(t, Mask.from_grid(grid), score, next_id, centroid + noise_scale * jitter))
            next_id += 1

        frame_sets.append(FrameProposalSet(t, tuple(props)))
        if t + 1 < spec.frames:
            flows[t] = _flow_between(spec, labels, t)

    proposals = ProposalSequence(spec.height, spec.width, spec.frames, tuple(frame_sets), dim)
    tracks = tuple(
        OutputTrack(k + 1, float(len(segs)), segs) for k, segs in enumerate(gt_segments) if segs
    )
    ground_truth = TrackOutput(spec.height, spec.width, spec.frames, tracks)
    logger.info(
        f"Generated scenario seed={spec.seed}: {spec.frames} frames, {len(tracks)} visible objects, "
        f"{proposals.num_proposals} proposals"
    )
    return SyntheticScenario(spec, proposals, flows, ground_truth)


def write_scenario(scenario: SyntheticScenario, out_dir: str | Path) -> Path:
    """Write ``proposals.json``, ``flows/NNNNNN.flo`` and ``ground_truth.json`` under ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_proposals(out_dir / PROPOSALS_FILE, scenario.proposals)
    flow_dir = out_dir / FLOW_DIR
    flow_dir.mkdir(exist_ok=True)
    for t, flow in sorted(scenario.flows.items()):
        write_flo(flow_dir / flow_filename(t), flow)
    write_tracks(out_dir / GROUND_TRUTH_FILE, scenario.ground_truth)
    logger.info(f"Scenario written to {out_dir}")
    return out_dir
