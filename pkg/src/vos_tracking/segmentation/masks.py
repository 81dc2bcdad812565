"""
Run-length-encoded binary masks and the geometric primitives used by tracking.

Runs follow the uncompressed COCO convention: alternating background/foreground
lengths over the pixels in column-major order, starting with a background run
(which may be zero). Masks are stored in canonical form: zero-length runs after
the first are merged away, so equal pixel sets compare equal. Internally a mask
is also viewed as the sorted array of its foreground pixel indices
(``x * height + y``); all set operations are done on those indices so full
grids are only materialised by ``decode``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from vos_tracking.segmentation.flow import FlowField
from vos_tracking.utils.errors import MaskFormatError

__all__ = [
    "Mask",
    "decode",
    "encode",
    "area",
    "iou",
    "iou_matrix",
    "warp",
    "clip_stack",
]


@dataclass(frozen=True)
class Mask:
    height: int
    width: int
    runs: tuple[int, ...]

    def __post_init__(self) -> None:
        runs = tuple(int(r) for r in self.runs)
        if self.height < 0 or self.width < 0:
            raise MaskFormatError(f"negative mask size {self.height}x{self.width}")
        if any(r < 0 for r in runs):
            raise MaskFormatError("run lengths must be >= 0")
        if not runs or 0 in runs[1:]:
            runs = _canonical_runs(runs)
        object.__setattr__(self, "runs", runs)
        total = sum(runs)
        if total != self.height * self.width:
            raise MaskFormatError(
                f"runs sum to {total}, expected {self.height}x{self.width}={self.height * self.width}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    @cached_property
    def pixel_index(self) -> np.ndarray:
        """Sorted column-major indices of the foreground pixels (read-only)."""
        r = np.asarray(self.runs, dtype=np.int64)
        starts = np.cumsum(r) - r
        fg_starts, fg_lens = starts[1::2], r[1::2]
        total = int(fg_lens.sum())
        if total == 0:
            idx = np.empty(0, dtype=np.int64)
        else:
            offsets = fg_starts - (np.cumsum(fg_lens) - fg_lens)
            idx = np.arange(total, dtype=np.int64) + np.repeat(offsets, fg_lens)
        idx.setflags(write=False)
        return idx

    @cached_property
    def area(self) -> int:
        return int(sum(self.runs[1::2]))

    @classmethod
    def empty(cls, height: int, width: int) -> "Mask":
        return cls(height, width, (height * width,))

    @classmethod
    def full(cls, height: int, width: int) -> "Mask":
        return cls(height, width, (0, height * width))

    @classmethod
    def from_pixel_index(cls, height: int, width: int, idx: np.ndarray) -> "Mask":
        """Canonical mask from sorted, unique column-major foreground indices."""
        idx = np.asarray(idx, dtype=np.int64)
        n = height * width
        if idx.size == 0:
            return cls.empty(height, width)
        if idx[0] < 0 or idx[-1] >= n:
            raise ValueError(f"pixel index out of range for {height}x{width} grid")
        breaks = np.flatnonzero(np.diff(idx) != 1) + 1
        run_starts = idx[np.r_[0, breaks]]
        run_ends = idx[np.r_[breaks - 1, idx.size - 1]] + 1
        bg = run_starts - np.r_[0, run_ends[:-1]]
        fg = run_ends - run_starts
        runs = np.empty(2 * bg.size, dtype=np.int64)
        runs[0::2] = bg
        runs[1::2] = fg
        tail = n - int(run_ends[-1])
        out = runs.tolist() + ([tail] if tail > 0 else [])
        mask = cls(height, width, tuple(out))
        mask.__dict__["pixel_index"] = _readonly(idx)
        return mask

    @classmethod
    def from_grid(cls, grid: np.ndarray) -> "Mask":
        return encode(grid)

    def to_list(self) -> list[int]:
        return list(self.runs)


def _canonical_runs(runs: tuple[int, ...]) -> tuple[int, ...]:
    """Drop zero-length runs and merge the neighbours they separated; only a leading zero survives."""
    merged: list[list] = []  # [length, is_foreground]
    for i, r in enumerate(runs):
        if r == 0:
            continue
        fg = i % 2 == 1
        if merged and merged[-1][1] == fg:
            merged[-1][0] += r
        else:
            merged.append([r, fg])
    if not merged:
        return (0,)
    return tuple(([0] if merged[0][1] else []) + [r for r, _ in merged])


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


def _check_same_grid(a: Mask, b: Mask) -> None:
    if a.shape != b.shape:
        raise ValueError(f"mask dimensions differ: {a.shape} vs {b.shape}")


def decode(mask: Mask) -> np.ndarray:
    """H x W boolean grid of the mask."""
    flat = np.zeros(mask.height * mask.width, dtype=bool)
    flat[mask.pixel_index] = True
    return flat.reshape(mask.width, mask.height).T


def encode(grid: np.ndarray) -> Mask:
    """Canonical run-length encoding of an H x W boolean grid."""
    g = np.asarray(grid, dtype=bool)
    if g.ndim != 2:
        raise ValueError(f"expected a 2-D grid, got shape {g.shape}")
    h, w = g.shape
    return Mask.from_pixel_index(h, w, np.flatnonzero(g.T.ravel()))


def area(mask: Mask) -> int:
    return mask.area


def iou(a: Mask, b: Mask) -> float:
    """Intersection over union; two empty masks score 0."""
    _check_same_grid(a, b)
    inter = np.intersect1d(a.pixel_index, b.pixel_index, assume_unique=True).size
    union = a.area + b.area - inter
    if union == 0:
        return 0.0
    return inter / union


def iou_matrix(rows: Sequence[Mask], cols: Sequence[Mask]) -> np.ndarray:
    """
    IoU of every (row, col) pair, shape (len(rows), len(cols)).

    Each column mask is scattered once into a flat boolean buffer and row masks
    are gathered against it, so the cost is proportional to mask areas rather
    than to the grid size times the number of pairs.
    """
    out = np.zeros((len(rows), len(cols)), dtype=np.float64)
    if not rows or not cols:
        return out
    ref = rows[0]
    for m in list(rows) + list(cols):
        _check_same_grid(ref, m)
    buf = np.zeros(ref.height * ref.width, dtype=bool)
    row_areas = np.array([m.area for m in rows], dtype=np.int64)
    for j, c in enumerate(cols):
        buf[c.pixel_index] = True
        inter = np.array([int(buf[r.pixel_index].sum()) for r in rows], dtype=np.int64)
        buf[c.pixel_index] = False
        union = row_areas + c.area - inter
        with np.errstate(invalid="ignore", divide="ignore"):
            out[:, j] = np.where(union > 0, inter / np.maximum(union, 1), 0.0)
    return out


def warp(mask: Mask, flow: FlowField) -> Mask:
    """
    Forward-splat each foreground pixel along its flow vector.

    Destinations are rounded half-up to the nearest pixel; pixels leaving the
    grid are dropped and collisions collapse to a single pixel.
    """
    if mask.shape != flow.shape:
        raise ValueError(f"mask {mask.shape} and flow {flow.shape} dimensions differ")
    h, w = mask.shape
    idx = mask.pixel_index
    if idx.size == 0:
        return Mask.empty(h, w)
    xs, ys = np.divmod(idx, h)
    d = flow.vectors[ys, xs].astype(np.float64)
    nx = np.floor(xs + d[:, 0] + 0.5).astype(np.int64)
    ny = np.floor(ys + d[:, 1] + 0.5).astype(np.int64)
    inside = (nx >= 0) & (nx < w) & (ny >= 0) & (ny < h)
    dest = np.unique(nx[inside] * h + ny[inside])
    return Mask.from_pixel_index(h, w, dest)


def clip_stack(masks: Sequence[Mask]) -> list[Mask]:
    """
    Make an ordered mask stack pixel-disjoint: each pixel stays with the first
    (highest-priority) mask covering it. Masks may come out empty.
    """
    if not masks:
        return []
    h, w = masks[0].shape
    for m in masks[1:]:
        _check_same_grid(masks[0], m)
    taken = np.zeros(h * w, dtype=bool)
    out: list[Mask] = []
    for m in masks:
        idx = m.pixel_index
        keep = idx[~taken[idx]]
        taken[idx] = True
        out.append(m if keep.size == idx.size else Mask.from_pixel_index(h, w, keep))
    return out
