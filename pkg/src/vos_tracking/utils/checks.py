from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from vos_tracking.segmentation.masks import Mask


def overlapping_pairs(masks: Sequence[Mask]) -> list[tuple[int, int]]:
    """Index pairs of masks sharing at least one pixel."""
    out = []
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if np.intersect1d(masks[i].pixel_index, masks[j].pixel_index, assume_unique=True).size:
                out.append((i, j))
    return out


def assert_pixel_disjoint(masks_by_owner: Mapping[int, Mask], *, where: str = "") -> None:
    """Raise ValueError naming the owners of the first two overlapping masks."""
    owners = list(masks_by_owner)
    pairs = overlapping_pairs([masks_by_owner[o] for o in owners])
    if pairs:
        i, j = pairs[0]
        prefix = f"{where}: " if where else ""
        raise ValueError(f"{prefix}masks of {owners[i]} and {owners[j]} overlap")


def assert_unique_ids(ids: Sequence[int], *, what: str = "id") -> None:
    seen: set[int] = set()
    dup = sorted({i for i in ids if i in seen or seen.add(i)})
    if dup:
        raise ValueError(f"Duplicate {what}s: {dup}")
