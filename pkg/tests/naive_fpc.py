"""Straight transliteration of Forest Path Cutting, without caching, used as a test oracle."""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np


def similarity(embeddings: Sequence[np.ndarray]) -> List[List[float]]:
    n = len(embeddings)
    d = [[float(np.linalg.norm(embeddings[i] - embeddings[j])) for j in range(n)] for i in range(n)]
    d_max = max(max(row) for row in d)
    if d_max == 0:
        return [[1.0] * n for _ in range(n)]
    return [[1.0 if i == j else 1.0 - d[i][j] / d_max for j in range(n)] for i in range(n)]


def naive_fpc(
    spans: Sequence[Tuple[int, int]],
    ids: Sequence[int],
    embeddings: Sequence[np.ndarray],
    num_frames: int,
    w_visual: float = 0.1,
    w_temporal: float = 0.9,
    normalized: bool = True,
) -> List[Tuple[int, ...]]:
    """Track id tuples (earliest tracklet first) in cut order; inputs sorted by begin frame."""
    n = len(spans)
    if n == 0:
        return []
    V = similarity(embeddings)
    b = [s[0] for s in spans]
    e = [s[1] for s in spans]

    def best(cands, row):
        top = None
        for j in cands:
            if top is None or row[j] > row[top] or (row[j] == row[top] and ids[j] < ids[top]):
                top = j
        return top

    M: List[Optional[int]] = [None] * n
    for i in range(n):
        cands = [j for j in range(n) if e[j] < b[i]]
        if not cands:
            continue
        k = best(cands, V[i])
        while True:
            S = [j for j in cands if b[j] > e[k] and M[j] == k]
            if not S:
                break
            l = best([j for j in cands if j != k], V[i])
            if l in S:
                k = l
            else:
                break
        M[i] = k

    leaves = [i for i in range(n) if all(M[m] != i for m in range(n))]
    leaves.sort(key=lambda i: ids[i])
    paths = []
    for leaf in leaves:
        chain = [leaf]
        while M[chain[-1]] is not None:
            chain.append(M[chain[-1]])
        paths.append((leaf, set(chain)))

    def score(members):
        ms = sorted(members)
        cv = 1.0
        if len(ms) > 1:
            cv = min(V[x][y] for x in ms for y in ms if x < y)
        covered = sum(e[m] - b[m] + 1 for m in ms)
        ct = covered / num_frames if normalized else float(covered)
        return w_visual * cv + w_temporal * ct

    tracks = []
    while paths:
        keyed = [(score(members), -min(b[m] for m in members), -ids[leaf], idx) for idx, (leaf, members) in enumerate(paths)]
        chosen = max(keyed)[3]
        _, members = paths.pop(chosen)
        tracks.append(tuple(ids[m] for m in sorted(members, key=lambda m: (b[m], ids[m]))))
        paths = [(leaf, rest - members) for leaf, rest in paths if rest - members]
    return tracks
