from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FlowField"]


@dataclass(frozen=True, eq=False)
class FlowField:
    """
    Dense forward flow from frame t to t+1.

    ``vectors[y, x] = (dx, dy)`` in pixels, float32, shape (height, width, 2).
    The array is stored read-only.
    """

    height: int
    width: int
    vectors: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.vectors, dtype=np.float32, copy=True)
        if v.shape != (self.height, self.width, 2):
            raise ValueError(
                f"flow vectors have shape {v.shape}, expected {(self.height, self.width, 2)}"
            )
        if not np.isfinite(v).all():
            raise ValueError("flow contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    @classmethod
    def zeros(cls, height: int, width: int) -> "FlowField":
        return cls(height, width, np.zeros((height, width, 2), dtype=np.float32))

    @classmethod
    def uniform(cls, height: int, width: int, dx: float, dy: float) -> "FlowField":
        v = np.empty((height, width, 2), dtype=np.float32)
        v[..., 0] = dx
        v[..., 1] = dy
        return cls(height, width, v)
