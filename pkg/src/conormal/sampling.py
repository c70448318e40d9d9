"""Deterministic sample grids over chart domains and conormal fibers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SampleSpec"]


@dataclass(frozen=True)
class SampleSpec:
    """Jittered-grid sampling plan for a base box and a fiber box.

    Grids are axis-aligned with ``counts`` points per axis, kept strictly
    inside the box; with ``jitter`` on, each grid node is displaced uniformly
    within its own cell by a generator seeded from ``seed``, so identical
    specs always produce identical points.
    """

    base_box: tuple
    base_counts: tuple
    fiber_box: tuple = ()
    fiber_counts: tuple = ()
    seed: int = 0
    jitter: bool = True

    def __post_init__(self):
        if len(self.base_box) != len(self.base_counts):
            raise ValueError("base_box and base_counts must have equal length")
        if len(self.fiber_box) != len(self.fiber_counts):
            raise ValueError("fiber_box and fiber_counts must have equal length")
        if any(c < 1 for c in self.base_counts + self.fiber_counts):
            raise ValueError("counts must be at least 1 per axis")

    @property
    def n_base(self) -> int:
        return int(np.prod(self.base_counts))

    @property
    def n_fiber(self) -> int:
        return int(np.prod(self.fiber_counts)) if self.fiber_counts else 1

    def base_points(self) -> np.ndarray:
        return _grid(self.base_box, self.base_counts, self.jitter,
                     np.random.default_rng(self.seed))

    def fiber_points(self) -> np.ndarray:
        if not self.fiber_counts:
            return np.zeros((1, 0))
        return _grid(self.fiber_box, self.fiber_counts, self.jitter,
                     np.random.default_rng(self.seed + 1))

    def with_base_total(self, total: int) -> "SampleSpec":
        """Same spec with per-axis counts chosen so the grid has ~total points."""
        dim = len(self.base_box)
        per_axis = max(2, int(np.ceil(total ** (1.0 / dim))))
        return SampleSpec(
            base_box=self.base_box,
            base_counts=(per_axis,) * dim,
            fiber_box=self.fiber_box,
            fiber_counts=self.fiber_counts,
            seed=self.seed,
            jitter=self.jitter,
        )


def _grid(box, counts, jitter, rng) -> np.ndarray:
    axes = []
    for (lo, hi), c in zip(box, counts):
        width = hi - lo
        centers = lo + width * (np.arange(c) + 0.5) / c
        axes.append((centers, width / c))
    mesh = np.meshgrid(*[a for a, _ in axes], indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    if jitter:
        cell = np.array([h for _, h in axes])
        pts = pts + rng.uniform(-0.5, 0.5, size=pts.shape) * (0.98 * cell)
    return pts
