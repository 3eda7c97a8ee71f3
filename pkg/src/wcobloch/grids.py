"""Boundary-refined sampling grids for the unit disc.

A DiscGrid carries the origin plus dyadic shells at radii 1 - 2^-k whose
angular resolution doubles toward the boundary (capped at 4096 points per
shell).  Shell statistics (tail suprema, growth ratios) are read off these
shells.  The grid also carries a uniform interior fill, radii j/64, used
only to sharpen supremum estimates: the dyadic radii alone are too sparse in
the middle of the disc to locate interior peaks.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

_FILL_DIVISIONS = 64
_FILL_ANGLES = 128


@dataclass(frozen=True)
class Shell:
    k: int
    radius: float
    points: np.ndarray

    @property
    def count(self) -> int:
        return self.points.size


class DiscGrid:
    """Sampling grid with K dyadic shells, the origin, and interior fill."""

    __slots__ = ("K", "shells", "fill", "all_points", "_shell_slices")

    def __init__(self, K: int = 14):
        if K < 4:
            raise ValueError(f"grid needs at least 4 shells, got K={K}")
        shells = []
        blocks = [np.zeros(1, dtype=complex)]
        slices = []
        offset = 1
        for k in range(1, K + 1):
            radius = 1.0 - 2.0 ** (-k)
            count = 64 * 2 ** min(k, 6)
            angles = 2.0 * np.pi * np.arange(count) / count
            pts = radius * np.exp(1j * angles)
            pts.flags.writeable = False
            shells.append(Shell(k=k, radius=radius, points=pts))
            blocks.append(pts)
            slices.append(slice(offset, offset + count))
            offset += count
        fill_radii = np.arange(1, _FILL_DIVISIONS) / _FILL_DIVISIONS
        fill_angles = 2.0 * np.pi * np.arange(_FILL_ANGLES) / _FILL_ANGLES
        fill = (fill_radii[:, None] * np.exp(1j * fill_angles)[None, :]).ravel()
        fill.flags.writeable = False
        blocks.append(fill)
        all_points = np.concatenate(blocks)
        all_points.flags.writeable = False

        self.K = K
        self.shells = tuple(shells)
        self.fill = fill
        self.all_points = all_points
        self._shell_slices = tuple(slices)

    @property
    def shell_point_total(self) -> int:
        """Origin plus dyadic shell points (the fill is bookkept separately)."""
        return 1 + sum(s.count for s in self.shells)

    def shell_slice(self, k: int) -> slice:
        """Index range of shell k inside all_points (k = 1..K)."""
        return self._shell_slices[k - 1]

    def __repr__(self):
        return f"DiscGrid(K={self.K}, points={self.all_points.size})"


@functools.lru_cache(maxsize=8)
def default_grid(K: int = 14) -> DiscGrid:
    """Shared immutable grids, constructed once per depth."""
    return DiscGrid(K)
