"""Uniform grid hashing for proximity queries over point sets.

Cells are keyed by integer coordinate tuples; a radius query inspects the
3^d neighborhood of the query cell, so it is exact for radii up to the
cell size.  The index is rebuild-free and immutable after construction.
"""

from __future__ import annotations

import math

import numpy as np


class GridIndex:
    def __init__(self, points: np.ndarray, cell_size: float):
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        self.points = np.asarray(points, dtype=float)
        self.cell_size = float(cell_size)
        self._inv = 1.0 / self.cell_size
        self._cells: dict[tuple, list[int]] = {}
        keys = np.floor(self.points * self._inv).astype(np.int64)
        for idx, key in enumerate(map(tuple, keys)):
            self._cells.setdefault(key, []).append(idx)
        self._dim = self.points.shape[1]
        self._offsets = list(np.ndindex(*(3,) * self._dim))

    def query_ball(self, point, radius: float) -> list[int]:
        """Indices of stored points within ``radius`` of ``point``."""
        if radius > self.cell_size:
            raise ValueError("radius exceeds cell size; rebuild with a larger cell")
        p = np.asarray(point, dtype=float)
        base = tuple(int(math.floor(c * self._inv)) - 1 for c in p)
        hits = []
        for off in self._offsets:
            cell = self._cells.get(tuple(b + o for b, o in zip(base, off)))
            if cell:
                hits.extend(cell)
        if not hits:
            return []
        hits = np.array(hits)
        d2 = np.sum((self.points[hits] - p) ** 2, axis=1)
        return list(hits[d2 <= radius * radius])

    def nearest_within(self, point, radius: float) -> tuple[int, float] | None:
        """Closest stored point within ``radius``, as (index, distance)."""
        hits = self.query_ball(point, radius)
        if not hits:
            return None
        p = np.asarray(point, dtype=float)
        d = np.linalg.norm(self.points[hits] - p, axis=1)
        k = int(np.argmin(d))
        return hits[k], float(d[k])

    def close_pairs(self, radius: float):
        """Yield index pairs (i < j) of points within ``radius`` of each other."""
        if radius > self.cell_size:
            raise ValueError("radius exceeds cell size; rebuild with a larger cell")
        r2 = radius * radius
        for i in range(len(self.points)):
            for j in self.query_ball(self.points[i], radius):
                if i < j and np.sum((self.points[i] - self.points[j]) ** 2) <= r2:
                    yield i, j
