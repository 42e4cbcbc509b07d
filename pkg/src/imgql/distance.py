"""Distance transforms and the distance operator.

``edt`` gives exact Euclidean distances in physical units, one axis at a
time (linear in the number of points).  ``chamfer_dt`` gives shortest-path
distances along the grid adjacency with Euclidean edge weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .formula import CHAMFER, EUCLIDEAN, Interval
from .space import Adjacency, GridSpace, PointSet


@dataclass(frozen=True, eq=False)
class DistanceField:
    space: GridSpace
    values: np.ndarray = field(repr=False)
    metric: str
    adjacency: Adjacency | None = None

    def __getitem__(self, point) -> float:
        return float(self.values[tuple(point)])


def edt(space: GridSpace, seed: PointSet) -> DistanceField:
    """Exact Euclidean distance from every point to the nearest seed point."""
    if seed.is_empty():
        return DistanceField(space, np.full(space.dims, np.inf), EUCLIDEAN)
    sq = np.where(seed.mask, 0.0, np.inf)
    for axis in range(space.ndim):
        moved = np.moveaxis(sq, axis, -1)
        lines = np.ascontiguousarray(moved).reshape(-1, space.dims[axis])
        _kernels.voronoi_lines(lines, space.spacing[axis])
        sq = np.moveaxis(lines.reshape(moved.shape), -1, axis)
    return DistanceField(space, np.sqrt(np.ascontiguousarray(sq)), EUCLIDEAN)


def chamfer_dt(space: GridSpace, seed: PointSet, adjacency: Adjacency | None = None) -> DistanceField:
    """Shortest-path distance from the seed set over weighted grid edges."""
    if adjacency is not None and adjacency is not space.adjacency:
        space = space.with_adjacency(adjacency)
    if seed.is_empty():
        values = np.full(space.dims, np.inf)
    elif seed.mask.all():
        values = np.zeros(space.dims)
    else:
        flat = _kernels.chamfer(
            np.ascontiguousarray(seed.mask).ravel(),
            space.shape3,
            space.offsets3,
            space.weights,
        )
        values = flat.reshape(space.dims)
    return DistanceField(space, values, CHAMFER, space.adjacency)


def distance_field(space: GridSpace, seed: PointSet, metric: str) -> DistanceField:
    if metric == EUCLIDEAN:
        return edt(space, seed)
    return chamfer_dt(space, seed)


def eval_dist(df: DistanceField, interval: Interval) -> PointSet:
    return PointSet(df.space, interval.contains(df.values))


def flt(c: float, fset: PointSet, metric: str = CHAMFER) -> PointSet:
    """Keep the part of ``fset`` that survives shrinking then regrowing by ``c``."""
    space = fset.space
    below = Interval.from_comparison("<", c)
    core = ~eval_dist(distance_field(space, ~fset, metric), below)
    return eval_dist(distance_field(space, core, metric), below)
