"""First-order texture statistics: histograms, cross-correlation, SCMP."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ParameterError
from .model import COMPARATORS, Model
from .space import GridSpace, PointSet

_CMP_CODES = {"=": 0, "<": 1, ">": 2, "<=": 3, ">=": 4}


@dataclass(frozen=True, eq=False)
class Histogram:
    counts: np.ndarray = field(repr=False)
    lower: float
    upper: float

    @property
    def k(self) -> int:
        return int(self.counts.size)

    @property
    def width(self) -> float:
        return (self.upper - self.lower) / self.k

    def mean(self) -> float:
        return float(self.counts.mean())


def _check_range(lower: float, upper: float, k: int):
    if not lower < upper:
        raise ParameterError(f"histogram range needs m < M, got ({lower}, {upper})")
    if int(k) != k or k < 1:
        raise ParameterError(f"histogram needs k >= 1 bins, got {k}")


def bin_indices(values, lower: float, upper: float, k: int) -> np.ndarray:
    """0-based bin of each value, or -1 outside ``[lower, upper)``.

    Bin ``i`` holds values with ``i*w <= v - lower < (i+1)*w``, ``w = (upper-lower)/k``.
    """
    _check_range(lower, upper, k)
    v = np.asarray(values, dtype=np.float64)
    width = (upper - lower) / k
    offset = v - lower
    idx = np.floor(offset / width)
    inside = (v >= lower) & (v < upper)
    idx = np.where(inside, idx, 0).astype(np.int64)
    # division rounding can land one bin off; re-test against the definition
    idx = np.clip(idx, 0, k - 1)
    idx = np.where(idx * width > offset, idx - 1, idx)
    idx = np.where((idx + 1) * width <= offset, idx + 1, idx)
    idx = np.clip(idx, 0, k - 1)
    return np.where(inside, idx, -1)


def histogram(m: Model, attribute: str, region: PointSet, lower: float, upper: float, k: int) -> Histogram:
    values = m.channel(attribute)
    idx = bin_indices(values[region.mask], lower, upper, k)
    counts = np.bincount(idx[idx >= 0], minlength=int(k)).astype(np.float64)
    return Histogram(counts, float(lower), float(upper))


def cross_correlation(h1, h2) -> float:
    """Pearson correlation of two histograms (or plain count vectors)."""
    a = np.asarray(getattr(h1, "counts", h1), dtype=np.float64)
    b = np.asarray(getattr(h2, "counts", h2), dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ParameterError(f"histograms need the same number of bins, got {a.size} and {b.size}")
    return float(_kernels.correlation(a, b))


def sphere_offsets(space: GridSpace, radius: float) -> np.ndarray:
    """Displacements ``o`` with Euclidean length ``|o * spacing| <= radius``."""
    reach = [int(math.floor(radius / s)) for s in space.spacing]
    axes = [np.arange(-r, r + 1) for r in reach]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, space.ndim)
    length2 = ((grid * np.array(space.spacing)) ** 2).sum(axis=1)
    return grid[length2 <= radius * radius].astype(np.int64)


def scmp(
    m: Model,
    attr_a: str,
    attr_b: str,
    target: PointSet,
    radius: float,
    comparator: str,
    threshold: float,
    lower: float,
    upper: float,
    k: int,
    restrict: PointSet,
) -> PointSet:
    """Points of ``restrict`` whose neighbourhood texture matches the target's.

    For each such point, the histogram of ``attr_a`` over the ball of the
    given radius is correlated with the histogram of ``attr_b`` over
    ``target``; the point is kept when the coefficient satisfies
    ``comparator threshold``.
    """
    _check_range(lower, upper, k)
    if not radius >= 0:
        raise ParameterError(f"sphere radius must be >= 0, got {radius}")
    if comparator not in COMPARATORS:
        raise ParameterError(f"unknown comparator {comparator!r}")
    space = m.space
    target_hist = histogram(m, attr_b, target, lower, upper, k).counts
    bins = bin_indices(m.channel(attr_a), lower, upper, k).ravel()
    offs = sphere_offsets(space, radius)
    offs3 = np.hstack([np.zeros((len(offs), 3 - space.ndim), dtype=np.int64), offs])
    out = _kernels.scmp_points(
        np.ascontiguousarray(bins),
        np.ascontiguousarray(restrict.mask).ravel(),
        target_hist,
        space.shape3,
        np.ascontiguousarray(offs3),
        int(k),
        _CMP_CODES[comparator],
        float(threshold),
    )
    return PointSet(space, out.reshape(space.dims))
