"""Regular grids as quasi-discrete closure spaces.

A :class:`GridSpace` fixes the image domain (shape, physical spacing and the
adjacency relation).  Every formula denotes a :class:`PointSet`, a dense
boolean mask over that domain.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, UsageError


class Adjacency(enum.Enum):
    ORTHOGONAL = "ortho"
    ORTHODIAGONAL = "diag"
    WINDOW5 = "win5"

    @classmethod
    def parse(cls, text: str) -> "Adjacency":
        aliases = {
            "ortho": cls.ORTHOGONAL,
            "orthogonal": cls.ORTHOGONAL,
            "diag": cls.ORTHODIAGONAL,
            "orthodiagonal": cls.ORTHODIAGONAL,
            "win5": cls.WINDOW5,
            "window5": cls.WINDOW5,
        }
        try:
            return aliases[text.lower()]
        except KeyError:
            raise UsageError(f"unknown adjacency {text!r}; use ortho, diag or win5") from None


def _adjacency_offsets(adjacency: Adjacency, ndim: int) -> np.ndarray:
    if adjacency is Adjacency.ORTHOGONAL:
        rows = []
        for axis in range(ndim):
            for step in (-1, 1):
                off = [0] * ndim
                off[axis] = step
                rows.append(off)
        return np.array(rows, dtype=np.int64)
    reach = 1 if adjacency is Adjacency.ORTHODIAGONAL else 2
    rows = [
        off
        for off in itertools.product(range(-reach, reach + 1), repeat=ndim)
        if any(off)
    ]
    return np.array(rows, dtype=np.int64)


@dataclass(frozen=True)
class GridSpace:
    """Image domain: ``dims`` points per axis, ``spacing`` physical units per axis."""

    dims: tuple[int, ...]
    spacing: tuple[float, ...] = ()
    adjacency: Adjacency = Adjacency.ORTHODIAGONAL

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) not in (2, 3):
            raise DimensionError(f"grids must have 2 or 3 axes, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise DimensionError(f"every axis needs at least one point, got {dims}")
        spacing = tuple(float(s) for s in self.spacing) or (1.0,) * len(dims)
        if len(spacing) != len(dims):
            raise DimensionError(f"spacing {spacing} does not match dims {dims}")
        if any(not s > 0 for s in spacing):
            raise DimensionError(f"spacing must be positive, got {spacing}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        if isinstance(self.adjacency, str):
            object.__setattr__(self, "adjacency", Adjacency.parse(self.adjacency))

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    def with_adjacency(self, adjacency: Adjacency) -> "GridSpace":
        return GridSpace(self.dims, self.spacing, adjacency)

    # -- adjacency --------------------------------------------------------

    @cached_property
    def offsets(self) -> np.ndarray:
        """Neighbor displacement vectors (self excluded), shape ``(K, ndim)``."""
        return _adjacency_offsets(self.adjacency, self.ndim)

    @cached_property
    def weights(self) -> np.ndarray:
        """Euclidean length of each offset in physical units."""
        return np.sqrt(((self.offsets * np.array(self.spacing)) ** 2).sum(axis=1))

    def contains(self, point) -> bool:
        return len(point) == self.ndim and all(0 <= c < d for c, d in zip(point, self.dims))

    def neighbors(self, point) -> list[tuple[tuple[int, ...], float]]:
        point = tuple(int(c) for c in point)
        if not self.contains(point):
            raise UsageError(f"point {point} lies outside grid {self.dims}")
        out = []
        for off, w in zip(self.offsets, self.weights):
            q = tuple(c + int(o) for c, o in zip(point, off))
            if self.contains(q):
                out.append((q, float(w)))
        return out

    # -- point sets -------------------------------------------------------

    def empty(self) -> "PointSet":
        return PointSet(self, np.zeros(self.dims, dtype=bool))

    def full(self) -> "PointSet":
        return PointSet(self, np.ones(self.dims, dtype=bool))

    def pointset(self, mask) -> "PointSet":
        return PointSet(self, mask)

    def from_points(self, points) -> "PointSet":
        mask = np.zeros(self.dims, dtype=bool)
        for p in points:
            mask[tuple(p)] = True
        return PointSet(self, mask)

    def closure(self, s: "PointSet") -> "PointSet":
        return PointSet(self, dilate(s.mask, self.offsets))

    def border_set(self) -> "PointSet":
        mask = np.zeros(self.dims, dtype=bool)
        for axis in range(self.ndim):
            index = [slice(None)] * self.ndim
            index[axis] = 0
            mask[tuple(index)] = True
            index[axis] = self.dims[axis] - 1
            mask[tuple(index)] = True
        return PointSet(self, mask)

    # -- 3D views used by the compiled kernels ----------------------------

    @property
    def shape3(self) -> np.ndarray:
        return np.array((1,) * (3 - self.ndim) + self.dims, dtype=np.int64)

    @property
    def spacing3(self) -> np.ndarray:
        return np.array((1.0,) * (3 - self.ndim) + self.spacing, dtype=np.float64)

    @property
    def offsets3(self) -> np.ndarray:
        pad = np.zeros((len(self.offsets), 3 - self.ndim), dtype=np.int64)
        return np.ascontiguousarray(np.hstack([pad, self.offsets]))


def dilate(mask: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """``mask`` united with every shifted copy of it (one closure step)."""
    out = mask.copy()
    for off in offsets:
        dst, src = [], []
        for o, n in zip(off, mask.shape):
            o = int(o)
            if abs(o) >= n:
                break
            dst.append(slice(max(o, 0), n + min(o, 0)))
            src.append(slice(max(-o, 0), n - max(o, 0)))
        else:
            out[tuple(dst)] |= mask[tuple(src)]
    return out


@dataclass(frozen=True, eq=False)
class PointSet:
    """Set of grid points, stored as a boolean mask shaped like the grid."""

    space: GridSpace
    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != self.space.dims:
            if mask.size != self.space.size:
                raise DimensionError(
                    f"mask with {mask.size} entries does not fit grid {self.space.dims}"
                )
            mask = mask.reshape(self.space.dims)
        if mask.flags.writeable:
            # never freeze an array the caller may still be editing
            mask = mask.copy()
            mask.flags.writeable = False
        object.__setattr__(self, "mask", mask)

    def _same(self, other: "PointSet") -> np.ndarray:
        if not isinstance(other, PointSet):
            return NotImplemented
        if other.space.dims != self.space.dims:
            raise DimensionError(
                f"point sets live on different grids: {self.space.dims} vs {other.space.dims}"
            )
        return other.mask

    def __or__(self, other):
        return PointSet(self.space, self.mask | self._same(other))

    def __and__(self, other):
        return PointSet(self.space, self.mask & self._same(other))

    def __sub__(self, other):
        return PointSet(self.space, self.mask & ~self._same(other))

    def __invert__(self):
        return PointSet(self.space, ~self.mask)

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.space.dims == other.space.dims and bool(np.array_equal(self.mask, other.mask))

    def __le__(self, other):
        return not bool((self.mask & ~self._same(other)).any())

    def __ge__(self, other):
        return other <= self

    __hash__ = None

    def __len__(self) -> int:
        return self.count()

    def __contains__(self, point) -> bool:
        return bool(self.mask[tuple(point)])

    def count(self) -> int:
        return int(np.count_nonzero(self.mask))

    def is_empty(self) -> bool:
        return not self.mask.any()

    def points(self) -> list[tuple[int, ...]]:
        return [tuple(int(c) for c in p) for p in np.argwhere(self.mask)]


def closure(s: PointSet) -> PointSet:
    return s.space.closure(s)


def border_set(space: GridSpace) -> PointSet:
    return space.border_set()


def neighbors(space: GridSpace, point) -> list[tuple[tuple[int, ...], float]]:
    return space.neighbors(point)
