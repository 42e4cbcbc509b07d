"""Closure models: a grid plus named scalar channels (image intensities)."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ConflictError, DimensionError, NameResolutionError, ParameterError
from .space import GridSpace, PointSet

RESERVED = frozenset({"border"})

COMPARATORS = {
    "=": operator.eq,
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class Assertion:
    """``[attribute <comparator> constant]``."""

    attribute: str
    comparator: str
    constant: float

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise ParameterError(f"unknown comparator {self.comparator!r}")
        object.__setattr__(self, "constant", float(self.constant))

    def __str__(self):
        return f"[{self.attribute} {self.comparator} {self.constant!r}]"


@dataclass(frozen=True, eq=False)
class Model:
    space: GridSpace
    channels: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        checked = {}
        for name, values in dict(self.channels).items():
            checked[name] = _as_channel(self.space, name, values)
        object.__setattr__(self, "channels", MappingProxyType(checked))

    def attach_channel(self, name: str, values) -> "Model":
        if name in RESERVED:
            raise ConflictError(f"{name!r} is a reserved predicate name")
        if name in self.channels:
            raise ConflictError(f"channel {name!r} is already bound")
        channels = dict(self.channels)
        channels[name] = values
        return Model(self.space, channels)

    def channel(self, name: str) -> np.ndarray:
        try:
            return self.channels[name]
        except KeyError:
            raise NameResolutionError(f"unknown attribute {name!r}") from None

    def eval_assertion(self, assertion: Assertion) -> PointSet:
        values = self.channel(assertion.attribute)
        compare = COMPARATORS[assertion.comparator]
        return PointSet(self.space, compare(values, assertion.constant))

    def border(self) -> PointSet:
        return self.space.border_set()


def _as_channel(space: GridSpace, name: str, values) -> np.ndarray:
    if name in RESERVED:
        raise ConflictError(f"{name!r} is a reserved predicate name")
    arr = np.asarray(values, dtype=np.float64)
    if arr.size != space.size:
        raise DimensionError(
            f"channel {name!r} has {arr.size} values but the grid has {space.size} points"
        )
    if arr.shape != space.dims:
        if arr.ndim != 1:
            raise DimensionError(f"channel {name!r} has shape {arr.shape}, grid is {space.dims}")
        arr = arr.reshape(space.dims)
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def attach_channel(m: Model, name: str, values) -> Model:
    return m.attach_channel(name, values)


def eval_assertion(m: Model, assertion: Assertion) -> PointSet:
    return m.eval_assertion(assertion)
