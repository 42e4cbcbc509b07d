"""Global model checking: the set of points satisfying a formula."""

from __future__ import annotations

import numpy as np

from . import _kernels
from . import formula as F
from .distance import distance_field, eval_dist
from .model import Model
from .space import PointSet, closure
from .stats import scmp


def check_surrounded(s1: PointSet, s2: PointSet) -> PointSet:
    """Points of ``s1`` from which no path leaves ``s1`` without crossing ``s2``.

    Floods from the points in neither set through ``s1 - s2`` (an ``s2``
    point blocks every path entering it).  A point of ``s1`` fails exactly
    when it is adjacent to, or part of, the flooded region.
    """
    space = s1.space
    bad = np.ascontiguousarray(~(s1.mask | s2.mask)).ravel()
    allowed = np.ascontiguousarray(s1.mask & ~s2.mask).ravel()
    _kernels.propagate_bad(allowed, bad, space.shape3, space.offsets3)
    escaped = closure(PointSet(space, bad.reshape(space.dims)))
    return PointSet(space, s1.mask & ~escaped.mask)


class Evaluator:
    """Evaluates formulas on one model, sharing results between subformulas.

    Parameters
    ----------
    model : Model
        The model to check against.
    cache : bool
        Keep each subformula's result for the lifetime of the evaluator.
        When off, results are shared only within a single ``check`` call.
    """

    def __init__(self, model: Model, cache: bool = True):
        self.model = model
        self.cache_enabled = cache
        self._cache: dict[F.Formula, PointSet] = {}

    def clear(self):
        self._cache.clear()

    def check(self, f: F.Formula) -> PointSet:
        memo = self._cache if self.cache_enabled else {}
        if f in memo:
            return memo[f]
        # post-order walk keeps the stack flat for deep chains
        for node in F.subformulas(f):
            if node not in memo:
                memo[node] = self._eval(node, memo)
        return memo[f]

    def _eval(self, f: F.Formula, memo) -> PointSet:
        m = self.model
        if isinstance(f, F.Atom):
            return m.eval_assertion(f.assertion)
        if isinstance(f, F.Border):
            return m.border()
        if isinstance(f, F.Not):
            return ~memo[f.operand]
        if isinstance(f, F.And):
            return memo[f.left] & memo[f.right]
        if isinstance(f, F.Near):
            return closure(memo[f.operand])
        if isinstance(f, F.Surrounded):
            return check_surrounded(memo[f.left], memo[f.right])
        if isinstance(f, F.Dist):
            df = distance_field(m.space, memo[f.operand], f.metric)
            return eval_dist(df, f.interval)
        if isinstance(f, F.Scmp):
            p = f.params
            return scmp(
                m, f.attr_a, f.attr_b, memo[f.target], p.radius, p.comparator,
                p.threshold, p.lower, p.upper, p.bins, memo[f.restrict],
            )
        raise TypeError(f"unknown formula node {type(f).__name__}")


def check(model: Model, f: F.Formula) -> PointSet:
    return Evaluator(model).check(f)
