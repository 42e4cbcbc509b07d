"""Core formulas (the operator set the checker understands) and derived builders.

Core nodes are hash-consed: constructing a node whose kind and children
match an existing node returns that very object.  Structural equality is
therefore identity, hashing is O(1), and the evaluator cache is keyed by
shape without ever walking a tree.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .model import COMPARATORS, Assertion

EUCLIDEAN = "euclidean"
CHAMFER = "chamfer"
METRICS = (EUCLIDEAN, CHAMFER)


@dataclass(frozen=True)
class Interval:
    """Subset of ``[0, inf]`` with independently open/closed ends."""

    lower: float = 0.0
    upper: float = math.inf
    lower_closed: bool = True
    upper_closed: bool = False

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if math.isnan(lo) or math.isnan(hi) or math.isinf(lo):
            raise ParameterError(f"bad interval bounds ({lo}, {hi})")
        if lo > hi:
            raise ParameterError(f"interval lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if math.isinf(hi):
            object.__setattr__(self, "upper_closed", False)

    @classmethod
    def from_comparison(cls, comparator: str, c: float) -> "Interval":
        c = float(c)
        if comparator == "<":
            return cls(0.0, c, True, False)
        if comparator == "<=":
            return cls(0.0, c, True, True)
        if comparator == "=":
            return cls(c, c, True, True)
        if comparator == ">=":
            return cls(c, math.inf, True, False)
        if comparator == ">":
            return cls(c, math.inf, False, False)
        raise ParameterError(f"unknown comparator {comparator!r}")

    def as_comparison(self) -> tuple[str, float] | None:
        for cmp in COMPARATORS:
            c = self.upper if cmp in ("<", "<=") else self.lower
            if not math.isinf(c) and Interval.from_comparison(cmp, c) == self:
                return cmp, c
        return None

    def contains(self, values):
        """Vectorised membership; ``+inf`` belongs only to unbounded intervals."""
        v = np.asarray(values, dtype=np.float64)
        above = v >= self.lower if self.lower_closed else v > self.lower
        if math.isinf(self.upper):
            return above
        below = v <= self.upper if self.upper_closed else v < self.upper
        return above & below

    def __str__(self):
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        hi = "inf" if math.isinf(self.upper) else repr(self.upper)
        return f"{left}{self.lower!r}, {hi}{right}"


class Formula:
    """Interned core formula node; ``args`` holds children and parameters."""

    __slots__ = ("args", "__weakref__")
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, *args):
        key = (cls, args)
        node = Formula._table.get(key)
        if node is None:
            node = object.__new__(cls)
            node.args = args
            Formula._table[key] = node
        return node

    def children(self) -> tuple["Formula", ...]:
        return tuple(a for a in self.args if isinstance(a, Formula))

    def __repr__(self):
        return f"<{type(self).__name__} {to_text(self)}>"

    def __reduce__(self):
        return (type(self), self.args)


class Atom(Formula):
    __slots__ = ()

    @property
    def assertion(self) -> Assertion:
        return self.args[0]


class Border(Formula):
    __slots__ = ()


class Not(Formula):
    __slots__ = ()

    @property
    def operand(self) -> Formula:
        return self.args[0]


class And(Formula):
    __slots__ = ()

    @property
    def left(self) -> Formula:
        return self.args[0]

    @property
    def right(self) -> Formula:
        return self.args[1]


class Near(Formula):
    __slots__ = ()

    @property
    def operand(self) -> Formula:
        return self.args[0]


class Surrounded(Formula):
    __slots__ = ()

    @property
    def left(self) -> Formula:
        return self.args[0]

    @property
    def right(self) -> Formula:
        return self.args[1]


class Dist(Formula):
    __slots__ = ()

    def __new__(cls, metric: str, interval: Interval, operand: Formula):
        if metric not in METRICS:
            raise ParameterError(f"unknown metric {metric!r}")
        return super().__new__(cls, metric, interval, operand)

    @property
    def metric(self) -> str:
        return self.args[0]

    @property
    def interval(self) -> Interval:
        return self.args[1]

    @property
    def operand(self) -> Formula:
        return self.args[2]


@dataclass(frozen=True)
class ScmpParams:
    radius: float
    comparator: str
    threshold: float
    lower: float
    upper: float
    bins: int

    def __post_init__(self):
        if not self.radius >= 0:
            raise ParameterError(f"SCMP radius must be >= 0, got {self.radius}")
        if not self.lower < self.upper:
            raise ParameterError(f"SCMP range needs m < M, got ({self.lower}, {self.upper})")
        if int(self.bins) != self.bins or self.bins < 1:
            raise ParameterError(f"SCMP needs a positive integer bin count, got {self.bins}")
        if self.comparator not in COMPARATORS:
            raise ParameterError(f"unknown comparator {self.comparator!r}")
        for name in ("radius", "threshold", "lower", "upper"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "bins", int(self.bins))


class Scmp(Formula):
    """``F_a & SCMP(...)`` with ``restrict`` = F_a and ``target`` = F_b."""

    __slots__ = ()

    def __new__(cls, attr_a: str, restrict: Formula, params: ScmpParams, attr_b: str, target: Formula):
        return super().__new__(cls, attr_a, restrict, params, attr_b, target)

    @property
    def attr_a(self) -> str:
        return self.args[0]

    @property
    def restrict(self) -> Formula:
        return self.args[1]

    @property
    def params(self) -> ScmpParams:
        return self.args[2]

    @property
    def attr_b(self) -> str:
        return self.args[3]

    @property
    def target(self) -> Formula:
        return self.args[4]


# -- derived operators, as core-formula builders ----------------------------


def atom(attribute: str, comparator: str, constant: float) -> Atom:
    return Atom(Assertion(attribute, comparator, constant))


def false_() -> Formula:
    return And(Border(), Not(Border()))


def true_() -> Formula:
    return Not(false_())


def or_(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def interior(a: Formula) -> Formula:
    return Not(Near(Not(a)))


def reach(a: Formula, b: Formula) -> Formula:
    return Not(Surrounded(Not(b), Not(a)))


def touch(a: Formula, b: Formula) -> Formula:
    return And(a, reach(or_(a, b), b))


def everywhere(a: Formula) -> Formula:
    return Surrounded(a, false_())


def somewhere(a: Formula) -> Formula:
    return Not(everywhere(Not(a)))


def strong_surrounded(a: Formula, b: Formula) -> Formula:
    return And(Surrounded(a, b), Not(everywhere(a)))


def dist(metric: str, comparator: str, c: float, a: Formula) -> Dist:
    return Dist(metric, Interval.from_comparison(comparator, c), a)


def flt(c: float, a: Formula, metric: str = CHAMFER) -> Formula:
    """Opening-like filter: ``D<c (!D<c !a)``."""
    return dist(metric, "<", c, Not(dist(metric, "<", c, Not(a))))


def bounded_surrounded(a: Formula, b: Formula, interval: Interval, metric: str = CHAMFER) -> Formula:
    return And(strong_surrounded(And(a, Not(b)), b), Dist(metric, interval, b))


# -- measurement and printing ---------------------------------------------


def size(f: Formula) -> int:
    """Operator count: 1 per atom, 1 plus the children's sizes otherwise.

    Shared subformulas are counted once per occurrence, as in a tree.
    """
    memo: dict[int, int] = {}

    def go(node: Formula) -> int:
        key = id(node)
        if key not in memo:
            memo[key] = 1 + sum(go(c) for c in node.children())
        return memo[key]

    return go(f)


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas in post-order (children before parents)."""
    seen: set[int] = set()
    order: list[Formula] = []
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in reversed(node.children()):
            if id(child) not in seen:
                stack.append((child, False))
    return order


def _num(x: float) -> str:
    return repr(float(x))


def _interval_text(interval: Interval) -> str:
    cmp = interval.as_comparison()
    if cmp is not None:
        return f"{cmp[0]}{_num(cmp[1])}"
    left = "[" if interval.lower_closed else "("
    right = "]" if interval.upper_closed else ")"
    hi = "inf" if math.isinf(interval.upper) else _num(interval.upper)
    return f"{left}{_num(interval.lower)}, {hi}{right}"


def to_text(f: Formula) -> str:
    """Render in session-file syntax; the output parses back to ``f``."""
    if isinstance(f, Atom):
        a = f.assertion
        return f"[{a.attribute} {a.comparator} {_num(a.constant)}]"
    if isinstance(f, Border):
        return "[border]"
    if isinstance(f, Not):
        return f"!({to_text(f.operand)})"
    if isinstance(f, Near):
        return f"N({to_text(f.operand)})"
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Surrounded):
        return f"({to_text(f.left)} S {to_text(f.right)})"
    if isinstance(f, Dist):
        name = "EDT" if f.metric == EUCLIDEAN else "MDDT"
        return f"{name}({to_text(f.operand)}, {_interval_text(f.interval)})"
    if isinstance(f, Scmp):
        p = f.params
        return (
            f"SCMP({f.attr_a}, {to_text(f.restrict)}, {_num(p.radius)}, "
            f"{p.comparator}{_num(p.threshold)}, {_num(p.lower)}, {_num(p.upper)}, {p.bins})"
            f"({f.attr_b}, {to_text(f.target)})"
        )
    raise TypeError(f"not a core formula: {f!r}")
