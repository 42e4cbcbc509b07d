"""Macro expansion and desugaring of surface syntax into core formulas.

Macro calls are call-by-name: each argument is expanded in the caller's
scope and substituted for the parameter inside the callee body.  Because
core nodes are interned, an argument used several times is shared rather
than copied, so expansion stays polynomial even for the deeply nested
``touch``/``reach`` chains of real sessions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formula as F
from .errors import ArityError, CycleError, NameResolutionError, StaticError
from .model import Assertion
from .syntax import (
    AssertionExpr,
    Binary,
    BoolConst,
    CheckDecl,
    DistExpr,
    LetDef,
    Loc,
    PredicateExpr,
    Ref,
    ScmpExpr,
    Session,
    Unary,
)

BUILTIN_PREDICATES = {"border": F.Border}


@dataclass
class Expansion:
    """Result of expanding a session."""

    checks: list[tuple[str, F.Formula]]
    #: first source location at which each attribute name is used
    attributes: dict[str, Loc | None] = field(default_factory=dict)


class Expander:
    def __init__(self, session: Session):
        self.defs: dict[str, tuple[int, LetDef]] = {}
        for index, stmt in enumerate(session.statements):
            if isinstance(stmt, LetDef):
                if stmt.name in self.defs:
                    loc = stmt.loc
                    raise StaticError(
                        f"duplicate definition of {stmt.name!r}",
                        loc.line if loc else None,
                        loc.column if loc else None,
                    )
                self.defs[stmt.name] = (index, stmt)
        self.session = session
        self.attributes: dict[str, Loc | None] = {}
        self._memo: dict[tuple[str, tuple], F.Formula] = {}
        self._check_definitions()

    def _check_definitions(self):
        """Reject recursive definitions and dangling names, used or not."""
        graph = {}
        for name, (index, let) in self.defs.items():
            refs = []
            for ref in _refs(let.body):
                if ref.name in let.params:
                    if ref.args:
                        raise ArityError(
                            f"parameter {ref.name!r} is not a macro and takes no arguments", *_pos(ref.loc)
                        )
                    continue
                if ref.name not in self.defs:
                    raise NameResolutionError(f"undefined name {ref.name!r}", *_pos(ref.loc))
                refs.append(ref)
            graph[name] = refs
        state: dict[str, int] = {}

        def visit(name: str, path: list[str]):
            state[name] = 1
            for ref in graph[name]:
                if state.get(ref.name) == 1:
                    cycle = path[path.index(ref.name):] + [ref.name]
                    raise CycleError(cycle, *_pos(ref.loc))
                if ref.name not in state:
                    visit(ref.name, path + [ref.name])
            state[name] = 2

        for name in graph:
            if name not in state:
                visit(name, [name])
        for name, refs in graph.items():
            index = self.defs[name][0]
            for ref in refs:
                if self.defs[ref.name][0] > index:
                    raise NameResolutionError(
                        f"{ref.name!r} is used before its definition", *_pos(ref.loc)
                    )

    # -- public ------------------------------------------------------------

    def expand_checks(self) -> Expansion:
        checks = []
        for index, stmt in enumerate(self.session.statements):
            if isinstance(stmt, CheckDecl):
                checks.append((stmt.color, self.expr(stmt.formula, {}, [], index)))
        return Expansion(checks, dict(self.attributes))

    def definition(self, name: str) -> F.Formula:
        """Expand a parameterless definition by name."""
        return self.expr(Ref(name, None), {}, [], len(self.session.statements))

    def expand_all_definitions(self) -> dict[str, F.Formula]:
        """Expand every parameterless ``Let`` (used to validate corpora)."""
        out = {}
        for name, (index, let) in self.defs.items():
            if not let.params:
                out[name] = self.expr(Ref(name, None, let.loc), {}, [], index + 1)
        return out

    # -- expansion ----------------------------------------------------------

    def expr(self, e, scope: dict[str, F.Formula], stack: list[str], position: int) -> F.Formula:
        if isinstance(e, AssertionExpr):
            self.attributes.setdefault(e.attribute, e.loc)
            return F.Atom(Assertion(e.attribute, e.comparator, e.constant))
        if isinstance(e, PredicateExpr):
            builtin = BUILTIN_PREDICATES.get(e.name)
            if builtin is None:
                raise NameResolutionError(f"unknown predicate {e.name!r}", *_pos(e.loc))
            return builtin()
        if isinstance(e, BoolConst):
            return F.true_() if e.value else F.false_()
        if isinstance(e, Unary):
            inner = self.expr(e.operand, scope, stack, position)
            if e.op == "!":
                return F.Not(inner)
            if e.op == "N":
                return F.Near(inner)
            return F.interior(inner)
        if isinstance(e, Binary):
            left = self.expr(e.left, scope, stack, position)
            right = self.expr(e.right, scope, stack, position)
            if e.op == "&":
                return F.And(left, right)
            if e.op == "|":
                return F.or_(left, right)
            if e.op == "S":
                return F.Surrounded(left, right)
            if e.op == "R":
                return F.reach(left, right)
            return F.touch(left, right)
        if isinstance(e, DistExpr):
            inner = self.expr(e.operand, scope, stack, position)
            metric = F.EUCLIDEAN if e.metric == "EDT" else F.CHAMFER
            if e.interval is None:
                interval = F.Interval.from_comparison(e.comparator, e.constant)
            else:
                iv = e.interval
                interval = F.Interval(iv.lower, iv.upper, iv.lower_closed, iv.upper_closed)
            return F.Dist(metric, interval, inner)
        if isinstance(e, ScmpExpr):
            self.attributes.setdefault(e.attr_a, e.loc)
            self.attributes.setdefault(e.attr_b, e.loc)
            params = F.ScmpParams(e.radius, e.comparator, e.threshold, e.lower, e.upper, e.bins)
            return F.Scmp(
                e.attr_a,
                self.expr(e.restrict, scope, stack, position),
                params,
                e.attr_b,
                self.expr(e.target, scope, stack, position),
            )
        if isinstance(e, Ref):
            return self.ref(e, scope, stack, position)
        raise TypeError(f"cannot expand {e!r}")

    def ref(self, e: Ref, scope, stack, position) -> F.Formula:
        if e.name in scope:
            if e.args:
                raise ArityError(f"parameter {e.name!r} is not a macro and takes no arguments", *_pos(e.loc))
            return scope[e.name]
        if e.name not in self.defs:
            raise NameResolutionError(f"undefined name {e.name!r}", *_pos(e.loc))
        if e.name in stack:
            cycle = stack[stack.index(e.name):] + [e.name]
            raise CycleError(cycle, *_pos(e.loc))
        index, let = self.defs[e.name]
        if index >= position:
            raise NameResolutionError(f"{e.name!r} is used before its definition", *_pos(e.loc))
        args = e.args or ()
        if len(args) != len(let.params):
            raise ArityError(
                f"{e.name!r} expects {len(let.params)} argument(s), got {len(args)}", *_pos(e.loc)
            )
        actuals = tuple(self.expr(a, scope, stack, position) for a in args)
        key = (e.name, actuals)
        cached = self._memo.get(key)
        if cached is None:
            inner_scope = dict(zip(let.params, actuals))
            cached = self.expr(let.body, inner_scope, stack + [e.name], index)
            self._memo[key] = cached
        return cached


def _refs(e):
    if isinstance(e, Ref):
        yield e
        for a in e.args or ():
            yield from _refs(a)
    elif isinstance(e, Unary):
        yield from _refs(e.operand)
    elif isinstance(e, Binary):
        yield from _refs(e.left)
        yield from _refs(e.right)
    elif isinstance(e, DistExpr):
        yield from _refs(e.operand)
    elif isinstance(e, ScmpExpr):
        yield from _refs(e.restrict)
        yield from _refs(e.target)


def _pos(loc: Loc | None):
    return (loc.line, loc.column) if loc else (None, None)


def expand(session: Session) -> list[tuple[str, F.Formula]]:
    return Expander(session).expand_checks().checks


def expand_formula(expr, session: Session | None = None) -> F.Formula:
    """Expand a standalone surface formula against the definitions of ``session``."""
    ex = Expander(session or Session(()))
    return ex.expr(expr, {}, [], len(ex.session.statements))
