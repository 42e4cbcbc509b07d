"""Surface syntax tree for session files, before macro expansion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Loc:
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


def _loc():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class AssertionExpr:
    attribute: str
    comparator: str
    constant: float
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class PredicateExpr:
    name: str
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class BoolConst:
    value: bool
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Ref:
    """A name, or a macro call when ``args`` is not None."""

    name: str
    args: tuple | None = None
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Unary:
    op: str  # "!", "N" or "I"
    operand: object
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Binary:
    op: str  # "&", "|", "S", "R" or "T"
    left: object
    right: object
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class IntervalExpr:
    lower: float
    upper: float
    lower_closed: bool
    upper_closed: bool


@dataclass(frozen=True)
class DistExpr:
    metric: str  # "EDT" or "MDDT"
    operand: object
    comparator: str | None
    constant: float | None
    interval: IntervalExpr | None = None
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class ScmpExpr:
    attr_a: str
    restrict: object
    radius: float
    comparator: str
    threshold: float
    lower: float
    upper: float
    bins: int
    attr_b: str
    target: object
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class ModelDecl:
    spec: str
    kind: str
    bindings: tuple[tuple[str, str], ...]
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class LetDef:
    name: str
    params: tuple[str, ...]
    body: object
    has_parens: bool = False
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class OutputDecl:
    path: str
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class CheckDecl:
    color: str
    formula: object
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Session:
    statements: tuple

    @property
    def model(self) -> ModelDecl | None:
        return next((s for s in self.statements if isinstance(s, ModelDecl)), None)

    @property
    def lets(self) -> list[LetDef]:
        return [s for s in self.statements if isinstance(s, LetDef)]

    @property
    def output(self) -> OutputDecl | None:
        return next((s for s in self.statements if isinstance(s, OutputDecl)), None)

    @property
    def checks(self) -> list[CheckDecl]:
        return [s for s in self.statements if isinstance(s, CheckDecl)]


# -- pretty printing ----------------------------------------------------------


def _num(x: float) -> str:
    return repr(float(x))


def format_expr(e) -> str:
    """Fully parenthesised rendering; re-parsing yields an equal tree."""
    if isinstance(e, AssertionExpr):
        return f"[{e.attribute} {e.comparator} {_num(e.constant)}]"
    if isinstance(e, PredicateExpr):
        return f"[{e.name}]"
    if isinstance(e, BoolConst):
        return "TT" if e.value else "FF"
    if isinstance(e, Ref):
        if e.args is None:
            return e.name
        return f"{e.name}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, Unary):
        return f"{e.op}({format_expr(e.operand)})"
    if isinstance(e, Binary):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    if isinstance(e, DistExpr):
        if e.interval is None:
            bound = f"{e.comparator}{_num(e.constant)}"
        else:
            iv = e.interval
            hi = "inf" if math.isinf(iv.upper) else _num(iv.upper)
            bound = (
                f"{'[' if iv.lower_closed else '('}{_num(iv.lower)}, "
                f"{hi}{']' if iv.upper_closed else ')'}"
            )
        return f"{e.metric}({format_expr(e.operand)}, {bound})"
    if isinstance(e, ScmpExpr):
        return (
            f"SCMP({e.attr_a}, {format_expr(e.restrict)}, {_num(e.radius)}, "
            f"{e.comparator}{_num(e.threshold)}, {_num(e.lower)}, {_num(e.upper)}, {e.bins})"
            f"({e.attr_b}, {format_expr(e.target)})"
        )
    raise TypeError(f"not a formula expression: {e!r}")


def format_session(session: Session) -> str:
    lines = []
    for s in session.statements:
        if isinstance(s, ModelDecl):
            lines.append(f'Model "{s.spec}";')
        elif isinstance(s, LetDef):
            head = s.name
            if s.params or s.has_parens:
                head += f"({', '.join(s.params)})"
            lines.append(f"Let {head} = {format_expr(s.body)};")
        elif isinstance(s, OutputDecl):
            lines.append(f'Output "{s.path}";')
        elif isinstance(s, CheckDecl):
            lines.append(f'Check "{s.color}" {format_expr(s.formula)};')
    return "\n".join(lines) + "\n"
