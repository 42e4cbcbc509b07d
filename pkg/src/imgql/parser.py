"""Lexer and recursive-descent parser for ImgQL session files.

Binding strength, loosest first: ``|``, ``&``, the infix spatial operators
``S``/``R``/``T`` (left-associative), then the prefix operators ``!``,
``N`` and ``I``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ParseError
from .syntax import (
    AssertionExpr,
    Binary,
    BoolConst,
    CheckDecl,
    DistExpr,
    IntervalExpr,
    LetDef,
    Loc,
    ModelDecl,
    OutputDecl,
    PredicateExpr,
    Ref,
    ScmpExpr,
    Session,
    Unary,
    format_expr,
)

KEYWORDS = {"Let", "Model", "Check", "Output"}
OPERATORS = {"N", "I", "S", "R", "T", "TT", "FF", "EDT", "MDDT", "SCMP"}
COMPARATORS = ("<=", ">=", "=", "<", ">")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<number>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"]*")
  | (?P<punct><=|>=|[()\[\],;=!&|<>])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # keyword, op, ident, number, string, path, punct, eof
    text: str
    line: int
    column: int

    @property
    def loc(self) -> Loc:
        return Loc(self.line, self.column)

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    expect_path = False
    while pos < len(text):
        col = pos - line_start + 1
        if expect_path and text[pos] not in " \t\r\n\"":
            m = re.compile(r"[^\s;]+").match(text, pos)
            tokens.append(Token("path", m.group(), line, col))
            pos = m.end()
            expect_path = False
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        if kind == "number" and value[0] in "+-" and tokens and _ends_operand(tokens[-1]):
            # "a-1" style arithmetic is not part of the language
            raise ParseError(f"unexpected character {value[0]!r}", line, col)
        if kind == "ident":
            if value in KEYWORDS:
                kind = "keyword"
            elif value in OPERATORS:
                kind = "op"
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
            expect_path = kind == "keyword" and value == "Output"
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _ends_operand(tok: Token) -> bool:
    return tok.kind in ("ident", "number") or tok.text in (")", "]")


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "op", "keyword") and t.text in texts

    def fail(self, expected, message: str | None = None):
        t = self.tok
        raise ParseError(message or f"unexpected {t.describe()}", t.line, t.column, tuple(expected))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail([text])
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail([what])
        return self.advance()

    def number(self) -> float:
        return float(self.expect_kind("number", "number").text)

    def comparator(self) -> str:
        if not self.at(*COMPARATORS):
            self.fail(COMPARATORS)
        return self.advance().text

    # -- statements -------------------------------------------------------

    def session(self) -> Session:
        statements = []
        models = 0
        while self.tok.kind != "eof":
            if not (self.tok.kind == "keyword"):
                self.fail(sorted(KEYWORDS))
            kw = self.tok.text
            if kw == "Model":
                stmt = self.model_decl()
                models += 1
                if models > 1:
                    raise ParseError("a session declares at most one Model", stmt.loc.line, stmt.loc.column)
            elif kw == "Let":
                stmt = self.let_def()
            elif kw == "Output":
                stmt = self.output_decl()
            else:
                stmt = self.check_decl()
            statements.append(stmt)
        return Session(tuple(statements))

    def optional_semicolon(self):
        if self.at(";"):
            self.advance()

    def model_decl(self) -> ModelDecl:
        start = self.advance()
        s = self.expect_kind("string", "string")
        spec = s.text[1:-1]
        kind, bindings = parse_model_spec(spec, s)
        self.optional_semicolon()
        return ModelDecl(spec, kind, bindings, start.loc)

    def let_def(self) -> LetDef:
        start = self.advance()
        name = self.expect_kind("ident", "identifier").text
        params: list[str] = []
        has_parens = False
        if self.at("("):
            has_parens = True
            self.advance()
            if not self.at(")"):
                params.append(self.expect_kind("ident", "identifier").text)
                while self.at(","):
                    self.advance()
                    params.append(self.expect_kind("ident", "identifier").text)
            self.expect(")")
        if len(set(params)) != len(params):
            raise ParseError(f"duplicate parameter in definition of {name!r}", start.line, start.column)
        self.expect("=")
        body = self.formula()
        self.expect(";")
        return LetDef(name, tuple(params), body, has_parens, start.loc)

    def output_decl(self) -> OutputDecl:
        start = self.advance()
        t = self.tok
        if t.kind == "string":
            path = t.text[1:-1]
        elif t.kind == "path":
            path = t.text
        else:
            self.fail(["file name"])
        self.advance()
        self.optional_semicolon()
        return OutputDecl(path, start.loc)

    def check_decl(self) -> CheckDecl:
        start = self.advance()
        color = self.expect_kind("string", "string").text[1:-1]
        formula = self.formula()
        self.optional_semicolon()
        return CheckDecl(color, formula, start.loc)

    # -- formulas ---------------------------------------------------------

    def formula(self):
        left = self.conjunction()
        while self.at("|"):
            t = self.advance()
            left = Binary("|", left, self.conjunction(), t.loc)
        return left

    def conjunction(self):
        left = self.spatial()
        while self.at("&"):
            t = self.advance()
            left = Binary("&", left, self.spatial(), t.loc)
        return left

    def spatial(self):
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("S", "R", "T"):
            t = self.advance()
            left = Binary(t.text, left, self.unary(), t.loc)
        return left

    def unary(self):
        t = self.tok
        if self.at("!") or (t.kind == "op" and t.text in ("N", "I")):
            self.advance()
            return Unary(t.text, self.unary(), t.loc)
        return self.primary()

    def primary(self):
        t = self.tok
        if self.at("("):
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if self.at("["):
            return self.bracket()
        if t.kind == "op":
            if t.text in ("TT", "FF"):
                self.advance()
                return BoolConst(t.text == "TT", t.loc)
            if t.text in ("EDT", "MDDT"):
                return self.distance()
            if t.text == "SCMP":
                return self.scmp()
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.formula())
                    while self.at(","):
                        self.advance()
                        args.append(self.formula())
                self.expect(")")
                return Ref(t.text, tuple(args), t.loc)
            return Ref(t.text, None, t.loc)
        self.fail(["(", "[", "!", "N", "I", "TT", "FF", "EDT", "MDDT", "SCMP", "identifier"])

    def bracket(self):
        start = self.advance()
        name = self.expect_kind("ident", "identifier").text
        if self.at("]"):
            self.advance()
            return PredicateExpr(name, start.loc)
        cmp = self.comparator()
        value = self.number()
        self.expect("]")
        return AssertionExpr(name, cmp, value, start.loc)

    def distance(self):
        start = self.advance()
        self.expect("(")
        operand = self.formula()
        self.expect(",")
        if self.at("[", "("):
            interval = self.interval()
            self.expect(")")
            return DistExpr(start.text, operand, None, None, interval, start.loc)
        cmp = self.comparator()
        value = self.number()
        self.expect(")")
        return DistExpr(start.text, operand, cmp, value, None, start.loc)

    def interval(self) -> IntervalExpr:
        open_tok = self.advance()
        lower = self.number()
        self.expect(",")
        if self.tok.kind == "ident" and self.tok.text == "inf":
            self.advance()
            upper = math.inf
        else:
            upper = self.number()
        if not self.at("]", ")"):
            self.fail(["]", ")"])
        close_tok = self.advance()
        if lower > upper or lower < 0:
            raise ParseError("malformed interval", open_tok.line, open_tok.column)
        return IntervalExpr(lower, upper, open_tok.text == "[", close_tok.text == "]" and not math.isinf(upper))

    def scmp(self):
        start = self.advance()
        self.expect("(")
        attr_a = self.expect_kind("ident", "attribute name").text
        self.expect(",")
        restrict = self.formula()
        self.expect(",")
        radius = self.number()
        self.expect(",")
        cmp = self.comparator()
        threshold = self.number()
        self.expect(",")
        lower = self.number()
        self.expect(",")
        upper = self.number()
        self.expect(",")
        bins_tok = self.tok
        bins = self.number()
        if bins != int(bins) or bins < 1:
            raise ParseError("bin count must be a positive integer", bins_tok.line, bins_tok.column)
        if not lower < upper:
            raise ParseError("SCMP range needs m < M", start.line, start.column)
        if radius < 0:
            raise ParseError("SCMP radius must be non-negative", start.line, start.column)
        self.expect(")")
        self.expect("(")
        attr_b = self.expect_kind("ident", "attribute name").text
        self.expect(",")
        target = self.formula()
        self.expect(")")
        return ScmpExpr(attr_a, restrict, radius, cmp, threshold, lower, upper, int(bins), attr_b, target, start.loc)


def parse_model_spec(spec: str, tok: Token | None = None) -> tuple[str, tuple[tuple[str, str], ...]]:
    """Split ``"med:a=f1.nii, b=f2.nii"`` into its kind and attribute bindings."""
    line, col = (tok.line, tok.column) if tok else (1, 1)
    kind, sep, rest = spec.partition(":")
    if not sep or not kind.strip():
        raise ParseError(f"model declaration {spec!r} lacks a 'kind:' prefix", line, col)
    bindings = []
    for part in rest.split(","):
        name, eq, path = part.strip().partition("=")
        name, path = name.strip(), path.strip()
        if not eq or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or not path:
            raise ParseError(f"bad model binding {part.strip()!r}", line, col)
        bindings.append((name, path))
    names = [n for n, _ in bindings]
    if len(set(names)) != len(names):
        raise ParseError("duplicate attribute name in model declaration", line, col)
    return kind.strip(), tuple(bindings)


def parse(text: str) -> Session:
    return Parser(text).session()


def parse_formula(text: str):
    p = Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return f


__all__ = ["parse", "parse_formula", "tokenize", "Token", "format_expr"]
