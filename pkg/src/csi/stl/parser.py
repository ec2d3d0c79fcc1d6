"""Recursive-descent parser for the STL specification language.

Binding strength, tightest first: comparison, ``not``, ``and``, ``or``,
``->`` (right associative), temporal operators.  A unary temporal operator
takes everything to its right as its operand, so ``always p -> q`` reads as
``always (p -> q)``.  ``<`` and ``<=`` are normalised to ``>``/``>=`` atoms
by swapping operands.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .formula import (
    TRUE,
    Always,
    And,
    Atom,
    BinOp,
    Const,
    Eventually,
    Formula,
    Historically,
    Implies,
    Interval,
    Neg,
    Not,
    Once,
    Or,
    Since,
    Term,
    Until,
    Var,
    difference,
)


class ParseError(ValueError):
    """Base class for specification-text errors."""


class StlSyntaxError(ParseError):
    def __init__(self, message: str, line: int, column: int, expected=frozenset()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = message
        if self.expected:
            detail += "; expected one of: " + ", ".join(sorted(self.expected))
        super().__init__(f"line {line}, column {column}: {detail}")


class UnknownOperator(ParseError):
    def __init__(self, operator: str, line: int, column: int):
        self.operator = operator
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: unknown operator {operator!r}")


UNARY_TEMPORAL = {
    "always": Always,
    "eventually": Eventually,
    "once": Once,
    "historically": Historically,
}
BINARY_TEMPORAL = {"until": Until, "since": Since}
KEYWORDS = {"true", "not", "and", "or", "inf"} | set(UNARY_TEMPORAL) | set(BINARY_TEMPORAL)

# Operators from other STL dialects that this grammar deliberately lacks.
FOREIGN_OPERATORS = {"==", "!=", "&&", "||", "!", "=", "=>", "<->", "<=>", "^", "%", "&", "|", "~"}
FOREIGN_KEYWORDS = {"next", "prev", "rise", "fall", "abs", "xor", "iff", "implies", "false"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<foreign><->|<=>|==|!=|&&|\|\||=>|[!=^%&|~])
  | (?P<op>->|>=|<=|[()\[\],+\-*/<>])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "kw", "op", "eof"
    text: str
    pos: int
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise StlSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "foreign":
            raise UnknownOperator(lexeme, line, column)
        if kind != "ws":
            if kind == "ident" and lexeme in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, lexeme, pos, line, column))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rindex("\n") + 1
        pos = match.end()
    tokens.append(Token("eof", "", pos, line, pos - line_start + 1))
    return tokens


class _Backtrack(Exception):
    pass


def _describe(kind: str, text: str | None) -> str:
    if text is not None:
        return repr(text)
    return {"num": "number", "ident": "identifier", "eof": "end of input"}[kind]


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.far_index = 0
        self.far_expected: set[str] = set()

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "kw")

    def _note(self, what: str):
        if self.i > self.far_index:
            self.far_index, self.far_expected = self.i, set()
        if self.i == self.far_index:
            self.far_expected.add(what)

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        self._note(_describe("op", text))
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            raise _Backtrack()
        return tok

    def fail(self):
        raise _Backtrack()

    # -- formulas -----------------------------------------------------------

    def parse(self) -> Formula:
        try:
            phi = self.formula()
            if self.tok.kind != "eof":
                self._note("end of input")
                raise _Backtrack()
        except _Backtrack:
            tok = self.tokens[self.far_index]
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise StlSyntaxError(f"unexpected {found}", tok.line, tok.column, self.far_expected) from None
        return phi

    def formula(self) -> Formula:
        left = self.implication()
        while self.tok.kind == "kw" and self.tok.text in BINARY_TEMPORAL:
            cls = BINARY_TEMPORAL[self.tok.text]
            self.i += 1
            interval = self.window()
            right = self.implication()
            left = cls(left, right, interval)
        self._note("'until'")
        self._note("'since'")
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept("or"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.negation()
        while self.accept("and"):
            left = And(left, self.negation())
        return left

    def negation(self) -> Formula:
        if self.accept("not"):
            return Not(self.negation())
        tok = self.tok
        if tok.kind == "kw" and tok.text in UNARY_TEMPORAL:
            self.i += 1
            interval = self.window()
            return UNARY_TEMPORAL[tok.text](self.formula(), interval)
        for kw in UNARY_TEMPORAL:
            self._note(repr(kw))
        return self.primary()

    def primary(self) -> Formula:
        if self.accept("true"):
            return TRUE
        tok = self.tok
        if tok.kind == "ident" and tok.text in FOREIGN_KEYWORDS:
            raise UnknownOperator(tok.text, tok.line, tok.column)
        if tok.kind == "ident" and self.tokens[self.i + 1].text == "[":
            raise UnknownOperator(tok.text, tok.line, tok.column)
        if self.at("("):
            start = self.i
            try:
                return self.comparison()
            except _Backtrack:
                self.i = start
            self.expect("(")
            phi = self.formula()
            self.expect(")")
            return phi
        return self.comparison()

    def comparison(self) -> Formula:
        lhs = self.term()
        tok = self.tok
        for op in (">=", "<=", ">", "<"):
            if self.accept(op):
                break
        else:
            self.fail()
        rhs = self.term()
        op = tok.text
        if op in (">", ">="):
            return Atom(difference(lhs, rhs), op == ">")
        return Atom(difference(rhs, lhs), op == "<")

    def window(self) -> Interval:
        if not self.at("["):
            self._note("'['")
            return Interval()
        self.expect("[")
        lo = self.number()
        self.expect(",")
        if self.accept("inf"):
            hi = math.inf
        else:
            hi = self.number()
        close = self.tok
        self.expect("]")
        try:
            return Interval.closed(lo, hi)
        except ValueError as exc:
            raise StlSyntaxError(str(exc), close.line, close.column) from None

    def number(self) -> float:
        tok = self.tok
        if tok.kind != "num":
            self._note("number")
            self.fail()
        self.i += 1
        return float(tok.text)

    # -- terms --------------------------------------------------------------

    def term(self) -> Term:
        left = self.product()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.product())
        self._note("'+'")
        self._note("'-'")
        return left

    def product(self) -> Term:
        left = self.unary()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.unary())
        self._note("'*'")
        self._note("'/'")
        return left

    def unary(self) -> Term:
        if self.accept("-"):
            operand = self.unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Neg(operand)
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text)
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        self._note("identifier")
        self._note("number")
        self.fail()


def parse(text: str) -> Formula:
    """Parse specification text into a formula tree."""
    return Parser(text).parse()
