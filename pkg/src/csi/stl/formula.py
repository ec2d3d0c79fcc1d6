"""Formula and term trees for STL with past operators.

The tree keeps the surface operators (``And``, ``Always``, non-strict atoms,
...) so that printing stays readable; :func:`desugar` rewrites any tree into
the core grammar ``true | f > 0 | not | or | until | since``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union


# --------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Term"
    right: "Term"

    def __post_init__(self):
        if self.op not in ("+", "-", "*", "/"):
            raise ValueError(f"unsupported arithmetic operator {self.op!r}")


@dataclass(frozen=True)
class Neg:
    operand: "Term"


Term = Union[Var, Const, BinOp, Neg]


def term_vars(term: Term) -> frozenset[str]:
    """Return the set of variable names referenced by ``term``."""
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, Const):
        return frozenset()
    if isinstance(term, Neg):
        return term_vars(term.operand)
    return term_vars(term.left) | term_vars(term.right)


def difference(lhs: Term, rhs: Term) -> Term:
    """Build ``lhs - rhs`` while dropping a literal zero on either side."""
    if isinstance(rhs, Const) and rhs.value == 0:
        return lhs
    if isinstance(lhs, Const) and lhs.value == 0:
        return Neg(rhs)
    return BinOp("-", lhs, rhs)


# --------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class Interval:
    lo: float = 0.0
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = False

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval bounds must be numbers")
        if self.lo < 0 or math.isinf(self.lo):
            raise ValueError(f"interval lower bound must be finite and >= 0, got {self.lo}")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if math.isinf(self.hi) and self.hi_closed:
            raise ValueError("an unbounded interval cannot be closed on the right")

    @classmethod
    def closed(cls, lo: float, hi: float) -> "Interval":
        return cls(float(lo), float(hi), True, not math.isinf(hi))

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.hi)

    def is_default(self) -> bool:
        return self.lo == 0 and self.lo_closed and self.unbounded


UNBOUNDED = Interval()


# --------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class TrueF:
    pass


TRUE = TrueF()


@dataclass(frozen=True)
class Atom:
    """``term > 0`` when strict, ``term >= 0`` otherwise."""

    term: Term
    strict: bool = True


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"
    interval: Interval = field(default=UNBOUNDED)


@dataclass(frozen=True)
class Since:
    left: "Formula"
    right: "Formula"
    interval: Interval = field(default=UNBOUNDED)


@dataclass(frozen=True)
class Eventually:
    arg: "Formula"
    interval: Interval = field(default=UNBOUNDED)


@dataclass(frozen=True)
class Always:
    arg: "Formula"
    interval: Interval = field(default=UNBOUNDED)


@dataclass(frozen=True)
class Once:
    arg: "Formula"
    interval: Interval = field(default=UNBOUNDED)


@dataclass(frozen=True)
class Historically:
    arg: "Formula"
    interval: Interval = field(default=UNBOUNDED)


Formula = Union[
    TrueF, Atom, Not, Or, And, Implies, Until, Since, Eventually, Always, Once, Historically
]

UNARY_TEMPORAL = (Eventually, Always, Once, Historically)
BINARY_BOOLEAN = (Or, And, Implies)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (TrueF, Atom)):
        return ()
    if isinstance(phi, (Not,) + UNARY_TEMPORAL):
        return (phi.arg,)
    return (phi.left, phi.right)


def formula_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Atom):
        return term_vars(phi.term)
    out: frozenset[str] = frozenset()
    for child in children(phi):
        out |= formula_vars(child)
    return out


def conjunction(*phis: Formula) -> Formula:
    if not phis:
        return TRUE
    out = phis[0]
    for phi in phis[1:]:
        out = And(out, phi)
    return out


def desugar(phi: Formula) -> Formula:
    """Rewrite ``phi`` into the core grammar without changing its robustness.

    A non-strict atom ``e >= 0`` becomes ``not (-e > 0)``, which keeps the
    value ``e`` whenever it is measured and maps an exact zero to ``+inf``
    (rather than ``-inf``) when the atom is evaluated against fixed variables.
    """
    if isinstance(phi, TrueF):
        return phi
    if isinstance(phi, Atom):
        return phi if phi.strict else Not(Atom(Neg(phi.term), True))
    if isinstance(phi, Not):
        return Not(desugar(phi.arg))
    if isinstance(phi, Or):
        return Or(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, And):
        return Not(Or(Not(desugar(phi.left)), Not(desugar(phi.right))))
    if isinstance(phi, Implies):
        return Or(Not(desugar(phi.left)), desugar(phi.right))
    if isinstance(phi, Until):
        return Until(desugar(phi.left), desugar(phi.right), phi.interval)
    if isinstance(phi, Since):
        return Since(desugar(phi.left), desugar(phi.right), phi.interval)
    if isinstance(phi, Eventually):
        return Until(TRUE, desugar(phi.arg), phi.interval)
    if isinstance(phi, Always):
        return Not(Until(TRUE, Not(desugar(phi.arg)), phi.interval))
    if isinstance(phi, Once):
        return Since(TRUE, desugar(phi.arg), phi.interval)
    if isinstance(phi, Historically):
        return Not(Since(TRUE, Not(desugar(phi.arg)), phi.interval))
    raise TypeError(f"not a formula: {phi!r}")


# --------------------------------------------------------------------------
# Printing


def format_number(value: float) -> str:
    if math.isinf(value):
        return "inf"
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def format_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Const):
        text = format_number(abs(term.value))
        return f"(-{text})" if math.copysign(1.0, term.value) < 0 else text
    if isinstance(term, Neg):
        return f"(-{format_term(term.operand)})"
    return f"({format_term(term.left)} {term.op} {format_term(term.right)})"


def format_interval(interval: Interval) -> str:
    if interval.is_default():
        return ""
    if not interval.lo_closed or (not interval.unbounded and not interval.hi_closed):
        raise ValueError(f"open interval bounds have no concrete syntax: {interval}")
    return f"[{format_number(interval.lo)},{format_number(interval.hi)}]"


_KEYWORDS = {
    Eventually: "eventually",
    Always: "always",
    Once: "once",
    Historically: "historically",
    Until: "until",
    Since: "since",
    Or: "or",
    And: "and",
    Implies: "->",
}


def format_formula(phi: Formula) -> str:
    """Print ``phi`` fully parenthesized; ``parse(format_formula(phi)) == phi``."""
    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, Atom):
        return f"{format_term(phi.term)} {'>' if phi.strict else '>='} 0"
    if isinstance(phi, Not):
        return f"not ({format_formula(phi.arg)})"
    if isinstance(phi, UNARY_TEMPORAL):
        return f"{_KEYWORDS[type(phi)]}{format_interval(phi.interval)} ({format_formula(phi.arg)})"
    if isinstance(phi, (Until, Since)):
        return (
            f"({format_formula(phi.left)}) {_KEYWORDS[type(phi)]}{format_interval(phi.interval)} "
            f"({format_formula(phi.right)})"
        )
    return f"({format_formula(phi.left)}) {_KEYWORDS[type(phi)]} ({format_formula(phi.right)})"
