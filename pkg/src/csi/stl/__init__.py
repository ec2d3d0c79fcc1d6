"""STL specifications: parsing, traces, and robustness monitors."""

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
    TrueF,
    Until,
    Var,
    conjunction,
    desugar,
    format_formula,
    format_term,
    formula_vars,
    term_vars,
)
from .parser import ParseError, StlSyntaxError, UnknownOperator, parse
from .robustness import (
    IaSpec,
    InconsistentPair,
    IndexOutOfRange,
    MonitorError,
    OverlappingSets,
    TermEvaluationError,
    UnknownVariable,
    Verdict,
    WindowError,
    classify,
    eval_term,
    input_vacuity,
    output_robustness,
    relative_robustness,
    relative_signal,
    robustness,
    robustness_signal,
)
from .trace import Trace, TraceFormatError

__all__ = [name for name in dir() if not name.startswith("_")]
