"""Tabled constraint logic programming with pluggable solvers.

Resolution with tabling where repeated calls are detected by constraint
entailment rather than syntactic equality. Constraint solvers sit behind a
fixed interface (projection, call entailment, answer comparison, answer
application); rational linear arithmetic, integer difference constraints,
and finite lattices ship built in, along with a bottom-up fixpoint oracle
that cross-checks the engine's answers.
"""

from .engine import Engine, Mode, RunReport, Strategy
from .errors import BudgetExhausted, EngineError, LoadError, TclpError
from .fixpoint import bottom_up_fixpoint
from .program import parse_program, parse_query, transform
from .solvers import make_solver

__version__ = "0.1.0"

__all__ = [
    "Engine", "Mode", "Strategy", "RunReport",
    "parse_program", "parse_query", "transform",
    "bottom_up_fixpoint", "make_solver",
    "TclpError", "LoadError", "EngineError", "BudgetExhausted",
    "__version__",
]
