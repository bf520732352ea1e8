"""Exact belief intervals over weighted argument graphs.

Weighted directed edges between abstract arguments (supports positive,
attacks negative) plus linear constraints over argument probabilities define
a family of admissible probability functions; the engine computes exact
rational lower/upper beliefs per argument, a presumption-of-innocence
verdict for legal cases, rule-based explanations, and an interactive
what-if workflow over retractable assumptions.
"""

from .constraints import (
    ConstraintSet,
    LinearConstraint,
    Provenance,
    canonicalize,
    gen_attack,
    gen_collective_support,
    gen_support,
)
from .dsl import ConstraintSyntaxError, parse_constraint, print_constraint
from .graph import ArgGraph, Edge, GraphError
from .lp import LpOutcome, LpProblem, feasible, optimize
from .scheme import (
    CaseUnsatisfiableError,
    CsGroup,
    LegalCase,
    SchemeError,
    Verdict,
    assume,
    beliefs,
    build_case,
    build_extended_template,
    check_consequences,
    retract,
)
from .solver import (
    BeliefBounds,
    SolverError,
    UnsatisfiableError,
    WorldDistribution,
    entail,
    entail_all,
    oracle_entail,
    oracle_satisfiable,
    realize,
    satisfiable,
)

__version__ = "0.1.0"

__all__ = [
    "ArgGraph",
    "BeliefBounds",
    "CaseUnsatisfiableError",
    "ConstraintSet",
    "ConstraintSyntaxError",
    "CsGroup",
    "Edge",
    "GraphError",
    "LegalCase",
    "LinearConstraint",
    "LpOutcome",
    "LpProblem",
    "Provenance",
    "SchemeError",
    "SolverError",
    "UnsatisfiableError",
    "Verdict",
    "WorldDistribution",
    "assume",
    "beliefs",
    "build_case",
    "build_extended_template",
    "canonicalize",
    "check_consequences",
    "entail",
    "entail_all",
    "feasible",
    "gen_attack",
    "gen_collective_support",
    "gen_support",
    "optimize",
    "oracle_entail",
    "oracle_satisfiable",
    "parse_constraint",
    "print_constraint",
    "realize",
    "retract",
    "satisfiable",
]
