"""Exact inference for logic programs with weighted rules under the stable
model semantics, with translations to and from answer set programs, weak
constraints, Markov logic networks, ProbLog, multi-valued probabilistic
programs, and a simple fragment of P-log."""

from . import errors
from .core import (
    And,
    Atom,
    AtomF,
    Builtin,
    FALSE,
    Formula,
    HARD,
    Implies,
    ModExpr,
    Not,
    Or,
    Program,
    Rule,
    Signature,
    SymbolicWeight,
    TRUE,
    Var,
    Weight,
    WeightedRule,
    choice_rule,
    conj,
    disj,
    satisfies,
    soft,
)
from .ground import GroundProgram, ground_program
from .infer import (
    Distribution,
    MlnProgram,
    cond_prob,
    distribution,
    mln_distribution,
    prob_query,
    soft_only_distribution,
)
from .stable import (
    completion_formulas,
    enumerate_stable_models,
    is_stable_model,
    is_tight,
    loop_formula,
    loops,
    reduct,
)
from .textio import parse, parse_path, parse_query, print_program, program_to_json

__version__ = "0.1.0"

__all__ = [
    "And", "Atom", "AtomF", "Builtin", "Distribution", "FALSE", "Formula",
    "GroundProgram", "HARD", "Implies", "MlnProgram", "ModExpr", "Not", "Or",
    "Program", "Rule", "Signature", "SymbolicWeight", "TRUE", "Var", "Weight",
    "WeightedRule", "choice_rule", "completion_formulas", "cond_prob", "conj",
    "disj", "distribution", "enumerate_stable_models", "errors",
    "ground_program", "is_stable_model", "is_tight", "loop_formula", "loops",
    "mln_distribution", "parse", "parse_path", "parse_query", "print_program",
    "prob_query", "program_to_json", "reduct", "satisfies", "soft",
    "soft_only_distribution",
]
