"""Translations between input languages and weighted rule programs, plus
the independent direct-semantics evaluators used to cross-check them."""

from .asp import AspProgram, asp_stable_models, asp_to_lpmln
from .mln import (
    CHOICE_WEIGHT,
    completion,
    ground_mln,
    loop_augmented_mln,
    mln_to_lpmln,
)
from .mvpp import Declaration, MvppProgram, mvpp_direct_distribution, mvpp_to_lpmln
from .plog import (
    PlogProgram,
    PrAtom,
    Selection,
    fw_formula,
    plog_measure,
    plog_prob,
    plog_tau,
    plog_to_mvpp,
    plog_validate,
    possible_worlds,
)
from .problog import ProbLogProgram, problog_distribution, problog_to_lpmln
from .weak import (
    WeakConstraint,
    WeakProgram,
    optimal_stable_models,
    penalty_optimal,
    weak_to_lpmln,
)

__all__ = [
    "AspProgram",
    "asp_stable_models",
    "asp_to_lpmln",
    "CHOICE_WEIGHT",
    "completion",
    "ground_mln",
    "loop_augmented_mln",
    "mln_to_lpmln",
    "Declaration",
    "MvppProgram",
    "mvpp_direct_distribution",
    "mvpp_to_lpmln",
    "PlogProgram",
    "PrAtom",
    "Selection",
    "fw_formula",
    "plog_measure",
    "plog_prob",
    "plog_tau",
    "plog_to_mvpp",
    "plog_validate",
    "possible_worlds",
    "ProbLogProgram",
    "problog_distribution",
    "problog_to_lpmln",
    "WeakConstraint",
    "WeakProgram",
    "optimal_stable_models",
    "penalty_optimal",
    "weak_to_lpmln",
]
