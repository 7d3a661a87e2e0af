"""Markov logic networks and the two bridges to weighted rule programs:
the embedding of an MLN via constraint rules plus choice rules, and the
reverse direction via completion (tight programs) or loop formulas
(unrestricted)."""

from __future__ import annotations

import warnings

from ..core import (
    HARD,
    Not,
    Program,
    Rule,
    WeightedRule,
    choice_rule,
    soft,
)
from ..errors import NoHardConsistentModel, NotTight, UniverseExplosion
from ..ground import GroundProgram, ground_program
from ..infer import (
    MlnProgram,
    formula_variables,
    ground_mln,
    signature_atoms,
    soft_only_distribution,
)
from ..stable import (
    completion_formulas,
    is_tight,
    loop_formula,
    loops,
    positive_dependency_graph,
)

# weight attached to the choice rules of the embedding; any value yields the
# same distribution since a choice rule is satisfied by every interpretation
CHOICE_WEIGHT = soft(0.0)


def mln_to_lpmln(mln: MlnProgram) -> Program:
    """w: F becomes w: bot <- not F; every ground atom additionally gets a
    weighted choice rule exempting it from minimization."""
    mln = ground_mln(mln)
    rules = [
        WeightedRule(w, Rule(head=(), body_neg=Not(f))) for w, f in mln.formulas
    ]
    for atom in signature_atoms(mln.signature):
        rules.append(WeightedRule(CHOICE_WEIGHT, choice_rule(atom)))
    return Program(signature=mln.signature, rules=tuple(rules))


def _as_ground(program) -> GroundProgram:
    if isinstance(program, GroundProgram):
        return program
    return ground_program(program)


def _rule_formulas(gp: GroundProgram):
    return [(wr.weight, wr.rule.as_formula()) for wr in gp.rules]


def completion(program, *, force: bool = False) -> MlnProgram:
    """The program's rules as weighted formulas plus one hard support
    formula per ground atom.  Exact only for tight programs whose hard part
    admits a stable candidate, hence the tightness error and the warning."""
    gp = _as_ground(program)
    if not is_tight(gp.unweighted):
        if not force:
            raise NotTight("positive dependency graph has a cycle")
    else:
        try:
            soft_only_distribution(gp)
        except NoHardConsistentModel:
            warnings.warn(
                "no stable candidate satisfies every hard rule; the completion "
                "may not reproduce the source distribution",
                stacklevel=2,
            )
        except UniverseExplosion:
            pass  # precondition too large to check; skip the warning
    atoms = signature_atoms(gp.signature)
    hard = [(HARD, f) for f in completion_formulas(gp.unweighted, atoms)]
    return MlnProgram(
        signature=gp.signature, formulas=tuple(_rule_formulas(gp) + hard)
    )


def loop_augmented_mln(program) -> MlnProgram:
    """The program's rules as weighted formulas plus a hard loop formula for
    every loop; valid without the tightness restriction."""
    gp = _as_ground(program)
    rules = gp.unweighted
    all_loops = list(loops(rules))
    covered = set(positive_dependency_graph(rules).nodes)
    for atom in signature_atoms(gp.signature):
        # atoms absent from every rule still need their (unsupported)
        # singleton formula, or they would float free on the MLN side
        if atom not in covered:
            all_loops.append(frozenset((atom,)))
    hard = [(HARD, loop_formula(rules, lp)) for lp in all_loops]
    return MlnProgram(
        signature=gp.signature, formulas=tuple(_rule_formulas(gp) + hard)
    )
