"""ProbLog programs: independent probabilistic facts plus normal rules.

The weighted-rule image gives each fact a ln(pr) clause and a ln(1-pr)
constraint (degenerating to hard rules at pr 0 or 1).  The direct oracle
evaluates the distribution semantics instead: one total choice at a time,
requiring a unique stable model per choice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..core import (
    HARD,
    Atom,
    Program,
    Rule,
    Signature,
    SymbolicWeight,
    WeightedRule,
    soft,
)
from ..errors import NotWellDefined, ValidationError
from ..ground import ground_program
from ..infer import Distribution, Entry
from ..stable import enumerate_stable_models


@dataclass(frozen=True)
class ProbLogProgram:
    signature: Signature
    prob_facts: tuple = ()  # of (Atom, probability)
    rules: tuple = ()  # normal rules, single-atom heads

    def __post_init__(self):
        object.__setattr__(self, "prob_facts", tuple(self.prob_facts))
        object.__setattr__(self, "rules", tuple(self.rules))
        prob_atoms = set()
        for atom, pr in self.prob_facts:
            if not (0.0 <= pr <= 1.0):
                raise ValidationError(f"probability {pr} for {atom} not in [0, 1]")
            if atom in prob_atoms:
                raise ValidationError(f"duplicate probabilistic fact {atom}")
            prob_atoms.add(atom)
        for rule in self.rules:
            if len(rule.head) != 1:
                raise ValidationError("ProbLog rules have exactly one head atom")
            if rule.head[0] in prob_atoms:
                raise ValidationError(
                    f"probabilistic atom {rule.head[0]} may not head a rule"
                )


def problog_to_lpmln(p: ProbLogProgram) -> Program:
    rules = []
    for atom, pr in p.prob_facts:
        fact = Rule(head=(atom,))
        veto = Rule(head=(), body_pos=(atom,))
        if pr == 1.0:
            rules.append(WeightedRule(HARD, fact))
        elif pr == 0.0:
            rules.append(WeightedRule(HARD, veto))
        else:
            rules.append(WeightedRule(soft(math.log(pr)), fact))
            rules.append(WeightedRule(soft(math.log(1.0 - pr)), veto))
    rules.extend(WeightedRule(HARD, r) for r in p.rules)
    return Program(signature=p.signature, rules=tuple(rules))


def problog_distribution(p: ProbLogProgram, **kwargs) -> Distribution:
    """Direct semantics: P(I) is the probability of I's total choice when I
    is the unique stable model of rules + that choice, else 0."""
    base = ground_program(
        Program(p.signature, tuple(WeightedRule(HARD, r) for r in p.rules))
    ).unweighted
    choosable = [(a, pr) for a, pr in p.prob_facts if 0.0 < pr < 1.0]
    fixed_in = [a for a, pr in p.prob_facts if pr == 1.0]
    fixed_out = [a for a, pr in p.prob_facts if pr == 0.0]
    entries = []
    for picks in itertools.product((True, False), repeat=len(choosable)):
        chosen = [a for (a, _pr), take in zip(choosable, picks) if take] + fixed_in
        excluded = [
            a for (a, _pr), take in zip(choosable, picks) if not take
        ] + fixed_out
        rules = (
            list(base)
            + [Rule(head=(a,)) for a in chosen]
            + [Rule(head=(), body_pos=(a,)) for a in excluded]
        )
        models = enumerate_stable_models(rules, **kwargs)
        if len(models) != 1:
            raise NotWellDefined(frozenset(chosen), len(models))
        pr_tc = 1.0
        for (a, pr), take in zip(choosable, picks):
            pr_tc *= pr if take else 1.0 - pr
        entries.append(
            Entry(models[0], SymbolicWeight(hard=0, soft=math.log(pr_tc)), pr_tc)
        )
    atoms = sorted({a for e in entries for a in e.interp}, key=str)
    return Distribution(
        atoms=tuple(atoms),
        entries=tuple(entries),
        max_hard_tier=0,
        total_soft_mass=0.0,
        signature=p.signature,
    )
