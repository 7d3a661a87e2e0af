"""ASP with weak constraints.

A weak constraint ":~ Body. [w]" charges penalty w to stable models whose
body holds.  In weighted-rule form it becomes the soft rule
-w: bot <- not Body, which an interpretation satisfies exactly when the
body holds, collecting -w; optimal stable models are then the ones with the
largest normalized weight.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import (
    HARD,
    AtomF,
    Program,
    Rule,
    Not,
    Signature,
    WeightedRule,
    conj,
    TRUE,
    soft,
)
from ..errors import NoStableModel, ValidationError
from ..ground import ground_program
from ..infer import distribution
from ..stable import enumerate_stable_models, satisfies_rule
from .asp import AspProgram, asp_to_lpmln


@dataclass(frozen=True)
class WeakConstraint:
    body: Rule  # head must be empty; only the body parts are meaningful
    weight: int

    def __post_init__(self):
        if self.body.head:
            raise ValidationError("weak constraint carries a body only")
        if not (isinstance(self.weight, int) and self.weight > 0):
            raise ValidationError("weak-constraint weight must be a positive integer")


@dataclass(frozen=True)
class WeakProgram:
    signature: Signature
    rules: tuple = ()  # plain ASP rules
    weak: tuple = ()  # of WeakConstraint

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "weak", tuple(self.weak))


def _body_formula(rule: Rule):
    parts = [AtomF(a) for a in rule.body_pos]
    if rule.body_neg != TRUE:
        parts.append(rule.body_neg)
    return conj(parts)


def weak_to_lpmln(w: WeakProgram) -> Program:
    rules = [WeightedRule(HARD, r) for r in w.rules]
    for wc in w.weak:
        rules.append(
            WeightedRule(
                soft(-float(wc.weight)),
                Rule(
                    head=(),
                    body_neg=Not(_body_formula(wc.body)),
                    builtins=wc.body.builtins,
                ),
            )
        )
    return Program(signature=w.signature, rules=tuple(rules))


def optimal_stable_models(w: WeakProgram, **kwargs) -> list:
    """Stable models with the highest normalized weight in the weighted-rule
    embedding; ties all returned, canonical order."""
    gp = ground_program(weak_to_lpmln(w))
    dist = distribution(gp, **kwargs)
    if dist.max_hard_tier < len(gp.hard_rules):
        raise NoStableModel("the program has no stable model")
    best = max(e.weight for e in dist.entries)
    return [e.interp for e in dist.entries if e.weight == best]


def penalty_optimal(w: WeakProgram, **kwargs) -> list:
    """Independent route: enumerate stable models of the plain ASP part and
    keep the minimizers of the summed weak-constraint penalties."""
    models = enumerate_stable_models(
        ground_program(asp_to_lpmln(AspProgram(w.signature, w.rules))), **kwargs
    )
    if not models:
        raise NoStableModel("the program has no stable model")
    # ground the weak-constraint bodies; the integer weight rides along as a
    # soft weight purely as a carrier
    carrier = Program(
        signature=w.signature,
        rules=tuple(WeightedRule(soft(float(wc.weight)), wc.body) for wc in w.weak),
    )
    ground_weak = ground_program(carrier).rules
    penalties = []
    for interp in models:
        pen = sum(
            int(wr.weight.soft)
            for wr in ground_weak
            if not satisfies_rule(interp, wr.rule)
        )
        penalties.append(pen)
    best = min(penalties)
    return [m for m, p in zip(models, penalties) if p == best]
