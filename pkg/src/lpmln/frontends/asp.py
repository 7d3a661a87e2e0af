"""Plain answer set programs, embedded by lifting every rule to a hard
weighted rule.  Stable models of the original program reappear as the
maximum-tier stable-model candidates, all with equal probability."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import HARD, Program, Rule, Signature, WeightedRule
from ..ground import ground_program
from ..stable import enumerate_stable_models


@dataclass(frozen=True)
class AspProgram:
    signature: Signature
    rules: tuple = ()  # of Rule, possibly non-ground

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))


def asp_to_lpmln(asp: AspProgram) -> Program:
    """Attach the hard weight to every rule."""
    return Program(
        signature=asp.signature,
        rules=tuple(WeightedRule(HARD, r) for r in asp.rules),
    )


def asp_stable_models(asp: AspProgram, **kwargs) -> list:
    """Deterministic stable models, the reference point for the embedding."""
    gp = ground_program(asp_to_lpmln(asp))
    return enumerate_stable_models(gp, **kwargs)
