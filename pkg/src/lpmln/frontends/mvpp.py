"""Multi-valued probabilistic programs: per-constant probability
declarations plus rules, read as shorthand for a weighted rule program with
uniqueness and existence constraints, alongside the direct product-measure
oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..core import (
    HARD,
    Atom,
    AtomF,
    Not,
    Program,
    Rule,
    Signature,
    SymbolicWeight,
    WeightedRule,
    conj,
    soft,
)
from ..errors import EmptySmDoublePrime, ValidationError, ZeroProbabilityDeclared
from ..ground import ground_program
from ..infer import Distribution, Entry
from ..stable import enumerate_stable_models

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Declaration:
    """One probabilistic constant: p1: c=v1 | ... | pn: c=vn."""

    symbol: str
    args: tuple
    items: tuple  # of (probability, value), covering Dom(c) in order

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "items", tuple(self.items))
        values = [v for _p, v in self.items]
        if len(set(values)) != len(values):
            raise ValidationError(f"duplicate values in declaration of {self.key}")
        for p, v in self.items:
            if not (0.0 <= p <= 1.0):
                raise ValidationError(
                    f"probability {p} for {self.key}={v} not in [0, 1]"
                )
        total = sum(p for p, _v in self.items)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValidationError(
                f"probabilities for {self.key} sum to {total}, expected 1"
            )

    @property
    def key(self):
        return (self.symbol, self.args)

    def atom(self, value) -> Atom:
        return Atom(self.symbol, self.args, value)


@dataclass(frozen=True)
class MvppProgram:
    signature: Signature
    declarations: tuple = ()  # of Declaration, ground
    rules: tuple = ()  # hard rules, possibly non-ground

    def __post_init__(self):
        object.__setattr__(self, "declarations", tuple(self.declarations))
        object.__setattr__(self, "rules", tuple(self.rules))
        keys = [d.key for d in self.declarations]
        if len(set(keys)) != len(keys):
            raise ValidationError("a constant is declared probabilistic twice")
        prob_symbols = {d.symbol for d in self.declarations}
        for rule in self.rules:
            for atom in rule.head:
                if atom.symbol in prob_symbols:
                    raise ValidationError(
                        f"probabilistic constant {atom.symbol} may not head a rule"
                    )


def _mv_keys(sig: Signature):
    """Ground keys of all multi-valued constants, canonical order."""
    for symbol, args in sig.ground_keys():
        if sig.value_domain(symbol) is not None:
            yield symbol, args


def mvpp_to_lpmln(m: MvppProgram) -> Program:
    """T(Pi): declaration clauses, hard rules, uniqueness-of-value
    constraints for every constant, existence for probabilistic ones."""
    rules = []
    for decl in m.declarations:
        for p, v in decl.items:
            fact = Rule(head=(decl.atom(v),))
            if p == 1.0:
                rules.append(WeightedRule(HARD, fact))
            elif p == 0.0:
                rules.append(WeightedRule(HARD, Rule(body_pos=(decl.atom(v),))))
            else:
                rules.append(WeightedRule(soft(math.log(p)), fact))
    rules.extend(WeightedRule(HARD, r) for r in m.rules)
    sig = m.signature
    for symbol, args in _mv_keys(sig):
        domain = sig.value_domain(symbol)
        for v1, v2 in itertools.combinations(domain, 2):
            rules.append(
                WeightedRule(
                    HARD,
                    Rule(body_pos=(Atom(symbol, args, v1), Atom(symbol, args, v2))),
                )
            )
    for decl in m.declarations:
        domain = sig.value_domain(decl.symbol)
        rules.append(
            WeightedRule(
                HARD,
                Rule(body_neg=conj([Not(AtomF(decl.atom(v))) for v in domain])),
            )
        )
    return Program(signature=sig, rules=tuple(rules))


def _is_consistent(interp, sig: Signature) -> bool:
    """At most one value per multi-valued constant."""
    seen = set()
    for atom in interp:
        if atom.value is None:
            continue
        if atom.key in seen:
            return False
        seen.add(atom.key)
    return True


def mvpp_direct_distribution(m: MvppProgram, **kwargs) -> Distribution:
    """P'': pick one value per probabilistic constant, take the consistent
    stable models of rules + that choice, weight by the product of the
    chosen declaration probabilities."""
    for decl in m.declarations:
        for p, v in decl.items:
            if p == 0.0:
                raise ZeroProbabilityDeclared(
                    f"{decl.key}={v} is declared with probability 0"
                )
    base = ground_program(
        Program(m.signature, tuple(WeightedRule(HARD, r) for r in m.rules))
    ).unweighted
    entries = []
    total = 0.0
    for combo in itertools.product(*[d.items for d in m.declarations]):
        pr = math.prod(p for p, _v in combo)
        facts = [
            Rule(head=(decl.atom(v),))
            for decl, (_p, v) in zip(m.declarations, combo)
        ]
        for interp in enumerate_stable_models(list(base) + facts, **kwargs):
            if _is_consistent(interp, m.signature):
                entries.append((interp, pr))
                total += pr
    if not entries:
        raise EmptySmDoublePrime(
            "no total choice admits a consistent stable model"
        )
    atoms = sorted({a for i, _p in entries for a in i}, key=str)
    return Distribution(
        atoms=tuple(atoms),
        entries=tuple(
            Entry(i, SymbolicWeight(hard=0, soft=math.log(w)), w / total)
            for i, w in entries
        ),
        max_hard_tier=0,
        total_soft_mass=math.log(total),
        signature=m.signature,
    )
