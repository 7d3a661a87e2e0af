"""Probabilistic semantics for weighted ground programs.

A weighted rule set induces, for each interpretation I, the subset of rules
I classically satisfies.  I gets nonzero weight exactly when it is a stable
model of that subset, and the weight is exp(k*alpha + w) where k counts the
satisfied hard rules and w sums the satisfied soft weights.  Probabilities
are the alpha -> infinity limit: only interpretations on the highest hard
tier survive, normalized by soft weight.  The (k, w) pair is carried
symbolically, so the limit is computed exactly rather than with a large
numeric stand-in for alpha.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .core import (
    Formula,
    Var,
    Signature,
    SymbolicWeight,
    Weight,
    formula_atoms,
    satisfies,
)
from .errors import (
    ConditionHasZeroProbability,
    NoHardConsistentModel,
    UniverseExplosion,
)
from .ground import GroundProgram, ground_atoms, subst_formula
from .stable import (
    DEFAULT_ATOM_CAP,
    _is_minimal_fast,
    compile_formula,
    compile_rule,
    is_stable_model,
    iter_constrained_masks,
    mask_to_interp,
    possible_atoms,
    reduct,
    restrict_rules,
    satisfies_rule,
)

# above this many derivable atoms, plain 2^n enumeration is abandoned in
# favor of the hard-rules-first search justified by the soft-only shortcut
FULL_ENUMERATION_LIMIT = 16


@dataclass(frozen=True)
class MlnProgram:
    """A Markov logic network: weighted ground formulas over a signature."""

    signature: Signature
    formulas: tuple  # of (Weight, Formula)

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))


def formula_variables(f: Formula):
    """Variables of a formula in first-occurrence order."""
    seen = []
    for atom in formula_atoms(f):
        for t in (*atom.args, atom.value):
            if isinstance(t, Var) and t not in seen:
                seen.append(t)
    return seen


def ground_mln(mln: MlnProgram) -> MlnProgram:
    """Instantiate each weighted formula over its variables' domains."""
    out = []
    for w, f in mln.formulas:
        variables = formula_variables(f)
        if not variables:
            out.append((w, f))
            continue
        pools = [mln.signature.domain_values(v.domain) for v in variables]
        for combo in itertools.product(*pools):
            env = {v.name: value for v, value in zip(variables, combo)}
            out.append((w, subst_formula(f, env)))
    return MlnProgram(signature=mln.signature, formulas=tuple(out))


@dataclass(frozen=True)
class Entry:
    interp: frozenset
    weight: SymbolicWeight
    prob: float
    satisfied: tuple = ()  # indices of classically satisfied weighted rules


@dataclass(frozen=True)
class Distribution:
    atoms: tuple
    entries: tuple
    max_hard_tier: int
    total_soft_mass: float  # log of the normalizer within the top tier
    signature: Signature | None = field(default=None, compare=False)

    def support(self) -> dict:
        """Map interpretation -> probability over nonzero entries."""
        return {e.interp: e.prob for e in self.entries if e.prob > 0.0}

    def _check_formula(self, f: Formula):
        if self.signature is not None:
            for atom in formula_atoms(f):
                self.signature.check_atom(atom)

    def prob(self, f: Formula) -> float:
        self._check_formula(f)
        return sum(e.prob for e in self.entries if satisfies(e.interp, f))

    def cond(self, f: Formula, given: Formula) -> float:
        self._check_formula(f)
        self._check_formula(given)
        denom = self.prob(given)
        if denom == 0.0:
            raise ConditionHasZeroProbability(f"P({given}) = 0")
        num = sum(
            e.prob
            for e in self.entries
            if satisfies(e.interp, f) and satisfies(e.interp, given)
        )
        return num / denom


def _normalize(weighted, *, list_all=False, atoms=(), signature=None) -> Distribution:
    """Build a Distribution from (interp, SymbolicWeight, satisfied) triples.

    The top hard tier is selected symbolically; within it probabilities are
    softmax of the soft sums, computed in log space.
    """
    nonzero = [t for t in weighted if not t[1].is_zero]
    tier = max(t[1].hard for t in nonzero) if nonzero else 0
    top = [t for t in nonzero if t[1].hard == tier]
    m = max(t[1].soft for t in top) if top else 0.0
    log_z = m + math.log(sum(math.exp(t[1].soft - m) for t in top)) if top else 0.0
    entries = []
    for interp, w, sat in weighted:
        p = math.exp(w.soft - log_z) if (not w.is_zero and w.hard == tier) else 0.0
        if p > 0.0 or list_all:
            entries.append(Entry(interp, w, p, tuple(sat)))
    return Distribution(
        atoms=tuple(atoms),
        entries=tuple(entries),
        max_hard_tier=tier,
        total_soft_mass=log_z,
        signature=signature,
    )


def _possible_universe(gp: GroundProgram) -> list:
    """Derivable atoms in canonical ground-atom order."""
    possible = possible_atoms(gp.unweighted)
    return [a for a in ground_atoms(gp) if a in possible]


def satisfied_rules(gp: GroundProgram, interp: frozenset) -> tuple:
    """The weighted rules of the program classically satisfied by interp."""
    return tuple(wr for wr in gp.rules if satisfies_rule(interp, wr.rule))


def _weight_of(weights, satisfied_idx) -> SymbolicWeight:
    hard = sum(1 for i in satisfied_idx if weights[i].is_hard)
    soft = sum(weights[i].soft for i in satisfied_idx if not weights[i].is_hard)
    return SymbolicWeight(hard=hard, soft=float(soft))


def unnormalized_weight(gp: GroundProgram, interp: frozenset) -> SymbolicWeight:
    """exp(hard*alpha + soft) over the satisfied rules, or zero when interp
    is not a stable model of its own satisfied subset."""
    sat = [i for i, wr in enumerate(gp.rules) if satisfies_rule(interp, wr.rule)]
    own = tuple(gp.rules[i].rule for i in sat)
    if not is_stable_model(own, interp):
        return SymbolicWeight.zero()
    return _weight_of([wr.weight for wr in gp.rules], sat)


def _iter_weighted_full(gp: GroundProgram, universe):
    """(interp, weight, satisfied-indices) for all subsets of the universe."""
    index = {a: i for i, a in enumerate(universe)}
    rule_fns = [compile_rule(wr.rule, index) for wr in gp.rules]
    weights = [wr.weight for wr in gp.rules]
    plain = [wr.rule for wr in gp.rules]
    for mask in range(1 << len(universe)):
        interp = mask_to_interp(mask, universe)
        sat = [i for i, fn in enumerate(rule_fns) if fn(mask)]
        own = reduct((plain[i] for i in sat), interp)
        if _is_minimal_fast(interp, own):
            w = _weight_of(weights, sat)
        else:
            w = SymbolicWeight.zero()
        yield interp, w, sat


def _iter_weighted_hard_first(gp: GroundProgram, universe):
    """(interp, weight, satisfied-indices) over interpretations satisfying
    every hard rule and stable for their satisfied subset.

    Sound as a distribution only when at least one such interpretation
    exists: then the top hard tier is exactly the full hard-rule count and
    the soft-only shortcut applies.
    """
    possible = frozenset(universe)
    hard_plain = [wr.rule for wr in gp.rules if wr.weight.is_hard]
    constraints = restrict_rules(hard_plain, possible)
    index = {a: i for i, a in enumerate(universe)}
    rule_fns = [compile_rule(wr.rule, index) for wr in gp.rules]
    weights = [wr.weight for wr in gp.rules]
    plain = [wr.rule for wr in gp.rules]
    for mask in iter_constrained_masks(universe, constraints):
        interp = mask_to_interp(mask, universe)
        sat = [i for i, fn in enumerate(rule_fns) if fn(mask)]
        own = reduct((plain[i] for i in sat), interp)
        if _is_minimal_fast(interp, own):
            yield interp, _weight_of(weights, sat), sat


def soft_stable_set(gp: GroundProgram, *, max_atoms: int = DEFAULT_ATOM_CAP) -> list:
    """SM[Pi]: interpretations stable for their own satisfied subset.
    Always nonempty since the empty interpretation qualifies."""
    universe = _possible_universe(gp)
    if len(universe) > max_atoms:
        raise UniverseExplosion(
            f"{len(universe)} derivable atoms exceed the cap of {max_atoms}"
        )
    return [i for i, w, _s in _iter_weighted_full(gp, universe) if not w.is_zero]


def distribution(
    gp: GroundProgram,
    *,
    max_atoms: int = DEFAULT_ATOM_CAP,
    list_all: bool = False,
    method: str = "auto",
) -> Distribution:
    """The limit distribution over the program's stable-model candidates.

    ``method``: "full" enumerates every subset of the derivable atoms;
    "hard-first" searches only interpretations satisfying all hard rules
    (falling back to full enumeration when none is stable); "auto" picks by
    universe size.  ``list_all`` keeps zero-probability rows, which forces
    full enumeration.
    """
    universe = _possible_universe(gp)
    if len(universe) > max_atoms:
        raise UniverseExplosion(
            f"{len(universe)} derivable atoms exceed the cap of {max_atoms}"
        )
    if list_all:
        method = "full"
    elif method == "auto":
        method = "full" if len(universe) <= FULL_ENUMERATION_LIMIT else "hard-first"
    if method == "hard-first":
        weighted = list(_iter_weighted_hard_first(gp, universe))
        if not weighted:
            weighted = list(_iter_weighted_full(gp, universe))
    else:
        weighted = list(_iter_weighted_full(gp, universe))
    return _normalize(
        weighted, list_all=list_all, atoms=universe, signature=gp.signature
    )


def soft_only_distribution(
    gp: GroundProgram, *, max_atoms: int = DEFAULT_ATOM_CAP
) -> Distribution:
    """P': normalized soft weights over the interpretations that satisfy
    every hard rule and are stable for their satisfied subset."""
    universe = _possible_universe(gp)
    if len(universe) > max_atoms:
        raise UniverseExplosion(
            f"{len(universe)} derivable atoms exceed the cap of {max_atoms}"
        )
    weighted = [
        (interp, SymbolicWeight(hard=0, soft=w.soft), sat)
        for interp, w, sat in _iter_weighted_hard_first(gp, universe)
    ]
    if not weighted:
        raise NoHardConsistentModel(
            "no stable-model candidate satisfies every hard rule"
        )
    return _normalize(weighted, atoms=universe, signature=gp.signature)


def prob_query(gp: GroundProgram, f: Formula, **kwargs) -> float:
    return distribution(gp, **kwargs).prob(f)


def cond_prob(gp: GroundProgram, f: Formula, given: Formula, **kwargs) -> float:
    return distribution(gp, **kwargs).cond(f, given)


def signature_atoms(sig: Signature) -> list:
    """Every ground atom of the signature, canonical order."""
    out = []
    for symbol, args in sig.ground_keys():
        out.extend(sig.atoms_for_key(symbol, args))
    return out


def mln_distribution(
    mln: MlnProgram,
    *,
    max_atoms: int = DEFAULT_ATOM_CAP,
    list_all: bool = False,
) -> Distribution:
    """MLN semantics: weights over ALL interpretations, no stability filter;
    the hard tier plays the same limit role as in the weighted-rule case."""
    mln = ground_mln(mln)
    universe = signature_atoms(mln.signature)
    if len(universe) > max_atoms:
        raise UniverseExplosion(
            f"{len(universe)} atoms exceed the cap of {max_atoms}"
        )
    index = {a: i for i, a in enumerate(universe)}
    fns = [compile_formula(f, index) for _w, f in mln.formulas]
    weights = [w for w, _f in mln.formulas]
    weighted = []
    for mask in range(1 << len(universe)):
        interp = mask_to_interp(mask, universe)
        sat = [i for i, fn in enumerate(fns) if fn(mask)]
        weighted.append((interp, _weight_of(weights, sat), sat))
    return _normalize(
        weighted, list_all=list_all, atoms=universe, signature=mln.signature
    )
