"""Simple P-log: normal rules, random selection rules, pr-atoms,
observations and actions.

Possible worlds are the stable models of a plain ASP translation; each
world is measured by the product of causal probabilities (assigned by
pr-atoms, default uniform otherwise).  The program also translates into a
multi-valued probabilistic program via auxiliary pf constants, with a
per-world formula F_W whose query probability reproduces the measure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ..core import (
    HARD,
    Atom,
    AtomF,
    Formula,
    Not,
    Program,
    Rule,
    Signature,
    TRUE,
    WeightedRule,
    atom_sort_key,
    conj,
    satisfies,
)
from ..errors import (
    AllZeroMeasure,
    DefaultProbabilityUndefined,
    Inconsistent,
    ValidationError,
)
from ..ground import ground_program, ground_rule_instances
from ..stable import enumerate_stable_models
from .mvpp import Declaration, MvppProgram

PROB_TOL = 1e-9


@dataclass(frozen=True)
class Selection:
    """[name] random(constant) :- body."""

    name: str
    constant: Atom  # value None; args may contain variables
    body_pos: tuple = ()
    body_neg: Formula = TRUE
    builtins: tuple = ()


@dataclass(frozen=True)
class PrAtom:
    """pr[name](constant=value | body) = prob."""

    selection: str
    constant: Atom  # value None
    value: object
    prob: float
    body_pos: tuple = ()
    body_neg: Formula = TRUE
    builtins: tuple = ()

    def __post_init__(self):
        if not (0.0 <= self.prob <= 1.0):
            raise ValidationError(f"pr-atom probability {self.prob} not in [0, 1]")


@dataclass(frozen=True)
class PlogProgram:
    signature: Signature
    rules: tuple = ()
    selections: tuple = ()
    pratoms: tuple = ()
    obs: tuple = ()  # of ground Atom
    do: tuple = ()  # of ground Atom

    def __post_init__(self):
        for name in ("rules", "selections", "pratoms", "obs", "do"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        names = [s.name for s in self.selections]
        if len(set(names)) != len(names):
            raise ValidationError("selection rule identifiers must be unique")
        for pa in self.pratoms:
            if pa.selection not in names:
                raise ValidationError(
                    f"pr-atom refers to unknown selection rule [{pa.selection}]"
                )


# ---------------------------------------------------------------------------
# Mangled auxiliary atoms


def _intervene(c: Atom) -> Atom:
    return Atom("intervene_" + c.symbol, c.args)


def _obs_symbol(symbol):
    return "obs_" + symbol


def _do_symbol(symbol):
    return "do_" + symbol


def _marker(symbol, atom: Atom) -> Atom:
    """obs_/do_ copy of an atom; the value becomes a trailing argument."""
    if atom.value is None:
        return Atom(symbol, atom.args)
    return Atom(symbol, atom.args + (atom.value,))


def _assigned(name, args) -> Atom:
    return Atom("assigned_" + name, args)


def _value_domain_name(symbol):
    return "_dom_" + symbol


def tau_signature(p: PlogProgram) -> Signature:
    """sigma': the source signature plus Intervene, Obs and Do constants."""
    domains = {}
    constants = {}
    for symbol, (arg_domains, values) in p.signature.constants.items():
        constants["intervene_" + symbol] = (arg_domains, None)
        if values is None:
            constants[_obs_symbol(symbol)] = (arg_domains, None)
            constants[_do_symbol(symbol)] = (arg_domains, None)
        else:
            dom_name = _value_domain_name(symbol)
            domains[dom_name] = values
            constants[_obs_symbol(symbol)] = (arg_domains + (dom_name,), None)
            constants[_do_symbol(symbol)] = (arg_domains + (dom_name,), None)
    return p.signature.extended(domains=domains, constants=constants)


def plog_tau(p: PlogProgram) -> Program:
    """The plain ASP reading: one disjunctive rule per selection, the source
    rules, and the observation/action scaffolding, all hard."""
    sig = tau_signature(p)
    rules = [WeightedRule(HARD, r) for r in p.rules]
    for sel in p.selections:
        domain = p.signature.value_domain(sel.constant.symbol)
        if domain is None:
            raise ValidationError(
                f"random constant {sel.constant.symbol} needs a declared value domain"
            )
        head = tuple(Atom(sel.constant.symbol, sel.constant.args, v) for v in domain)
        neg = conj(
            ([sel.body_neg] if sel.body_neg != TRUE else [])
            + [Not(AtomF(_intervene(sel.constant)))]
        )
        rules.append(
            WeightedRule(
                HARD,
                Rule(head=head, body_pos=sel.body_pos, body_neg=neg,
                     builtins=sel.builtins),
            )
        )
    for atom in p.obs:
        rules.append(WeightedRule(HARD, Rule(head=(_marker(_obs_symbol(atom.symbol), atom),))))
    for atom in p.do:
        rules.append(WeightedRule(HARD, Rule(head=(_marker(_do_symbol(atom.symbol), atom),))))
    for symbol, args in p.signature.ground_keys():
        values = p.signature.value_domain(symbol)
        for atom in p.signature.atoms_for_key(symbol, args):
            obs = _marker(_obs_symbol(symbol), atom)
            do = _marker(_do_symbol(symbol), atom)
            rules.append(
                WeightedRule(HARD, Rule(body_pos=(obs,), body_neg=Not(AtomF(atom))))
            )
            rules.append(WeightedRule(HARD, Rule(head=(atom,), body_pos=(do,))))
            rules.append(
                WeightedRule(HARD, Rule(head=(_intervene(atom),), body_pos=(do,)))
            )
    return Program(signature=sig, rules=tuple(rules))


def possible_worlds(p: PlogProgram, **kwargs) -> list:
    worlds = enumerate_stable_models(ground_program(plog_tau(p)), **kwargs)
    if not worlds:
        raise Inconsistent("the program has no possible world")
    return worlds


# ---------------------------------------------------------------------------
# Grounding of selections and pr-atoms


@dataclass(frozen=True)
class GroundSelection:
    name: str
    constant: Atom  # ground, value None
    body: Rule  # ground, head empty


@dataclass(frozen=True)
class GroundPrAtom:
    selection: str
    constant: Atom
    value: object
    prob: float
    body: Rule


def _ground_body_carrier(sig, head_atoms, body_pos, body_neg, builtins):
    rule = Rule(head=head_atoms, body_pos=body_pos, body_neg=body_neg,
                builtins=builtins)
    return ground_rule_instances(sig, rule)


def ground_selections(p: PlogProgram) -> list:
    out = []
    for sel in p.selections:
        for inst in _ground_body_carrier(
            p.signature, (sel.constant,), sel.body_pos, sel.body_neg, sel.builtins
        ):
            out.append(
                GroundSelection(
                    name=sel.name,
                    constant=inst.head[0],
                    body=Rule(body_pos=inst.body_pos, body_neg=inst.body_neg),
                )
            )
    return out


def ground_pratoms(p: PlogProgram) -> list:
    out = []
    for pa in p.pratoms:
        carrier = Atom(pa.constant.symbol, pa.constant.args, pa.value)
        for inst in _ground_body_carrier(
            p.signature, (carrier,), pa.body_pos, pa.body_neg, pa.builtins
        ):
            ground_c = inst.head[0]
            out.append(
                GroundPrAtom(
                    selection=pa.selection,
                    constant=Atom(ground_c.symbol, ground_c.args),
                    value=ground_c.value,
                    prob=pa.prob,
                    body=Rule(body_pos=inst.body_pos, body_neg=inst.body_neg),
                )
            )
    return out


def _body_holds(interp, body: Rule) -> bool:
    return all(a in interp for a in body.body_pos) and satisfies(interp, body.body_neg)


def _world_value(world, constant: Atom, domain):
    found = [v for v in domain if Atom(constant.symbol, constant.args, v) in world]
    return found


# ---------------------------------------------------------------------------
# Direct semantics


def _constant_factors(p, gsels, gprs, world, *, diagnostics=None):
    """Per random constant applied in the world, the causal probability of
    its value; raises (or records) the assumption violations."""

    def bad(msg):
        if diagnostics is None:
            raise ValidationError(msg)
        diagnostics.append(msg)

    by_constant = {}
    for gs in gsels:
        if _body_holds(world, gs.body):
            by_constant.setdefault(gs.constant, []).append(gs)
    factors = []
    for constant, applied in sorted(by_constant.items(), key=lambda kv: str(kv[0])):
        if len(applied) > 1:
            bad(
                f"UniqueSelectionViolation: rules "
                f"{[s.name for s in applied]} for {constant} all applied"
            )
            continue
        sel = applied[0]
        domain = p.signature.value_domain(constant.symbol)
        values = _world_value(world, constant, domain)
        if not values:
            continue  # intervened away or undefined; contributes no factor
        value = values[0]
        intervened = _intervene(constant) in world
        prs = (
            []
            if intervened
            else [
                q
                for q in gprs
                if q.selection == sel.name
                and q.constant == constant
                and _body_holds(world, q.body)
            ]
        )
        bodies = {q.body for q in prs}
        if len(bodies) > 1:
            bad(
                f"UniqueAssignmentViolation: pr-atoms for {constant} with "
                "different bodies are applied together"
            )
            continue
        assigned = {}
        for q in prs:
            if q.value in assigned:
                bad(
                    f"UniqueAssignmentViolation: two applied pr-atoms assign "
                    f"{constant}={q.value}"
                )
            assigned[q.value] = q.prob
        total_ap = sum(assigned.values())
        if total_ap > 1.0 + PROB_TOL:
            bad(f"assigned probabilities for {constant} sum to {total_ap} > 1")
            continue
        rest = len(domain) - len(assigned)
        if rest == 0 and total_ap < 1.0 - PROB_TOL:
            bad(
                f"DefaultProbabilityUndefined: every value of {constant} is "
                f"assigned yet the probabilities sum to {total_ap}"
            )
            continue
        if value in assigned:
            factor = assigned[value]
        else:
            factor = (1.0 - total_ap) / rest
        factors.append((constant, value, factor))
    return factors


def plog_validate(p: PlogProgram, **kwargs) -> list:
    """Diagnostics for the unique-selection / unique-assignment assumptions
    and probability sanity, checked per possible world."""
    diagnostics = []
    gsels = ground_selections(p)
    gprs = ground_pratoms(p)
    for q in gprs:
        domain = p.signature.value_domain(q.constant.symbol)
        if domain is None or q.value not in domain:
            diagnostics.append(
                f"pr-atom value {q.constant}={q.value} outside the domain"
            )
    try:
        worlds = possible_worlds(p, **kwargs)
    except Inconsistent:
        return diagnostics + ["Inconsistent: the program has no possible world"]
    for world in worlds:
        _constant_factors(p, gsels, gprs, world, diagnostics=diagnostics)
    seen = set()
    unique = []
    for d in diagnostics:
        if d not in seen:
            seen.add(d)
            unique.append(d)
    return unique


def plog_measure(p: PlogProgram, **kwargs) -> dict:
    """Map each possible world to (unnormalized, normalized) measure."""
    problems = plog_validate(p, **kwargs)
    if problems:
        raise ValidationError("; ".join(problems))
    gsels = ground_selections(p)
    gprs = ground_pratoms(p)
    worlds = possible_worlds(p, **kwargs)
    hats = []
    for world in worlds:
        mu_hat = 1.0
        for _c, _v, factor in _constant_factors(p, gsels, gprs, world):
            mu_hat *= factor
        hats.append(mu_hat)
    total = sum(hats)
    if total == 0.0:
        raise AllZeroMeasure("every possible world has measure zero")
    return {w: (h, h / total) for w, h in zip(worlds, hats)}


def plog_prob(p: PlogProgram, f: Formula, **kwargs) -> float:
    measure = plog_measure(p, **kwargs)
    return sum(mu for w, (_hat, mu) in measure.items() if satisfies(w, f))


# ---------------------------------------------------------------------------
# Translation to a multi-valued probabilistic program


@dataclass(frozen=True)
class Experiment:
    """One ground selection instance with its pr-atom body groups."""

    selection: GroundSelection
    groups: tuple  # of (body: Rule, {value: prob}, pf_symbol)
    default_symbol: str


def _experiments(p: PlogProgram) -> list:
    gsels = ground_selections(p)
    gprs = ground_pratoms(p)
    do_keys = {a.key for a in p.do}
    out = []
    for gs in gsels:
        groups = []
        if gs.constant.key not in do_keys:
            order = []
            table = {}
            for q in gprs:
                if q.selection != gs.name or q.constant != gs.constant:
                    continue
                if q.body not in table:
                    table[q.body] = {}
                    order.append(q.body)
                if q.value in table[q.body]:
                    raise ValidationError(
                        f"duplicate pr-atom for {gs.constant}={q.value}"
                    )
                table[q.body][q.value] = q.prob
            for k, body in enumerate(order, start=1):
                pf_symbol = f"pf_{gs.name}_{k}"
                groups.append((body, table[body], pf_symbol))
        out.append(
            Experiment(
                selection=gs,
                groups=tuple(groups),
                default_symbol=f"pfd_{gs.name}",
            )
        )
    return out


def _group_items(domain, assigned: dict):
    """Causal probabilities over the whole domain for one body group."""
    total_ap = sum(assigned.values())
    rest = [v for v in domain if v not in assigned]
    if not rest:
        if total_ap < 1.0 - PROB_TOL:
            raise DefaultProbabilityUndefined(
                "every domain value is assigned but the probabilities "
                f"sum to {total_ap}"
            )
        dp = 0.0
    else:
        dp = (1.0 - total_ap) / len(rest)
        if dp < -PROB_TOL:
            raise ValidationError(
                f"assigned probabilities sum to {total_ap} > 1"
            )
        dp = max(dp, 0.0)
    return tuple((assigned.get(v, dp), v) for v in domain)


def _merge_neg(*parts):
    return conj([f for f in parts if f != TRUE])


def plog_to_mvpp(p: PlogProgram) -> MvppProgram:
    """The pf-constant translation: per applied-body group a probabilistic
    constant carrying the causal distribution, per selection a uniform
    default constant, plus the assignment and default firing rules."""
    tau = plog_tau(p)
    experiments = _experiments(p)
    domains = {}
    constants = {}
    declarations = []
    extra_rules = []
    for exp in experiments:
        gs = exp.selection
        c = gs.constant
        domain = p.signature.value_domain(c.symbol)
        dom_name = _value_domain_name(c.symbol)
        domains[dom_name] = domain
        arg_domains = p.signature.constants[c.symbol][0]
        assigned_atom = _assigned(gs.name, c.args)
        constants["assigned_" + gs.name] = (arg_domains, None)
        intervene_neg = Not(AtomF(_intervene(c)))
        for body, table, pf_symbol in exp.groups:
            constants[pf_symbol] = (arg_domains, domain)
            declarations.append(
                Declaration(pf_symbol, c.args, _group_items(domain, table))
            )
            for v in domain:
                extra_rules.append(
                    Rule(
                        head=(Atom(c.symbol, c.args, v),),
                        body_pos=body.body_pos
                        + gs.body.body_pos
                        + (Atom(pf_symbol, c.args, v),),
                        body_neg=_merge_neg(
                            body.body_neg, gs.body.body_neg, intervene_neg
                        ),
                    )
                )
            extra_rules.append(
                Rule(
                    head=(assigned_atom,),
                    body_pos=body.body_pos + gs.body.body_pos,
                    body_neg=_merge_neg(
                        body.body_neg, gs.body.body_neg, intervene_neg
                    ),
                )
            )
        constants[exp.default_symbol] = (arg_domains, domain)
        uniform = tuple((1.0 / len(domain), v) for v in domain)
        declarations.append(Declaration(exp.default_symbol, c.args, uniform))
        for v in domain:
            extra_rules.append(
                Rule(
                    head=(Atom(c.symbol, c.args, v),),
                    body_pos=gs.body.body_pos + (Atom(exp.default_symbol, c.args, v),),
                    body_neg=_merge_neg(gs.body.body_neg, Not(AtomF(assigned_atom))),
                )
            )
    sig = tau.signature.extended(domains=domains, constants=constants)
    return MvppProgram(
        signature=sig,
        declarations=tuple(declarations),
        rules=tau.unweighted + tuple(extra_rules),
    )


def fw_formula(p: PlogProgram, world: frozenset) -> Formula:
    """F_W: the world's atoms plus the pf-constant values that produced each
    randomly selected value."""
    experiments = _experiments(p)
    parts = [AtomF(a) for a in sorted(world, key=atom_sort_key)]
    by_constant = {}
    for exp in experiments:
        if _body_holds(world, exp.selection.body):
            by_constant.setdefault(exp.selection.constant, []).append(exp)
    for constant in sorted(by_constant, key=str):
        applied = by_constant[constant]
        if len(applied) > 1:
            raise ValidationError(
                f"UniqueSelectionViolation: several selection rules for "
                f"{constant} applied"
            )
        exp = applied[0]
        domain = p.signature.value_domain(constant.symbol)
        values = _world_value(world, constant, domain)
        if not values:
            continue
        value = values[0]
        intervened = _intervene(constant) in world
        group = None
        if not intervened:
            for body, table, pf_symbol in exp.groups:
                if _body_holds(world, body):
                    if group is not None:
                        raise ValidationError(
                            f"UniqueAssignmentViolation for {constant}"
                        )
                    group = pf_symbol
        symbol = group if group is not None else exp.default_symbol
        parts.append(AtomF(Atom(symbol, constant.args, value)))
    return conj(parts)
