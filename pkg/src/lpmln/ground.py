"""Instantiation of non-ground programs over their finite declared domains."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    And,
    Atom,
    AtomF,
    Bot,
    Builtin,
    Formula,
    Implies,
    ModExpr,
    Not,
    Or,
    Program,
    Rule,
    Signature,
    Top,
    Var,
    WeightedRule,
    atom_sort_key,
    formula_atoms,
)
from .errors import EmptyDomain, GroundingExplosion, SignatureError

DEFAULT_INSTANCE_CAP = 100_000


@dataclass(frozen=True)
class GroundProgram:
    """A fully instantiated program; ``provenance[i]`` is the index of the
    source rule that produced ground rule i."""

    signature: Signature
    rules: tuple  # of WeightedRule, all ground, builtins eliminated
    provenance: tuple = ()

    @property
    def unweighted(self):
        return tuple(wr.rule for wr in self.rules)

    @property
    def hard_rules(self):
        return tuple(wr for wr in self.rules if wr.weight.is_hard)

    @property
    def soft_rules(self):
        return tuple(wr for wr in self.rules if not wr.weight.is_hard)


def rule_variables(rule: Rule):
    """Variables of a rule in order of first occurrence."""
    seen = {}

    def visit_term(t):
        if isinstance(t, Var) and t.name not in seen:
            seen[t.name] = t

    def visit_atom(a: Atom):
        for t in a.args:
            visit_term(t)
        if a.value is not None:
            visit_term(a.value)

    for a in rule.head:
        visit_atom(a)
    for a in rule.body_pos:
        visit_atom(a)
    for b in rule.builtins:
        lhs = b.lhs.term if isinstance(b.lhs, ModExpr) else b.lhs
        visit_term(lhs)
        visit_term(b.rhs)
    for a in formula_atoms(rule.body_neg):
        visit_atom(a)
    return list(seen.values())


def subst_term(t, env):
    if isinstance(t, Var):
        return env[t.name]
    return t


def subst_atom(a: Atom, env) -> Atom:
    return Atom(
        a.symbol,
        tuple(subst_term(t, env) for t in a.args),
        None if a.value is None else subst_term(a.value, env),
    )


def subst_formula(f: Formula, env) -> Formula:
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, AtomF):
        return AtomF(subst_atom(f.atom, env))
    if isinstance(f, Not):
        return Not(subst_formula(f.arg, env))
    if isinstance(f, And):
        return And(tuple(subst_formula(p, env) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(subst_formula(p, env) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(subst_formula(f.lhs, env), subst_formula(f.rhs, env))
    raise TypeError(f"not a formula: {f!r}")


def eval_builtin(b: Builtin, env) -> bool:
    lhs = b.lhs
    if isinstance(lhs, ModExpr):
        v = subst_term(lhs.term, env)
        if not isinstance(v, int):
            raise SignatureError(f"mod applied to non-integer value {v!r}")
        lhs_val = v % lhs.modulus
    else:
        lhs_val = subst_term(lhs, env)
    rhs_val = subst_term(b.rhs, env)
    if b.op == "=":
        return lhs_val == rhs_val
    if b.op == "!=":
        return lhs_val != rhs_val
    if b.op in ("<", "<="):
        if not (isinstance(lhs_val, int) and isinstance(rhs_val, int)):
            raise SignatureError(f"ordered comparison on non-integers: {lhs_val!r} {b.op} {rhs_val!r}")
        return lhs_val < rhs_val if b.op == "<" else lhs_val <= rhs_val
    raise SignatureError(f"unknown builtin operator {b.op}")


def ground_rule_instances(sig: Signature, rule: Rule):
    """One ground rule per variable assignment, builtins evaluated; yields
    ground Rules in lexicographic assignment order."""
    variables = rule_variables(rule)
    pools = []
    for v in variables:
        values = sig.domain_values(v.domain)
        if not values:
            raise EmptyDomain(f"variable {v.name} ranges over empty domain {v.domain}")
        pools.append(values)
    for combo in itertools.product(*pools):
        env = {v.name: value for v, value in zip(variables, combo)}
        if not all(eval_builtin(b, env) for b in rule.builtins):
            continue
        yield Rule(
            head=tuple(subst_atom(a, env) for a in rule.head),
            body_pos=tuple(subst_atom(a, env) for a in rule.body_pos),
            body_neg=subst_formula(rule.body_neg, env),
        )


def ground_program(program: Program, *, max_instances: int = DEFAULT_INSTANCE_CAP) -> GroundProgram:
    """gr[Pi]: replace every variable by every value of its domain; weights
    are copied verbatim; rules keep source order."""
    rules = []
    provenance = []
    for idx, wr in enumerate(program.rules):
        for ground in ground_rule_instances(program.signature, wr.rule):
            rules.append(WeightedRule(wr.weight, ground))
            provenance.append(idx)
            if len(rules) > max_instances:
                raise GroundingExplosion(
                    f"grounding exceeds {max_instances} instances (use a larger cap)"
                )
    return GroundProgram(program.signature, tuple(rules), tuple(provenance))


def rule_atoms(rule: Rule):
    yield from rule.head
    yield from rule.body_pos
    yield from formula_atoms(rule.body_neg)


def atom_universe(sig: Signature, atoms) -> tuple:
    """Deterministic duplicate-free ground-atom universe: for each constant
    key occurring in ``atoms``, plain Boolean atoms stand alone while
    declared mv-constants contribute one atom per domain value."""
    keys = {}
    extra = []
    for a in atoms:
        if a.symbol in sig.constants and sig.constants[a.symbol][1] is not None:
            keys[a.key] = True
        elif a.key not in keys:
            keys[a.key] = False
    out = []
    seen = set()
    for (symbol, args), is_mv in sorted(keys.items(), key=lambda kv: (kv[0][0], tuple(map(str, kv[0][1])))):
        if is_mv:
            atoms_here = sig.atoms_for_key(symbol, args)
        else:
            atoms_here = (Atom(symbol, args),)
        for a in atoms_here:
            if a not in seen:
                seen.add(a)
                out.append(a)
    return tuple(out)


def ground_atoms(gp: GroundProgram) -> tuple:
    """The ground atom universe of a ground program."""
    collected = []
    for wr in gp.rules:
        collected.extend(rule_atoms(wr.rule))
    return atom_universe(gp.signature, collected)
