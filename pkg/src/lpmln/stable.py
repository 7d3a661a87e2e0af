"""Deterministic stable-model machinery: reduct, minimality, enumeration,
dependency graph, tightness, loops, external support and completion.

Enumeration never ranges over the full interpretation space of the
signature.  A stable model can only contain atoms derivable through rule
heads (a minimal model of a positive program is contained in the union of
its heads), so we first compute the "possible atom" fixpoint and explore
subsets of it; everything outside is false.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx

from .core import (
    And,
    Atom,
    AtomF,
    Bot,
    FALSE,
    Formula,
    Implies,
    Not,
    Or,
    Rule,
    TRUE,
    Top,
    conj,
    disj,
    formula_atoms,
    satisfies,
)
from .errors import LoopExplosion, SubsetExplosion, UniverseExplosion
from .ground import GroundProgram, ground_atoms

DEFAULT_ATOM_CAP = 24
DEFAULT_SUBSET_CAP = 24
DEFAULT_LOOP_CAP = 100_000


def _rules_of(program) -> tuple:
    """Accept a GroundProgram or a plain iterable of Rules."""
    if isinstance(program, GroundProgram):
        return program.unweighted
    return tuple(program)


# ---------------------------------------------------------------------------
# Reduct and minimality


def reduct(program, interp: frozenset) -> tuple:
    """Pi^I: keep ``head :- body_pos`` for rules whose negative part holds."""
    out = []
    for rule in _rules_of(program):
        if satisfies(interp, rule.body_neg):
            out.append(Rule(head=rule.head, body_pos=rule.body_pos))
    return tuple(out)


def satisfies_rule(interp: frozenset, rule: Rule) -> bool:
    return satisfies(interp, rule.as_formula())


def satisfies_program(interp: frozenset, program) -> bool:
    return all(satisfies_rule(interp, r) for r in _rules_of(program))


def _closure_all_heads(rules, limit_atoms=None):
    """Least set closed under: body_pos derivable => add *all* head atoms.
    Every minimal model of a positive program is a subset of this closure."""
    derived = set()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if all(a in derived for a in rule.body_pos):
                for a in rule.head:
                    if a not in derived and (limit_atoms is None or a in limit_atoms):
                        derived.add(a)
                        changed = True
    return derived


def _lfp_nondisjunctive(rules):
    """Least fixpoint over the single-head rules only; contained in every
    model of the positive program."""
    derived = set()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if len(rule.head) == 1 and rule.head[0] not in derived:
                if all(a in derived for a in rule.body_pos):
                    derived.add(rule.head[0])
                    changed = True
    return derived


def is_minimal_model(interp: frozenset, positive_rules, *, max_subset_atoms: int = DEFAULT_SUBSET_CAP) -> bool:
    """I is a model of the positive program and no proper subset of I is."""
    positive_rules = _rules_of(positive_rules)
    if not satisfies_program(interp, positive_rules):
        return False
    atoms = sorted(interp, key=str)
    if len(atoms) > max_subset_atoms:
        raise SubsetExplosion(
            f"minimality check over {len(atoms)} atoms exceeds cap {max_subset_atoms}"
        )
    for mask in range((1 << len(atoms)) - 1):
        sub = frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)
        if satisfies_program(sub, positive_rules):
            return False
    return True


def _is_minimal_fast(interp: frozenset, positive_rules, *, max_subset_atoms=DEFAULT_SUBSET_CAP) -> bool:
    """Minimality assuming ``interp`` is already a model of the reduct.

    Cheap necessary test first (closure of all heads), then the exact least
    fixpoint for the non-disjunctive part; the residual subset search only
    ranges over atoms not forced by single-head rules.
    """
    closure = _closure_all_heads(positive_rules)
    if not interp <= closure:
        return False
    forced = _lfp_nondisjunctive(positive_rules)
    if not forced <= interp:
        # forced atoms hold in every model, so interp is not even a model
        return False
    free = sorted(interp - forced, key=str)
    if not free:
        return True
    if len(free) > max_subset_atoms:
        raise SubsetExplosion(
            f"minimality check over {len(free)} free atoms exceeds cap {max_subset_atoms}"
        )
    base = frozenset(forced)
    for mask in range((1 << len(free)) - 1):
        sub = base | {a for i, a in enumerate(free) if mask >> i & 1}
        if satisfies_program(sub, positive_rules):
            return False
    return True


def is_stable_model(program, interp: frozenset, *, max_subset_atoms: int = DEFAULT_SUBSET_CAP) -> bool:
    """I satisfies every rule and is minimal for the reduct relative to I."""
    rules = _rules_of(program)
    if not satisfies_program(interp, rules):
        return False
    red = reduct(rules, interp)
    return _is_minimal_fast(interp, red, max_subset_atoms=max_subset_atoms)


# ---------------------------------------------------------------------------
# Possible atoms


def possible_atoms(program) -> frozenset:
    """Upper bound on any stable model: the fixpoint adding all head atoms of
    rules whose positive body is already possible (negation ignored)."""
    rules = _rules_of(program)
    return frozenset(_closure_all_heads(rules))


def restrict_rules(rules, possible: frozenset):
    """Partially evaluate rules under "atoms outside ``possible`` are false".

    Rules whose positive body mentions an impossible atom are vacuously
    satisfied by every candidate and are dropped; negative formulas are
    simplified.  Only valid for reasoning about interpretations that are
    subsets of ``possible``.
    """
    out = []
    for rule in _rules_of(rules):
        if any(a not in possible for a in rule.body_pos):
            continue
        neg = _simplify_neg(rule.body_neg, possible)
        if neg is FALSE:
            continue
        head = tuple(a for a in rule.head if a in possible)
        out.append(Rule(head=head, body_pos=rule.body_pos, body_neg=neg))
    return tuple(out)


def _simplify_neg(f: Formula, possible: frozenset) -> Formula:
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, AtomF):
        return f if f.atom in possible else FALSE
    if isinstance(f, Not):
        inner = _simplify_neg(f.arg, possible)
        if inner is TRUE:
            return FALSE
        if inner is FALSE:
            return TRUE
        return Not(inner)
    if isinstance(f, And):
        parts = [_simplify_neg(p, possible) for p in f.parts]
        if any(p is FALSE for p in parts):
            return FALSE
        parts = tuple(p for p in parts if p is not TRUE)
        return conj(parts)
    if isinstance(f, Or):
        parts = [_simplify_neg(p, possible) for p in f.parts]
        if any(p is TRUE for p in parts):
            return TRUE
        parts = tuple(p for p in parts if p is not FALSE)
        return disj(parts)
    if isinstance(f, Implies):
        lhs = _simplify_neg(f.lhs, possible)
        rhs = _simplify_neg(f.rhs, possible)
        if lhs is FALSE or rhs is TRUE:
            return TRUE
        if lhs is TRUE:
            return rhs
        if rhs is FALSE:
            return Not(lhs)
        return Implies(lhs, rhs)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Bit-compiled classical model enumeration


def compile_formula(f: Formula, index: dict):
    """Compile a ground formula to a predicate over an atom bitmask; atoms
    missing from ``index`` are constant-false."""
    if isinstance(f, Top):
        return lambda m: True
    if isinstance(f, Bot):
        return lambda m: False
    if isinstance(f, AtomF):
        if f.atom not in index:
            return lambda m: False
        bit = 1 << index[f.atom]
        return lambda m: bool(m & bit)
    if isinstance(f, Not):
        g = compile_formula(f.arg, index)
        return lambda m: not g(m)
    if isinstance(f, And):
        gs = [compile_formula(p, index) for p in f.parts]
        return lambda m: all(g(m) for g in gs)
    if isinstance(f, Or):
        gs = [compile_formula(p, index) for p in f.parts]
        return lambda m: any(g(m) for g in gs)
    if isinstance(f, Implies):
        lhs = compile_formula(f.lhs, index)
        rhs = compile_formula(f.rhs, index)
        return lambda m: (not lhs(m)) or rhs(m)
    raise TypeError(f"not a formula: {f!r}")


def compile_rule(rule: Rule, index: dict):
    """Rule satisfaction as a predicate over an atom bitmask."""
    if any(a not in index for a in rule.body_pos):
        return lambda m: True
    bpos = 0
    for a in rule.body_pos:
        bpos |= 1 << index[a]
    head = 0
    for a in rule.head:
        if a in index:
            head |= 1 << index[a]
    neg = compile_formula(rule.body_neg, index)
    return lambda m: (m & bpos) != bpos or not neg(m) or (m & head) != 0


def _rule_scope(rule: Rule, index: dict) -> int:
    """Lowest atom index the rule refers to; len(index) if none."""
    lo = len(index)
    for a in itertools.chain(rule.head, rule.body_pos, formula_atoms(rule.body_neg)):
        if a in index:
            lo = min(lo, index[a])
    return lo


def iter_constrained_masks(atoms: list, rules):
    """All bitmasks over ``atoms`` satisfying every rule, ascending.

    Depth-first search assigning the most significant bit first, false
    before true, so masks come out in numeric order.  A rule is checked as
    soon as every atom it mentions is assigned, which prunes violating
    subtrees early.  Atoms outside ``atoms`` are treated as false.
    """
    index = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)
    # depth d has assigned atom indices n-1 .. n-d; a rule becomes checkable
    # at depth n - (its lowest index)
    by_depth = [[] for _ in range(n + 1)]
    for rule in _rules_of(rules):
        fn = compile_rule(rule, index)
        by_depth[n - _rule_scope(rule, index)].append(fn)

    def ok(depth, mask):
        return all(fn(mask) for fn in by_depth[depth])

    if not ok(0, 0):
        return
    stack = [(0, 0)]
    while stack:
        depth, mask = stack.pop()
        if depth == n:
            yield mask
            continue
        t = mask | (1 << (n - 1 - depth))
        if ok(depth + 1, t):
            stack.append((depth + 1, t))
        if ok(depth + 1, mask):
            stack.append((depth + 1, mask))


def mask_to_interp(mask: int, atoms: list) -> frozenset:
    return frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)


# ---------------------------------------------------------------------------
# Dependency graph, tightness, loops


def positive_dependency_graph(program) -> nx.DiGraph:
    """Vertices are ground atoms; one edge head-atom -> positive-body-atom
    per ground rule (negated atoms contribute no edges)."""
    g = nx.DiGraph()
    for rule in _rules_of(program):
        for a in itertools.chain(rule.head, rule.body_pos, formula_atoms(rule.body_neg)):
            g.add_node(a)
        for h in rule.head:
            for b in rule.body_pos:
                g.add_edge(h, b)
    return g


def is_tight(program) -> bool:
    return nx.is_directed_acyclic_graph(positive_dependency_graph(program))


def loops(program, *, max_loops: int = DEFAULT_LOOP_CAP, all_subsets: bool = False) -> list:
    """All loops: nonempty atom sets inducing a strongly connected subgraph
    of the positive dependency graph (singletons always qualify).

    With ``all_subsets`` every nonempty subset of the atom universe is
    returned instead, matching the brute-force loop-formula criterion used
    as an oracle in tests.
    """
    g = positive_dependency_graph(program)
    atoms = sorted(g.nodes, key=str)
    if all_subsets:
        if len(atoms) > 12:
            raise LoopExplosion("all-subsets loop enumeration limited to 12 atoms")
        out = []
        for mask in range(1, 1 << len(atoms)):
            out.append(frozenset(a for i, a in enumerate(atoms) if mask >> i & 1))
        return out

    found = []
    for comp in nx.strongly_connected_components(g):
        members = sorted(comp, key=str)
        if len(members) == 1:
            continue
        sub = g.subgraph(members)
        for size in range(2, len(members) + 1):
            for combo in itertools.combinations(members, size):
                if nx.is_strongly_connected(sub.subgraph(combo)):
                    found.append(frozenset(combo))
                    if len(found) > max_loops:
                        raise LoopExplosion(f"more than {max_loops} loops")
    singles = [frozenset((a,)) for a in atoms]
    result = singles + found
    result.sort(key=lambda s: (len(s), sorted(str(a) for a in s)))
    return result


def external_support(program, loop: frozenset) -> Formula:
    """Disjunction over rules with a head atom in the loop and positive body
    disjoint from it; the empty disjunction is #false."""
    parts = []
    for rule in _rules_of(program):
        if not loop & set(rule.head):
            continue
        if loop & set(rule.body_pos):
            continue
        lits = [AtomF(b) for b in rule.body_pos]
        if rule.body_neg != TRUE:
            lits.append(rule.body_neg)
        lits.extend(Not(AtomF(b)) for b in rule.head if b not in loop)
        parts.append(conj(lits))
    return disj(parts)


def loop_formula(program, loop: frozenset) -> Formula:
    body = conj([AtomF(a) for a in sorted(loop, key=str)])
    return Implies(body, external_support(program, loop))


def completion_formulas(program, atoms=None) -> list:
    """One support formula per ground atom: the atom implies the disjunction,
    over rules with it in the head, of body plus the negations of the other
    head atoms.  Unsupported atoms get atom -> #false."""
    rules = _rules_of(program)
    if atoms is None:
        atoms = (
            list(ground_atoms(program))
            if isinstance(program, GroundProgram)
            else sorted({a for r in rules for a in itertools.chain(
                r.head, r.body_pos, formula_atoms(r.body_neg))}, key=str)
        )
    out = []
    for atom in atoms:
        supports = []
        for rule in rules:
            if atom not in rule.head:
                continue
            lits = [AtomF(b) for b in rule.body_pos]
            if rule.body_neg != TRUE:
                lits.append(rule.body_neg)
            lits.extend(Not(AtomF(h)) for h in rule.head if h != atom)
            supports.append(conj(lits))
        out.append(Implies(AtomF(atom), disj(supports)))
    return out


# ---------------------------------------------------------------------------
# Stable model enumeration


class StabilityChecker:
    """Loop-formula based stability test for one fixed ground program.

    Precompiles every loop formula over the possible-atom universe; checking
    a candidate is then a handful of bitmask evaluations.  Falls back to the
    reduct/minimality route if the program has too many loops.
    """

    def __init__(self, rules, atoms: list, *, max_loops: int = DEFAULT_LOOP_CAP):
        self.rules = _rules_of(rules)
        self.atoms = list(atoms)
        self.index = {a: i for i, a in enumerate(self.atoms)}
        try:
            all_loops = list(loops(self.rules, max_loops=max_loops))
            covered = set(positive_dependency_graph(self.rules).nodes)
            # atoms outside every rule still need their (empty) support checked
            all_loops.extend(
                frozenset({a}) for a in self.atoms if a not in covered
            )
            self._loop_checks = [
                compile_formula(loop_formula(self.rules, lp), self.index)
                for lp in all_loops
            ]
        except LoopExplosion:
            self._loop_checks = None

    def is_stable_mask(self, mask: int) -> bool:
        """Assumes the mask already satisfies every rule."""
        if self._loop_checks is not None:
            return all(fn(mask) for fn in self._loop_checks)
        interp = mask_to_interp(mask, self.atoms)
        return _is_minimal_fast(interp, reduct(self.rules, interp))


def enumerate_stable_models(program, *, max_atoms: int = DEFAULT_ATOM_CAP) -> list:
    """All stable models of a ground program, ascending by atom bitmask over
    the canonically ordered possible-atom universe."""
    rules = _rules_of(program)
    possible = possible_atoms(rules)
    universe = (
        [a for a in ground_atoms(program) if a in possible]
        if isinstance(program, GroundProgram)
        else sorted(possible, key=str)
    )
    if len(universe) > max_atoms:
        raise UniverseExplosion(
            f"{len(universe)} derivable atoms exceed the cap of {max_atoms}"
        )
    inner = restrict_rules(rules, possible)
    checker = StabilityChecker(inner, universe)
    models = []
    for mask in iter_constrained_masks(universe, inner):
        if checker.is_stable_mask(mask):
            models.append(mask_to_interp(mask, universe))
    return models
