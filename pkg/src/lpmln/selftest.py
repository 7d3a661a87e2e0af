"""Randomized dual-evaluation properties with seeded generators.

Every property compares two independently implemented routes to the same
distribution (translation vs direct semantics) on small random programs.
On a violation, the failing case is shrunk by greedy rule removal and
printed as parseable source text.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    Atom,
    AtomF,
    HARD,
    Implies,
    Not,
    Or,
    Program,
    Rule,
    Signature,
    WeightedRule,
    conj,
    satisfies,
    soft,
)
from .errors import (
    EmptySmDoublePrime,
    NoHardConsistentModel,
    NotWellDefined,
    PropertyViolation,
)
from .frontends.asp import AspProgram, asp_stable_models, asp_to_lpmln
from .frontends.mln import completion, loop_augmented_mln, mln_to_lpmln
from .frontends.mvpp import Declaration, MvppProgram, mvpp_direct_distribution, mvpp_to_lpmln
from .frontends.problog import ProbLogProgram, problog_distribution, problog_to_lpmln
from .ground import ground_program
from .infer import MlnProgram, distribution, mln_distribution, soft_only_distribution
from .stable import enumerate_stable_models, is_stable_model, is_tight
from .textio import print_program

TOL = 1e-9


# ---------------------------------------------------------------------------
# Generators


def _signature(n_atoms: int) -> Signature:
    return Signature(constants={f"a{i + 1}": ((), None) for i in range(n_atoms)})


def _atoms(sig: Signature):
    return [Atom(s) for s in sig.constants]


def _random_rule(rng: random.Random, atoms, *, max_head=2) -> Rule:
    pool = list(atoms)
    head = tuple(rng.sample(pool, rng.randint(0, min(max_head, len(pool)))))
    rest = [a for a in pool if a not in head]
    pos = tuple(rng.sample(rest, rng.randint(0, min(2, len(rest)))))
    rem = [a for a in rest if a not in pos]
    neg = []
    for a in rng.sample(rem, rng.randint(0, min(2, len(rem)))):
        if rng.random() < 0.2:
            neg.append(Not(Not(AtomF(a))))
        else:
            neg.append(Not(AtomF(a)))
    return Rule(head=head, body_pos=pos, body_neg=conj(neg))


def random_asp(rng: random.Random, *, max_atoms=8, max_rules=10) -> AspProgram:
    sig = _signature(rng.randint(2, max_atoms))
    atoms = _atoms(sig)
    rules = tuple(
        _random_rule(rng, atoms) for _ in range(rng.randint(1, max_rules))
    )
    return AspProgram(sig, rules)


def random_lpmln(rng: random.Random, *, max_atoms=5, max_rules=7) -> Program:
    sig = _signature(rng.randint(2, max_atoms))
    atoms = _atoms(sig)
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        w = HARD if rng.random() < 0.4 else soft(round(rng.uniform(-2.0, 2.0), 3))
        rules.append(WeightedRule(w, _random_rule(rng, atoms)))
    return Program(sig, tuple(rules))


def _random_formula(rng: random.Random, atoms, depth=2):
    if depth == 0 or rng.random() < 0.4:
        f = AtomF(rng.choice(atoms))
        return Not(f) if rng.random() < 0.4 else f
    op = rng.choice(("and", "or", "implies", "not"))
    if op == "not":
        return Not(_random_formula(rng, atoms, depth - 1))
    lhs = _random_formula(rng, atoms, depth - 1)
    rhs = _random_formula(rng, atoms, depth - 1)
    if op == "and":
        return conj([lhs, rhs])
    if op == "or":
        return Or((lhs, rhs))
    return Implies(lhs, rhs)


def random_mln(rng: random.Random, *, max_atoms=4, max_formulas=6) -> MlnProgram:
    sig = _signature(rng.randint(2, max_atoms))
    atoms = _atoms(sig)
    formulas = []
    for _ in range(rng.randint(1, max_formulas)):
        w = HARD if rng.random() < 0.2 else soft(round(rng.uniform(-2.0, 2.0), 3))
        formulas.append((w, _random_formula(rng, atoms)))
    return MlnProgram(sig, tuple(formulas))


def random_problog(rng: random.Random, *, max_facts=4, max_rules=4) -> ProbLogProgram:
    n_facts = rng.randint(1, max_facts)
    n_derived = rng.randint(0, 2)
    names = [f"a{i + 1}" for i in range(n_facts)] + [
        f"d{i + 1}" for i in range(n_derived)
    ]
    sig = Signature(constants={n: ((), None) for n in names})
    facts = tuple(
        (Atom(f"a{i + 1}"), round(rng.uniform(0.1, 0.9), 3)) for i in range(n_facts)
    )
    atoms = [Atom(n) for n in names]
    rules = []
    for _ in range(rng.randint(0, max_rules) if n_derived else 0):
        head = Atom(f"d{rng.randint(1, n_derived)}")
        body_pool = [a for a in atoms if a != head]
        pos = tuple(rng.sample(body_pool, rng.randint(0, min(2, len(body_pool)))))
        rem = [a for a in body_pool if a not in pos]
        neg = conj(
            [Not(AtomF(a)) for a in rng.sample(rem, rng.randint(0, min(1, len(rem))))]
        )
        rules.append(Rule(head=(head,), body_pos=pos, body_neg=neg))
    return ProbLogProgram(sig, facts, tuple(rules))


def random_mvpp(rng: random.Random, *, max_decls=2, max_rules=3) -> MvppProgram:
    n_decls = rng.randint(1, max_decls)
    domains, constants, decls = {}, {}, []
    for i in range(n_decls):
        k = rng.randint(2, 3)
        values = tuple(f"v{j + 1}" for j in range(k))
        domains[f"dom{i + 1}"] = values
        constants[f"c{i + 1}"] = ((), values)
        raw = [rng.uniform(0.05, 1.0) for _ in range(k)]
        total = sum(raw)
        probs = [round(r / total, 6) for r in raw]
        probs[-1] = 1.0 - sum(probs[:-1])
        decls.append(Declaration(f"c{i + 1}", (), tuple(zip(probs, values))))
    n_aux = rng.randint(1, 2)
    for i in range(n_aux):
        constants[f"q{i + 1}"] = ((), None)
    sig = Signature(domains=domains, constants=constants)
    mv_atoms = [
        Atom(d.symbol, (), v) for d in decls for _p, v in d.items
    ]
    aux = [Atom(f"q{i + 1}") for i in range(n_aux)]
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        head = rng.choice(aux)
        pos = tuple(rng.sample(mv_atoms, rng.randint(1, 2)))
        neg = conj(
            [Not(AtomF(a)) for a in rng.sample(aux, rng.randint(0, 1)) if a != head]
        )
        rules.append(Rule(head=(head,), body_pos=pos, body_neg=neg))
    return MvppProgram(sig, tuple(decls), tuple(rules))


# ---------------------------------------------------------------------------
# Comparison helpers


def support_gap(d1, d2) -> float:
    s1, s2 = d1.support(), d2.support()
    keys = set(s1) | set(s2)
    if not keys:
        return 0.0
    return max(abs(s1.get(k, 0.0) - s2.get(k, 0.0)) for k in keys)


def _show_interp(interp) -> str:
    return "{" + ", ".join(sorted(str(a) for a in interp)) + "}"


# ---------------------------------------------------------------------------
# Properties


@dataclass
class Property:
    name: str
    generate: Callable[[random.Random], object]
    accept: Callable[[object], bool]  # precondition filter
    violation: Callable[[object], Optional[str]]
    shrink: Callable[[object], list] = field(default=lambda case: [])
    show: Callable[[object], str] = field(default=lambda case: repr(case))


def _drop_one_rule(program):
    out = []
    rules = program.rules
    for i in range(len(rules)):
        reduced = rules[:i] + rules[i + 1:]
        if not reduced:
            continue
        out.append(type(program)(program.signature, reduced))
    return out


def _check_asp_uniform(asp: AspProgram) -> Optional[str]:
    models = asp_stable_models(asp)
    d = distribution(ground_program(asp_to_lpmln(asp)))
    expected = {frozenset(m): 1.0 / len(models) for m in models}
    got = d.support()
    keys = set(expected) | set(got)
    gap = max(abs(expected.get(k, 0.0) - got.get(k, 0.0)) for k in keys)
    if gap > TOL:
        return f"distribution deviates from uniform by {gap:.3g}"
    return None


def _check_mln(mln: MlnProgram) -> Optional[str]:
    direct = mln_distribution(mln)
    translated = distribution(ground_program(mln_to_lpmln(mln)))
    gap = support_gap(direct, translated)
    if gap > TOL:
        return f"translated and direct distributions differ by {gap:.3g}"
    return None


def _has_hard_consistent(program: Program) -> bool:
    try:
        soft_only_distribution(ground_program(program))
        return True
    except NoHardConsistentModel:
        return False


def _check_completion(program: Program) -> Optional[str]:
    gp = ground_program(program)
    gap = support_gap(distribution(gp), mln_distribution(completion(gp)))
    if gap > TOL:
        return f"completion distribution differs by {gap:.3g}"
    return None


def _check_loops(program: Program) -> Optional[str]:
    gp = ground_program(program)
    gap = support_gap(distribution(gp), mln_distribution(loop_augmented_mln(gp)))
    if gap > TOL:
        return f"loop-augmented distribution differs by {gap:.3g}"
    return None


def _check_soft_only(program: Program) -> Optional[str]:
    gp = ground_program(program)
    gap = support_gap(distribution(gp), soft_only_distribution(gp))
    if gap > TOL:
        return f"soft-only distribution differs by {gap:.3g}"
    return None


def _problog_well_defined(p: ProbLogProgram) -> bool:
    try:
        problog_distribution(p)
        return True
    except NotWellDefined:
        return False


def _check_problog(p: ProbLogProgram) -> Optional[str]:
    direct = problog_distribution(p)
    translated = distribution(ground_program(problog_to_lpmln(p)))
    gap = support_gap(direct, translated)
    if gap > TOL:
        return f"translated and direct distributions differ by {gap:.3g}"
    return None


def _mvpp_nonempty(m: MvppProgram) -> bool:
    try:
        mvpp_direct_distribution(m)
        return True
    except EmptySmDoublePrime:
        return False


def _check_mvpp(m: MvppProgram) -> Optional[str]:
    direct = mvpp_direct_distribution(m)
    translated = distribution(ground_program(mvpp_to_lpmln(m)))
    gap = support_gap(direct, translated)
    if gap > TOL:
        return f"translated and direct distributions differ by {gap:.3g}"
    return None


def _shrink_mvpp(m: MvppProgram):
    out = []
    for i in range(len(m.rules)):
        out.append(
            MvppProgram(m.signature, m.declarations, m.rules[:i] + m.rules[i + 1:])
        )
    return out


def _shrink_problog(p: ProbLogProgram):
    out = []
    for i in range(len(p.rules)):
        out.append(
            ProbLogProgram(p.signature, p.prob_facts, p.rules[:i] + p.rules[i + 1:])
        )
    return out


# -- the subset/satisfaction implication on stability


def _gen_stability_case(rng: random.Random):
    program = random_asp(rng, max_atoms=8, max_rules=10)
    rules = program.rules
    sub = tuple(r for r in rules if rng.random() < 0.6)
    atoms = _atoms(program.signature)
    if rng.random() < 0.5:
        models = enumerate_stable_models(sub) if sub else [frozenset()]
        if not models:
            return None
        interp = rng.choice(models)
    else:
        interp = frozenset(a for a in atoms if rng.random() < 0.4)
    return (program, sub, interp)


def _check_stability_case(case) -> Optional[str]:
    program, sub, interp = case
    if not is_stable_model(sub, interp):
        return None
    if not all(satisfies(interp, r.as_formula()) for r in program.rules):
        return None
    if not is_stable_model(program.rules, interp):
        return (
            "interpretation is stable for the subprogram and satisfies the "
            "full program, but is not stable for it"
        )
    return None


def _show_stability_case(case) -> str:
    program, sub, interp = case
    return (
        print_program(program)
        + "% subprogram:\n"
        + "".join("%   " + str(r) + "\n" for r in sub)
        + "% interpretation: "
        + _show_interp(interp)
    )


def _shrink_stability_case(case):
    program, sub, interp = case
    out = []
    for i in range(len(program.rules)):
        reduced = program.rules[:i] + program.rules[i + 1:]
        if not reduced:
            continue
        out.append(
            (
                AspProgram(program.signature, reduced),
                tuple(r for r in sub if r in reduced),
                interp,
            )
        )
    return out


PROPERTIES = (
    Property(
        name="asp-uniform",
        generate=lambda rng: random_asp(rng),
        accept=lambda p: bool(asp_stable_models(p)),
        violation=_check_asp_uniform,
        shrink=_drop_one_rule,
        show=print_program,
    ),
    Property(
        name="mln-translation",
        generate=lambda rng: random_mln(rng),
        accept=lambda m: True,
        violation=_check_mln,
        shrink=lambda m: [
            MlnProgram(m.signature, m.formulas[:i] + m.formulas[i + 1:])
            for i in range(len(m.formulas))
            if len(m.formulas) > 1
        ],
        show=print_program,
    ),
    Property(
        name="completion-tight",
        generate=lambda rng: random_lpmln(rng),
        accept=lambda p: is_tight(ground_program(p).unweighted)
        and _has_hard_consistent(p),
        violation=_check_completion,
        shrink=_drop_one_rule,
        show=print_program,
    ),
    Property(
        name="loop-augmented",
        generate=lambda rng: random_lpmln(rng),
        accept=_has_hard_consistent,
        violation=_check_loops,
        shrink=_drop_one_rule,
        show=print_program,
    ),
    Property(
        name="problog-translation",
        generate=lambda rng: random_problog(rng),
        accept=_problog_well_defined,
        violation=_check_problog,
        shrink=_shrink_problog,
        show=print_program,
    ),
    Property(
        name="mvpp-translation",
        generate=lambda rng: random_mvpp(rng),
        accept=_mvpp_nonempty,
        violation=_check_mvpp,
        shrink=_shrink_mvpp,
        show=print_program,
    ),
    Property(
        name="soft-only",
        generate=lambda rng: random_lpmln(rng),
        accept=_has_hard_consistent,
        violation=_check_soft_only,
        shrink=_drop_one_rule,
        show=print_program,
    ),
    Property(
        name="stability-implication",
        generate=_gen_stability_case,
        accept=lambda case: True,
        violation=_check_stability_case,
        shrink=_shrink_stability_case,
        show=_show_stability_case,
    ),
)

PROPERTY_NAMES = tuple(p.name for p in PROPERTIES)


# ---------------------------------------------------------------------------
# Runner


@dataclass
class PropertyResult:
    name: str
    runs: int
    rejected: int
    counterexample: Optional[str] = None
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def run_property(prop: Property, *, seed=0, n=200, max_attempts_factor=50) -> PropertyResult:
    rng = random.Random(f"{seed}:{prop.name}")
    runs = rejected = 0
    attempts = 0
    limit = n * max_attempts_factor
    while runs < n and attempts < limit:
        attempts += 1
        case = prop.generate(rng)
        if case is None or not prop.accept(case):
            rejected += 1
            continue
        runs += 1
        message = prop.violation(case)
        if message is not None:
            case, message = _shrink_case(prop, case, message)
            return PropertyResult(
                prop.name, runs, rejected, prop.show(case), message
            )
    return PropertyResult(prop.name, runs, rejected)


def _shrink_case(prop: Property, case, message):
    changed = True
    while changed:
        changed = False
        for candidate in prop.shrink(case):
            if not prop.accept(candidate):
                continue
            new_message = prop.violation(candidate)
            if new_message is not None:
                case, message = candidate, new_message
                changed = True
                break
    return case, message


def selftest(seed=0, n=200, *, names=None, raise_on_failure=False) -> list:
    """Runs n accepted instances of every property; deterministic per seed."""
    results = []
    for prop in PROPERTIES:
        if names is not None and prop.name not in names:
            continue
        result = run_property(prop, seed=seed, n=n)
        results.append(result)
        if raise_on_failure and not result.ok:
            raise PropertyViolation(
                result.name, result.message, result.counterexample
            )
    return results
