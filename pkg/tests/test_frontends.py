import math
import os
import random

import pytest

from lpmln.core import Atom, AtomF, HARD, Not, Program, Rule, Signature, soft
from lpmln.errors import (
    EmptySmDoublePrime,
    Inconsistent,
    NotTight,
    NotWellDefined,
    ValidationError,
    ZeroProbabilityDeclared,
)
from lpmln.frontends.asp import AspProgram, asp_stable_models, asp_to_lpmln
from lpmln.frontends.mln import completion, loop_augmented_mln, mln_to_lpmln
from lpmln.frontends.mvpp import (
    Declaration,
    MvppProgram,
    mvpp_direct_distribution,
    mvpp_to_lpmln,
)
from lpmln.frontends.plog import (
    fw_formula,
    plog_measure,
    plog_prob,
    plog_tau,
    plog_to_mvpp,
    plog_validate,
    possible_worlds,
)
from lpmln.frontends.problog import (
    ProbLogProgram,
    problog_distribution,
    problog_to_lpmln,
)
from lpmln.frontends.weak import (
    WeakConstraint,
    WeakProgram,
    optimal_stable_models,
    penalty_optimal,
    weak_to_lpmln,
)
from lpmln.ground import ground_program
from lpmln.infer import distribution, mln_distribution, prob_query
from lpmln.selftest import random_asp, support_gap
from lpmln.textio import parse_path

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def corpus(name):
    return parse_path(os.path.join(CORPUS, name))


def _keys(models):
    return sorted(sorted(str(a) for a in m) for m in models)


# ---------------------------------------------------------------------------
# ASP


def test_asp_translation_is_all_hard():
    asp = corpus("optimize.asp")
    translated = asp_to_lpmln(AspProgram(asp.signature, asp.rules))
    assert all(wr.weight.is_hard for wr in translated.rules)


def test_asp_stable_models_match_enumeration():
    rng = random.Random(21)
    for _ in range(30):
        asp = random_asp(rng, max_atoms=6, max_rules=8)
        via_distribution = distribution(ground_program(asp_to_lpmln(asp)))
        models = asp_stable_models(asp)
        if models:
            assert _keys(via_distribution.support()) == _keys(models)
        else:
            # with no stable model of the full program, the top tier drops
            assert via_distribution.max_hard_tier < len(asp.rules)


# ---------------------------------------------------------------------------
# Weak constraints


def test_weak_translation_weights():
    w = corpus("optimize.asp")
    translated = weak_to_lpmln(w)
    soft_rules = [wr for wr in translated.rules if not wr.weight.is_hard]
    assert sorted(wr.weight.soft for wr in soft_rules) == [-1.0, -1.0, -1.0]
    assert all(not wr.rule.head for wr in soft_rules)


def test_weak_optimum_agrees_with_penalty_oracle():
    rng = random.Random(22)
    checked = 0
    while checked < 30:
        asp = random_asp(rng, max_atoms=5, max_rules=6)
        atoms = [Atom(s) for s in asp.signature.constants]
        weak = tuple(
            WeakConstraint(Rule(body_pos=(a,)), rng.randint(1, 3))
            for a in atoms
            if rng.random() < 0.5
        )
        if not weak:
            continue
        program = WeakProgram(asp.signature, asp.rules, weak)
        if not asp_stable_models(asp):
            continue
        checked += 1
        assert _keys(optimal_stable_models(program)) == _keys(
            penalty_optimal(program)
        )


def test_weak_constraint_validation():
    with pytest.raises(ValidationError):
        WeakConstraint(Rule(body_pos=(Atom("a"),)), 0)
    with pytest.raises(ValidationError):
        WeakConstraint(Rule(head=(Atom("a"),)), 1)


# ---------------------------------------------------------------------------
# MLN


def test_concert_program_matches_closed_form():
    program = corpus("concert.lpmln")
    dist = distribution(ground_program(program))
    support = {frozenset(str(a) for a in k): v for k, v in dist.support().items()}
    assert abs(support[frozenset({"concertBooked", "cancelled"})] - 0.2) < 1e-9
    assert abs(support[frozenset({"concertBooked", "longDrive"})] - 0.8) < 1e-9


def test_smokers_mln_round_trip_distribution():
    mln = corpus("smokers.mln")
    direct = mln_distribution(mln)
    translated = distribution(ground_program(mln_to_lpmln(mln)))
    assert support_gap(direct, translated) < 1e-9


def test_completion_rejects_non_tight():
    program = corpus("friends.lpmln")
    gp = ground_program(program)
    with pytest.raises(NotTight):
        completion(gp)


def test_loop_augmented_mln_agrees_on_non_tight_program():
    from lpmln.textio import parse

    text = (
        "#dialect lpmln.\n"
        "#domain person = {a, b}.\n"
        "#var X, Y, Z : person.\n"
        "alpha : friend(a, b).\n"
        "1 : influences(X, Y) :- friend(X, Y).\n"
        "alpha : influences(X, Y) :- influences(X, Z), influences(Z, Y).\n"
    )
    gp = ground_program(parse("lpmln", text))
    mln = loop_augmented_mln(gp)
    assert support_gap(distribution(gp), mln_distribution(mln)) < 1e-9


def test_completion_on_tight_program():
    program = corpus("concert.lpmln")
    gp = ground_program(program)
    mln = completion(gp)
    assert support_gap(distribution(gp), mln_distribution(mln)) < 1e-9


# ---------------------------------------------------------------------------
# ProbLog


def test_problog_table_from_total_choices():
    program = corpus("coins.problog")
    dist = problog_distribution(program)
    support = {frozenset(str(a) for a in k): v for k, v in dist.support().items()}
    # 0.6 :: p, 0.3 :: q, r from either
    assert abs(support[frozenset()] - 0.4 * 0.7) < 1e-12
    assert abs(support[frozenset({"p", "r"})] - 0.6 * 0.7) < 1e-12
    assert abs(support[frozenset({"q", "r"})] - 0.4 * 0.3) < 1e-12
    assert abs(support[frozenset({"p", "q", "r"})] - 0.6 * 0.3) < 1e-12


def test_problog_extreme_probabilities_become_hard():
    sig = Signature(constants={"p": ((), None), "q": ((), None)})
    program = ProbLogProgram(sig, ((Atom("p"), 1.0), (Atom("q"), 0.0)), ())
    dist = problog_distribution(program)
    assert _keys(dist.support()) == [["p"]]
    translated = distribution(ground_program(problog_to_lpmln(program)))
    assert support_gap(dist, translated) < 1e-12


def test_problog_not_well_defined():
    sig = Signature(constants={"p": ((), None), "d": ((), None)})
    # d :- not d makes the total choice {} yield no stable model
    program = ProbLogProgram(
        sig,
        ((Atom("p"), 0.5),),
        (Rule(head=(Atom("d"),), body_neg=Not(AtomF(Atom("d")))),),
    )
    with pytest.raises(NotWellDefined):
        problog_distribution(program)


# ---------------------------------------------------------------------------
# MVPP


def test_mvpp_uniqueness_and_existence_enforced():
    program = corpus("win.mvpp")
    translated = mvpp_to_lpmln(program)
    dist = distribution(ground_program(translated))
    for interp in dist.support():
        outcomes = [a for a in interp if a.symbol == "outcome"]
        assert len(outcomes) == 1


def test_mvpp_direct_matches_translation():
    program = corpus("win.mvpp")
    direct = mvpp_direct_distribution(program)
    translated = distribution(ground_program(mvpp_to_lpmln(program)))
    assert support_gap(direct, translated) < 1e-9
    assert abs(direct.prob(AtomF(Atom("win"))) - 0.25) < 1e-9


def test_mvpp_declaration_validation():
    with pytest.raises(ValidationError):
        Declaration("c", (), ((0.5, "x"), (0.4, "y")))  # mass != 1
    with pytest.raises(ValidationError):
        Declaration("c", (), ((0.5, "x"), (0.5, "x")))  # duplicate value


def test_mvpp_zero_probability_and_empty_sm():
    sig = Signature(
        domains={"d": ("x", "y")}, constants={"c": ((), ("x", "y"))}
    )
    zero = MvppProgram(
        sig, (Declaration("c", (), ((0.0, "x"), (1.0, "y"))),), ()
    )
    with pytest.raises(ZeroProbabilityDeclared):
        mvpp_direct_distribution(zero)
    blocked = MvppProgram(
        sig,
        (Declaration("c", (), ((0.5, "x"), (0.5, "y"))),),
        (Rule(head=(), body_pos=(Atom("c", (), "x"),)),
         Rule(head=(), body_pos=(Atom("c", (), "y"),))),
    )
    with pytest.raises(EmptySmDoublePrime):
        mvpp_direct_distribution(blocked)


# ---------------------------------------------------------------------------
# P-log


def test_plog_validate_clean_on_dice():
    program = corpus("dice.plog")
    assert plog_validate(program) == []


def test_plog_measure_normalizes():
    program = corpus("dice.plog")
    measures = plog_measure(program)
    assert abs(sum(norm for _u, norm in measures.values()) - 1.0) < 1e-9


def test_plog_observation_conditions():
    program = corpus("dice.plog")
    text = open(os.path.join(CORPUS, "dice.plog"), encoding="utf-8").read()
    from lpmln.textio import parse

    observed = parse("plog", text + "obs(even(d1)).\n")
    p = plog_prob(observed, AtomF(Atom("roll", ("d1",), 6)))
    # P(roll=6 | even) = 0.25 / 0.55
    assert abs(p - 0.25 / 0.55) < 1e-9
    assert len(possible_worlds(observed)) == 18


def test_plog_do_overrides_probability():
    text = open(os.path.join(CORPUS, "dice.plog"), encoding="utf-8").read()
    from lpmln.textio import parse

    intervened = parse("plog", text + "do(roll(d1)=1).\n")
    p = plog_prob(intervened, AtomF(Atom("roll", ("d1",), 1)))
    assert abs(p - 1.0) < 1e-9
    p_even = plog_prob(intervened, AtomF(Atom("even", ("d2",), "t")))
    assert abs(p_even - 0.5) < 1e-9


def test_plog_tau_worlds_match_measure_keys():
    program = corpus("dice.plog")
    worlds = possible_worlds(program)
    assert len(worlds) == 36
    tau = plog_tau(program)
    assert tau.signature.constants  # translation carries a full signature


def test_plog_inconsistent_observation():
    text = open(os.path.join(CORPUS, "dice.plog"), encoding="utf-8").read()
    from lpmln.textio import parse

    bad = parse("plog", text + "obs(even(d1)).\nobs(~even(d1)).\n")
    with pytest.raises(Inconsistent):
        possible_worlds(bad)


def test_plog_fw_formula_probabilities():
    program = corpus("dice.plog")
    measures = plog_measure(program)
    dist = distribution(
        ground_program(mvpp_to_lpmln(plog_to_mvpp(program))), max_atoms=64
    )
    for world, (_u, norm) in list(measures.items())[:6]:
        assert abs(norm - dist.prob(fw_formula(program, world))) < 1e-9
