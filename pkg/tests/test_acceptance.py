"""Acceptance gate: one test per shipped criterion, pinned tolerances."""

import math
import os
import time

import pytest

from lpmln import parse_path, parse_query
from lpmln.core import Atom, AtomF, Program, WeightedRule, soft
from lpmln.errors import NoHardConsistentModel
from lpmln.frontends.mvpp import mvpp_to_lpmln
from lpmln.frontends.plog import (
    fw_formula,
    plog_measure,
    plog_prob,
    plog_to_mvpp,
)
from lpmln.frontends.problog import problog_distribution, problog_to_lpmln
from lpmln.frontends.weak import optimal_stable_models
from lpmln.ground import ground_program
from lpmln.infer import distribution, prob_query, soft_only_distribution
from lpmln.selftest import PROPERTIES, run_property

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")

TOL = 1e-9
MARGINAL_TOL = 1e-4


def corpus(name):
    return parse_path(os.path.join(CORPUS, name))


def _report(criterion, detail):
    print(f"PASS criterion {criterion}: {detail}", flush=True)


def _property(name):
    return next(p for p in PROPERTIES if p.name == name)


def _interp_key(interp):
    return frozenset(str(a) for a in interp)


def test_criterion_01_birds_full_table():
    started = time.perf_counter()
    program = corpus("birds.lpmln")
    dist = distribution(ground_program(program), list_all=True)
    b, r, m = "bird(jo)", "residentBird(jo)", "migratoryBird(jo)"
    expected = {
        frozenset(): ({1, 2, 3}, "e^(3a)", 0.0),
        frozenset({r}): ({2, 3, 4}, "e^(3a)", 0.0),
        frozenset({m}): ({1, 3, 5}, "e^(3a)", 0.0),
        frozenset({b}): ({1, 2, 3}, "0", 0.0),
        frozenset({r, b}): ({1, 2, 3, 4}, "e^(4a)", 1 / 3),
        frozenset({m, b}): ({1, 2, 3, 5}, "e^(4a)", 1 / 3),
        frozenset({r, m}): ({4, 5}, "e^(2a)", 0.0),
        frozenset({r, m, b}): ({1, 2, 4, 5}, "e^(4a)", 1 / 3),
    }
    assert len(dist.entries) == 8
    for entry in dist.entries:
        satisfied, weight, prob = expected[_interp_key(entry.interp)]
        assert {i + 1 for i in entry.satisfied} == satisfied
        assert str(entry.weight) == weight
        assert abs(entry.prob - prob) <= TOL
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _report(1, f"8-row table exact, {elapsed:.3f}s")


def test_criterion_02_birds_soft_weights():
    program = corpus("birds_soft.lpmln")
    gp = ground_program(program)
    dist = distribution(gp)
    z = math.e**2 + math.e + 1
    b, r, m = "bird(jo)", "residentBird(jo)", "migratoryBird(jo)"
    support = {_interp_key(k): v for k, v in dist.support().items()}
    assert set(support) == {
        frozenset({r, b}),
        frozenset({m, b}),
        frozenset(),
    }
    assert abs(support[frozenset({r, b})] - math.e**2 / z) <= TOL
    assert abs(support[frozenset({m, b})] - math.e / z) <= TOL
    assert abs(support[frozenset()] - 1 / z) <= TOL
    p_bird = prob_query(gp, AtomF(Atom("bird", ("jo",))))
    assert abs(p_bird - 0.9100) <= MARGINAL_TOL
    _report(2, f"support shifted to the empty set, P(bird) = {p_bird:.6f}")


def test_criterion_03_friends_marginals():
    program = corpus("friends.lpmln")
    gp = ground_program(program)

    def marginals(g):
        return [
            prob_query(g, parse_query(q, program.signature))
            for q in (
                "influences(a, b)",
                "influences(b, c)",
                "influences(a, c)",
            )
        ]

    base = marginals(gp)
    assert abs(base[0] - 0.7311) <= MARGINAL_TOL
    assert abs(base[1] - 0.7311) <= MARGINAL_TOL
    assert abs(base[2] - 0.5344) <= MARGINAL_TOL
    boosted = Program(
        program.signature,
        tuple(
            WeightedRule(soft(2.0), wr.rule) if wr.weight == soft(1.0) else wr
            for wr in program.rules
        ),
    )
    raised = marginals(ground_program(boosted))
    assert all(hi > lo for hi, lo in zip(raised, base))
    _report(3, f"marginals {base[0]:.4f}/{base[1]:.4f}/{base[2]:.4f}, monotone in the weight")


def test_criterion_04_weak_constraints():
    program = corpus("optimize.asp")
    optimal = optimal_stable_models(program)
    assert [_interp_key(m) for m in optimal] == [frozenset({"a"})]
    from lpmln.frontends.weak import weak_to_lpmln

    dist = distribution(ground_program(weak_to_lpmln(program)))
    support = {_interp_key(k): v for k, v in dist.support().items()}
    z = math.exp(-1) + math.exp(-2)
    assert abs(support[frozenset({"a"})] - math.exp(-1) / z) <= MARGINAL_TOL
    assert abs(support[frozenset({"b", "c"})] - math.exp(-2) / z) <= MARGINAL_TOL
    _report(4, "optimal model {a}, normalized weights 0.7311/0.2689")


def test_criterion_05_asp_uniform_property():
    started = time.perf_counter()
    result = run_property(_property("asp-uniform"), seed=7, n=200)
    assert result.ok, f"{result.message}\n{result.counterexample}"
    assert result.runs == 200
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    _report(5, f"200 random programs uniform over stable models, {elapsed:.1f}s")


def test_criterion_06_mln_translation_property():
    result = run_property(_property("mln-translation"), seed=7, n=200)
    assert result.ok, f"{result.message}\n{result.counterexample}"
    assert result.runs == 200
    _report(6, "200 random weighted-formula programs agree with the translation")


def test_criterion_07_completion_and_loop_properties():
    result = run_property(_property("completion-tight"), seed=7, n=200)
    assert result.ok, f"{result.message}\n{result.counterexample}"
    assert result.runs == 200
    loops_result = run_property(_property("loop-augmented"), seed=7, n=200)
    assert loops_result.ok, f"{loops_result.message}\n{loops_result.counterexample}"
    assert loops_result.runs == 200
    _report(7, "completion on tight programs and loop formulas on arbitrary ones")


def test_criterion_08_problog():
    program = corpus("coins.problog")
    r = AtomF(Atom("r"))
    direct = problog_distribution(program).prob(r)
    translated = prob_query(ground_program(problog_to_lpmln(program)), r)
    assert abs(direct - 0.72) <= TOL
    assert abs(translated - 0.72) <= TOL
    result = run_property(_property("problog-translation"), seed=7, n=200)
    assert result.ok, f"{result.message}\n{result.counterexample}"
    assert result.runs == 200
    _report(8, "P(r) = 0.72 by both routes; 200 random programs agree")


def test_criterion_09_soft_only():
    result = run_property(_property("soft-only"), seed=7, n=200)
    assert result.ok, f"{result.message}\n{result.counterexample}"
    birds = ground_program(corpus("birds.lpmln"))
    with pytest.raises(NoHardConsistentModel):
        soft_only_distribution(birds)
    _report(9, "soft-only equals full distribution; birds raises as required")


def test_criterion_10_mvpp():
    result = run_property(_property("mvpp-translation"), seed=7, n=100)
    assert result.ok, f"{result.message}\n{result.counterexample}"
    assert result.runs == 100
    program = corpus("win.mvpp")
    dist = distribution(ground_program(mvpp_to_lpmln(program)))
    p_win = dist.prob(AtomF(Atom("win")))
    assert abs(p_win - 0.25) <= TOL
    _report(10, f"100 random programs agree; P(win) = {p_win:.9f}")


def test_criterion_11_plog_dice():
    started = time.perf_counter()
    program = corpus("dice.plog")
    measures = plog_measure(program)
    assert len(measures) == 36
    roll_d1_six = Atom("roll", ("d1",), 6)
    cited = [
        (w, unnorm)
        for w, (unnorm, _norm) in measures.items()
        if roll_d1_six in w
    ]
    assert cited and all(unnorm == 1 / 24 for _w, unnorm in cited)
    even_d1 = AtomF(Atom("even", ("d1",), "t"))
    direct = plog_prob(program, even_d1)
    translated_dist = distribution(
        ground_program(mvpp_to_lpmln(plog_to_mvpp(program))), max_atoms=64
    )
    translated = translated_dist.prob(even_d1)
    assert abs(direct - translated) <= TOL
    for world, (_unnorm, norm) in measures.items():
        assert abs(norm - translated_dist.prob(fw_formula(program, world))) <= TOL
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    _report(11, f"36 worlds, measure 1/24 exact, both routes agree, {elapsed:.1f}s")


def test_criterion_12_stability_implication():
    result = run_property(_property("stability-implication"), seed=7, n=500)
    assert result.ok, f"{result.message}\n{result.counterexample}"
    assert result.runs == 500
    _report(12, "500 subprogram/interpretation triples, zero violations")
