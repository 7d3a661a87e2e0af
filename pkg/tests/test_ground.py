import pytest

from lpmln.core import (
    Atom,
    AtomF,
    Builtin,
    HARD,
    ModExpr,
    Not,
    Program,
    Rule,
    Signature,
    Var,
    WeightedRule,
    soft,
)
from lpmln.errors import GroundingExplosion
from lpmln.ground import (
    atom_universe,
    eval_builtin,
    ground_atoms,
    ground_program,
    ground_rule_instances,
    rule_variables,
    subst_atom,
    subst_formula,
)
from lpmln.textio import parse_path

import os

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def _sig():
    return Signature(
        domains={"d": ("x", "y"), "n": (1, 2, 3)},
        constants={"p": (("d",), None), "q": (("d", "d"), None), "c": (("d",), ("u", "v"))},
    )


def test_rule_variables():
    X, Y = Var("X", "d"), Var("Y", "d")
    rule = Rule(
        head=(Atom("p", (X,)),),
        body_pos=(Atom("q", (X, Y)),),
        body_neg=Not(AtomF(Atom("p", (Y,)))),
    )
    assert set(v.name for v in rule_variables(rule)) == {"X", "Y"}


def test_substitution():
    X = Var("X", "d")
    assert subst_atom(Atom("p", (X,)), {"X": "x"}) == Atom("p", ("x",))
    assert subst_atom(Atom("c", ("x",), X), {"X": "u"}) == Atom("c", ("x",), "u")
    f = Not(AtomF(Atom("p", (X,))))
    assert subst_formula(f, {"X": "y"}) == Not(AtomF(Atom("p", ("y",))))


def test_ground_rule_instances_cardinality():
    sig = _sig()
    X, Y = Var("X", "d"), Var("Y", "d")
    rule = Rule(head=(Atom("q", (X, Y)),))
    assert len(list(ground_rule_instances(sig, rule))) == 4
    rule_one = Rule(head=(Atom("p", (X,)),))
    assert len(list(ground_rule_instances(sig, rule_one))) == 2


def test_builtin_filtering():
    sig = _sig()
    N = Var("N", "n")
    rule = Rule(
        head=(Atom("p", ("x",)),),
        builtins=(Builtin("<", N, 3),),
    )
    assert len(list(ground_rule_instances(sig, rule))) == 2


def test_eval_builtin_mod():
    assert eval_builtin(Builtin("=", ModExpr(4, 2), 0), {})
    assert not eval_builtin(Builtin("=", ModExpr(5, 2), 0), {})
    assert eval_builtin(Builtin("!=", "x", "y"), {})
    assert eval_builtin(Builtin("<=", 2, 2), {})
    assert not eval_builtin(Builtin("<", 2, 2), {})
    n = Var("N", "n")
    assert eval_builtin(Builtin("=", ModExpr(n, 2), 0), {"N": 4})


def test_friends_ground_count():
    program = parse_path(os.path.join(CORPUS, "friends.lpmln"))
    gp = ground_program(program)
    # 2 facts + 9 weighted copies + 27 transitivity instances
    assert len(gp.rules) == 38


def test_ground_program_cap():
    program = parse_path(os.path.join(CORPUS, "friends.lpmln"))
    with pytest.raises(GroundingExplosion):
        ground_program(program, max_instances=10)


def test_atom_universe_and_ground_atoms():
    sig = _sig()
    universe = atom_universe(sig, [Atom("p", ("x",)), Atom("c", ("y",), "u")])
    assert Atom("p", ("x",)) in universe
    assert Atom("c", ("y",), "v") in universe
    program = Program(
        sig, (WeightedRule(HARD, Rule(head=(Atom("p", ("x",)),))),)
    )
    gp = ground_program(program)
    assert Atom("p", ("x",)) in ground_atoms(gp)


def test_grounding_keeps_weights():
    sig = _sig()
    X = Var("X", "d")
    program = Program(
        sig, (WeightedRule(soft(1.5), Rule(head=(Atom("p", (X,)),))),)
    )
    gp = ground_program(program)
    assert len(gp.rules) == 2
    assert all(wr.weight == soft(1.5) for wr in gp.rules)
