import pytest

from lpmln.core import (
    And,
    Atom,
    AtomF,
    FALSE,
    HARD,
    Implies,
    Not,
    Or,
    Program,
    Rule,
    Signature,
    SymbolicWeight,
    TRUE,
    Var,
    WeightedRule,
    atom_sort_key,
    choice_rule,
    compare_weights,
    conj,
    disj,
    is_negative,
    satisfies,
    soft,
)
from lpmln.errors import SignatureError, ValidationError

a, b, c = Atom("a"), Atom("b"), Atom("c")


def test_weight_kinds():
    assert HARD.is_hard
    assert not soft(1.5).is_hard
    assert soft(1.5).soft == 1.5


def test_symbolic_weight_order_is_lexicographic():
    low = SymbolicWeight(hard=1, soft=100.0)
    high = SymbolicWeight(hard=2, soft=-100.0)
    assert compare_weights(low, high) < 0
    assert compare_weights(high, low) > 0
    assert compare_weights(low, SymbolicWeight(hard=1, soft=100.0)) == 0


def test_symbolic_weight_zero_and_str():
    zero = SymbolicWeight.zero()
    assert str(zero) == "0"
    assert compare_weights(zero, SymbolicWeight(hard=0, soft=-1000.0)) < 0
    assert str(SymbolicWeight(hard=3, soft=0.0)) == "e^(3a)"
    assert str(SymbolicWeight(hard=3, soft=2.0)) == "e^(3a+2)"


def test_formula_satisfaction():
    interp = frozenset({a})
    assert satisfies(interp, AtomF(a))
    assert not satisfies(interp, AtomF(b))
    assert satisfies(interp, Or((AtomF(b), Not(AtomF(b)))))
    assert satisfies(interp, Implies(AtomF(b), AtomF(c)))
    assert satisfies(interp, And((TRUE, AtomF(a))))
    assert not satisfies(interp, FALSE)


def test_conj_disj_unwrap_singletons():
    assert conj([AtomF(a)]) == AtomF(a)
    assert disj([AtomF(a)]) == AtomF(a)
    assert conj([]) == TRUE
    assert disj([]) == FALSE


def test_is_negative():
    assert is_negative(Not(AtomF(a)))
    assert is_negative(conj([Not(AtomF(a)), Not(Not(AtomF(b)))]))
    assert not is_negative(AtomF(a))
    assert not is_negative(conj([AtomF(a), Not(AtomF(b))]))


def test_rule_as_formula():
    rule = Rule(head=(a,), body_pos=(b,), body_neg=Not(AtomF(c)))
    f = rule.as_formula()
    assert satisfies(frozenset({a, b}), f)
    assert satisfies(frozenset(), f)
    assert not satisfies(frozenset({b}), f)
    assert satisfies(frozenset({b, c}), f)


def test_choice_rule_shape():
    rule = choice_rule(a)
    assert rule.head == (a,)
    assert Not(Not(AtomF(a))) == rule.body_neg or Not(Not(AtomF(a))) in getattr(
        rule.body_neg, "parts", ()
    )


def test_signature_validation():
    sig = Signature(
        domains={"d": ("x", "y")},
        constants={"p": (("d",), None), "c": ((), ("x", "y"))},
    )
    sig.check_atom(Atom("p", ("x",)))
    sig.check_atom(Atom("c", (), "y"))
    with pytest.raises(SignatureError):
        sig.check_atom(Atom("q"))
    with pytest.raises(SignatureError):
        sig.check_atom(Atom("p", ("x", "y")))
    with pytest.raises(SignatureError):
        sig.check_atom(Atom("c", (), "z"))
    with pytest.raises(SignatureError):
        sig.check_atom(Atom("c"))
    with pytest.raises(SignatureError):
        sig.check_atom(Atom("p", ("x",), "x"))


def test_signature_rejects_bad_domains():
    with pytest.raises(ValidationError):
        Signature(domains={"d": ()})
    with pytest.raises(ValidationError):
        Signature(domains={"d": ("x", "x")})


def test_ground_keys_and_atoms_for_key():
    sig = Signature(
        domains={"d": ("x", "y")},
        constants={"c": (("d",), ("u", "v")), "p": ((), None)},
    )
    keys = list(sig.ground_keys())
    assert ("c", ("x",)) in keys and ("c", ("y",)) in keys and ("p", ()) in keys
    assert sig.atoms_for_key("c", ("x",)) == (
        Atom("c", ("x",), "u"),
        Atom("c", ("x",), "v"),
    )
    assert sig.atoms_for_key("p", ()) == (Atom("p"),)


def test_program_partitions():
    program = Program(
        Signature(constants={"a": ((), None), "b": ((), None)}),
        (
            WeightedRule(HARD, Rule(head=(a,))),
            WeightedRule(soft(1.0), Rule(head=(b,))),
        ),
    )
    assert len(program.hard_rules) == 1
    assert len(program.soft_rules) == 1
    assert len(program.unweighted) == 2


def test_atom_sort_key_orders_args_and_values():
    atoms = [Atom("b"), Atom("a", (2,)), Atom("a", (1,)), Atom("a", (1,), "v")]
    ordered = sorted(atoms, key=atom_sort_key)
    assert ordered[0].symbol == "a"
    assert ordered[-1].symbol == "b"


def test_var_is_not_ground():
    assert not Atom("p", (Var("X", "d"),)).is_ground
    assert not Atom("c", (), Var("X", "d")).is_ground
    assert Atom("p", ("x",)).is_ground
