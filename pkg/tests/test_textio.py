import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpmln.core import (
    And,
    Atom,
    AtomF,
    FALSE,
    Implies,
    Not,
    Or,
    Signature,
    TRUE,
    satisfies,
)
from lpmln.errors import ParseError, ValidationError
from lpmln.selftest import (
    random_asp,
    random_lpmln,
    random_mln,
    random_mvpp,
    random_problog,
)
from lpmln.textio import (
    format_formula,
    parse,
    parse_path,
    parse_query,
    print_program,
    program_to_json,
    tokenize,
)

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


# ---------------------------------------------------------------------------
# Round trips


@pytest.mark.parametrize(
    "generator, dialect",
    [
        (random_lpmln, "lpmln"),
        (random_asp, "asp"),
        (random_mln, "mln"),
        (random_problog, "problog"),
        (random_mvpp, "mvpp"),
    ],
)
def test_generated_round_trips(generator, dialect):
    rng = random.Random(f"roundtrip:{dialect}")
    for _ in range(60):
        program = generator(rng)
        text = print_program(program)
        assert parse(dialect, text) == program, text


@pytest.mark.parametrize(
    "name",
    [
        "birds.lpmln",
        "birds_soft.lpmln",
        "friends.lpmln",
        "concert.lpmln",
        "optimize.asp",
        "coins.problog",
        "win.mvpp",
        "dice.plog",
        "smokers.mln",
    ],
)
def test_corpus_round_trips(name):
    program = parse_path(os.path.join(CORPUS, name))
    text = print_program(program)
    dialect = text.splitlines()[0].split()[1].rstrip(".")
    assert parse(dialect, text) == program


# ---------------------------------------------------------------------------
# Formulas and queries


def _atoms_strategy():
    return st.sampled_from([AtomF(Atom("a1")), AtomF(Atom("a2")), AtomF(Atom("a3"))])


def _formula_strategy():
    return st.recursive(
        _atoms_strategy() | st.just(TRUE) | st.just(FALSE),
        lambda children: st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda p: And(p)),
            st.tuples(children, children).map(lambda p: Or(p)),
            st.tuples(children, children).map(lambda p: Implies(*p)),
        ),
        max_leaves=8,
    )


SIG3 = Signature(constants={f"a{i}": ((), None) for i in (1, 2, 3)})
ATOMS3 = [Atom(f"a{i}") for i in (1, 2, 3)]


@settings(max_examples=200, deadline=None)
@given(_formula_strategy())
def test_formula_print_parse_preserves_semantics(f):
    text = format_formula(f)
    parsed = parse_query(text, SIG3)
    for mask in range(8):
        interp = frozenset(a for i, a in enumerate(ATOMS3) if mask >> i & 1)
        assert satisfies(interp, parsed) == satisfies(interp, f)
    # printing is idempotent after one normalization pass
    again = parse_query(format_formula(parsed), SIG3)
    assert again == parsed


def test_query_connective_aliases():
    sig = SIG3
    assert parse_query("a1 & a2", sig) == parse_query("a1, a2", sig)
    assert parse_query("a1 | a2", sig) == parse_query("a1; a2", sig)
    assert parse_query("not a1", sig) == parse_query("~a1", sig)
    f = parse_query("a1 -> a2 -> a3", sig)
    assert f == Implies(AtomF(Atom("a1")), Implies(AtomF(Atom("a2")), AtomF(Atom("a3"))))


def test_query_checks_signature():
    from lpmln.errors import SignatureError

    with pytest.raises((ParseError, SignatureError)):
        parse_query("a1(x)", SIG3)


def test_query_bare_mv_atom_reads_true_value():
    sig = Signature(
        domains={"boolean": ("t", "f")},
        constants={"c": ((), ("t", "f"))},
    )
    assert parse_query("c", sig) == AtomF(Atom("c", (), "t"))
    assert parse_query("c=f", sig) == AtomF(Atom("c", (), "f"))


# ---------------------------------------------------------------------------
# Parse errors


def test_parse_error_has_span():
    with pytest.raises(ParseError) as exc:
        parse("lpmln", "a :- \n  @b.")
    assert exc.value.line == 2
    assert "@" in str(exc.value)


def test_undeclared_variable_is_an_error():
    with pytest.raises(ParseError):
        parse("lpmln", "p(X).")


def test_arity_clash_is_an_error():
    with pytest.raises(ValidationError):
        parse("lpmln", "p(x). p(x, y).")


def test_unknown_dialect():
    with pytest.raises(ValidationError):
        parse("prolog", "a.")


def test_missing_dot_reports_position():
    with pytest.raises(ParseError) as exc:
        parse("lpmln", "a :- b")
    assert exc.value.line == 1


# ---------------------------------------------------------------------------
# Misc structure


def test_tokenize_comments_and_numbers():
    toks = tokenize("a. % trailing\n1.5 0.25 3")
    kinds = [t.kind for t in toks]
    assert kinds == ["ident", ".", "number", "number", "number", "eof"]


def test_integer_range_domain():
    program = parse("lpmln", "#domain n = 2..4.\n#var X : n.\np(X).")
    assert program.signature.domains["n"] == (2, 3, 4)
    assert len(program.rules) == 1


def test_choice_rule_round_trip():
    program = parse("lpmln", "{a} :- not b.")
    text = print_program(program)
    assert "{a}" in text
    assert parse("lpmln", text) == program


def test_weight_defaults_to_hard():
    program = parse("lpmln", "a.")
    assert program.rules[0].weight.is_hard


def test_negative_weight():
    program = parse("lpmln", "-1.5 : a.")
    assert program.rules[0].weight.soft == -1.5


def test_json_export_schema():
    program = parse("lpmln", "1 : a :- b, not c.")
    data = program_to_json(program)
    assert list(data) == ["rules"]
    rule = data["rules"][0]
    assert rule["weight"] == 1.0
    assert rule["head"] == [{"symbol": "a", "args": []}]
    assert rule["pos"] == [{"symbol": "b", "args": []}]
    assert rule["neg"]["op"] == "not"
    hard = program_to_json(parse("lpmln", "a."))
    assert hard["rules"][0]["weight"] == "alpha"


def test_dialect_header_wins():
    text = "#dialect problog.\n0.5 :: a.\n"
    program = parse("problog", text)
    assert program.prob_facts[0][1] == 0.5
