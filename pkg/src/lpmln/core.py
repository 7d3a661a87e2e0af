"""Shared vocabulary: atoms, formulas, rules, programs, weights.

Atoms are either plain Boolean atoms (``value`` is None) or multi-valued
atoms ``c(args)=v`` whose constant carries a declared finite value domain.
All values here are immutable; every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import total_ordering
from typing import Iterable, Mapping, Optional, Union

from .errors import SignatureError, ValidationError

# Ground values are identifiers or integers.
Value = Union[str, int]

BOOLEAN_DOMAIN = ("t", "f")


@dataclass(frozen=True)
class Var:
    """A typed variable; ``domain`` names a declared finite sort."""

    name: str
    domain: str

    def __str__(self):
        return self.name


Term = Union[Value, Var]


@dataclass(frozen=True)
class Atom:
    """``symbol(args)`` or ``symbol(args)=value``; ``value`` None means a
    plain Boolean atom (read as true when the atom is in the interpretation)."""

    symbol: str
    args: tuple = ()
    value: Optional[Term] = None

    @property
    def key(self):
        """The (symbol, args) pair naming the underlying constant."""
        return (self.symbol, self.args)

    @property
    def is_ground(self):
        if any(isinstance(a, Var) for a in self.args):
            return False
        return not isinstance(self.value, Var)

    def __str__(self):
        base = self.symbol
        if self.args:
            base += "(" + ",".join(str(a) for a in self.args) + ")"
        if self.value is None:
            return base
        return f"{base}={self.value}"


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Formula):
    def __str__(self):
        return "#true"


@dataclass(frozen=True)
class Bot(Formula):
    def __str__(self):
        return "#false"


TRUE = Top()
FALSE = Bot()


@dataclass(frozen=True)
class AtomF(Formula):
    atom: Atom

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def __str__(self):
        return f"not {_wrap(self.arg)}"


@dataclass(frozen=True)
class And(Formula):
    parts: tuple

    def __str__(self):
        return " & ".join(_wrap(p) for p in self.parts)


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple

    def __str__(self):
        return " | ".join(_wrap(p) for p in self.parts)


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return f"{_wrap(self.lhs)} -> {_wrap(self.rhs)}"


def _wrap(f: Formula) -> str:
    if isinstance(f, (AtomF, Top, Bot, Not)):
        return str(f)
    return f"({f})"


def conj(parts: Iterable[Formula]) -> Formula:
    """Normal-form conjunction: () -> TRUE, (f,) -> f, else And."""
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def formula_atoms(f: Formula):
    """All atoms occurring in ``f``, in syntactic order (with duplicates)."""
    if isinstance(f, AtomF):
        yield f.atom
    elif isinstance(f, Not):
        yield from formula_atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            yield from formula_atoms(p)
    elif isinstance(f, Implies):
        yield from formula_atoms(f.lhs)
        yield from formula_atoms(f.rhs)


def satisfies(interp: frozenset, f: Formula, *, signature: "Signature" = None) -> bool:
    """Classical satisfaction of a ground formula by a set of true atoms."""
    if signature is not None:
        for atom in formula_atoms(f):
            signature.check_atom(atom)
    return _eval(interp, f)


def _eval(interp, f):
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, AtomF):
        return f.atom in interp
    if isinstance(f, Not):
        return not _eval(interp, f.arg)
    if isinstance(f, And):
        return all(_eval(interp, p) for p in f.parts)
    if isinstance(f, Or):
        return any(_eval(interp, p) for p in f.parts)
    if isinstance(f, Implies):
        return (not _eval(interp, f.lhs)) or _eval(interp, f.rhs)
    raise TypeError(f"not a formula: {f!r}")


def is_negative(f: Formula) -> bool:
    """True iff every atom occurrence in ``f`` lies under at least one negation."""
    return _neg_scan(f, False)


def _neg_scan(f, under_not):
    if isinstance(f, (Top, Bot)):
        return True
    if isinstance(f, AtomF):
        return under_not
    if isinstance(f, Not):
        return _neg_scan(f.arg, True)
    if isinstance(f, (And, Or)):
        return all(_neg_scan(p, under_not) for p in f.parts)
    if isinstance(f, Implies):
        return _neg_scan(f.lhs, under_not) and _neg_scan(f.rhs, under_not)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Rules and programs


@dataclass(frozen=True)
class ModExpr:
    """``term mod modulus`` on the left side of a builtin comparison."""

    term: Term
    modulus: int

    def __str__(self):
        return f"{self.term} mod {self.modulus}"


@dataclass(frozen=True)
class Builtin:
    """Grounding-time comparison ``lhs op rhs`` with op in =, !=, <, <=."""

    op: str
    lhs: Union[Term, ModExpr]
    rhs: Term

    def __str__(self):
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass(frozen=True)
class Rule:
    """``head_1 ; ... ; head_k :- body_pos, body_neg`` with a negative
    formula as the negated part; empty head is a constraint."""

    head: tuple = ()
    body_pos: tuple = ()
    body_neg: Formula = TRUE
    builtins: tuple = ()

    def __post_init__(self):
        if not is_negative(self.body_neg):
            raise ValidationError(f"rule body part is not a negative formula: {self.body_neg}")

    @property
    def is_ground(self):
        return (
            all(a.is_ground for a in self.head)
            and all(a.is_ground for a in self.body_pos)
            and not self.builtins
            and all(a.is_ground for a in formula_atoms(self.body_neg))
        )

    def as_formula(self) -> Formula:
        body = conj(
            [AtomF(a) for a in self.body_pos]
            + ([] if self.body_neg == TRUE else [self.body_neg])
        )
        head = disj([AtomF(a) for a in self.head])
        if body == TRUE:
            return head
        return Implies(body, head)


def choice_rule(atom: Atom, body_pos=(), body_neg: Formula = TRUE, builtins=()) -> Rule:
    """``{a} :- body`` desugared to ``a :- body, not not a``."""
    extra = Not(Not(AtomF(atom)))
    if body_neg == TRUE:
        neg = extra
    elif isinstance(body_neg, And):
        neg = And(body_neg.parts + (extra,))
    else:
        neg = And((body_neg, extra))
    return Rule(head=(atom,), body_pos=tuple(body_pos), body_neg=neg, builtins=tuple(builtins))


@dataclass(frozen=True)
class Weight:
    """Hard (alpha) when ``soft`` is None, otherwise a finite real weight."""

    soft: Optional[float] = None

    def __post_init__(self):
        if self.soft is not None and not math.isfinite(self.soft):
            raise ValidationError(f"soft weight must be finite, got {self.soft}")

    @property
    def is_hard(self):
        return self.soft is None

    def __str__(self):
        return "alpha" if self.is_hard else repr(self.soft)


HARD = Weight()


def soft(w: float) -> Weight:
    return Weight(float(w))


@dataclass(frozen=True)
class WeightedRule:
    weight: Weight
    rule: Rule


@dataclass
class Signature:
    """Finite multi-valued propositional signature.

    ``domains`` maps sort names to ordered value tuples (integer ranges are
    stored expanded).  ``constants`` maps a predicate / mv-constant name to
    ``(arg_domains, values)`` where ``values`` is None for plain Boolean
    predicates and an ordered value tuple for declared mv-constants.
    Treated as immutable after construction.
    """

    domains: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, values in self.domains.items():
            values = tuple(values)
            if not values:
                raise ValidationError(f"domain {name} is empty")
            if len(set(values)) != len(values):
                raise ValidationError(f"domain {name} has duplicate values")
            self.domains[name] = values
        for name, (arg_domains, values) in self.constants.items():
            self.constants[name] = (tuple(arg_domains), None if values is None else tuple(values))

    def domain_values(self, name) -> tuple:
        try:
            return self.domains[name]
        except KeyError:
            raise SignatureError(f"undeclared domain: {name}") from None

    def value_domain(self, symbol) -> Optional[tuple]:
        try:
            return self.constants[symbol][1]
        except KeyError:
            raise SignatureError(f"undeclared constant: {symbol}") from None

    def arity(self, symbol) -> int:
        return len(self.constants[symbol][0])

    def check_atom(self, atom: Atom):
        if atom.symbol not in self.constants:
            raise SignatureError(f"unknown atom symbol: {atom.symbol}")
        arg_domains, values = self.constants[atom.symbol]
        if len(atom.args) != len(arg_domains):
            raise SignatureError(
                f"{atom.symbol} expects {len(arg_domains)} argument(s), got {len(atom.args)}"
            )
        if values is None:
            if atom.value is not None:
                raise SignatureError(f"{atom.symbol} is a plain Boolean atom, got value {atom.value}")
        else:
            if atom.value is None:
                raise SignatureError(f"{atom.symbol} requires an explicit value")
            if not isinstance(atom.value, Var) and atom.value not in values:
                raise SignatureError(f"{atom.value} is not in the domain of {atom.symbol}")

    def extended(self, domains=None, constants=None) -> "Signature":
        d = dict(self.domains)
        c = dict(self.constants)
        d.update(domains or {})
        c.update(constants or {})
        return Signature(domains=d, constants=c)

    def ground_keys(self):
        """All ground (symbol, args) constant keys, in deterministic order."""
        for symbol in sorted(self.constants):
            arg_domains, _values = self.constants[symbol]
            yield from _keys_for(symbol, arg_domains, self)

    def atoms_for_key(self, symbol, args):
        """All ground atoms of one constant key, values in domain order."""
        _arg_domains, values = self.constants[symbol]
        if values is None:
            return (Atom(symbol, args),)
        return tuple(Atom(symbol, args, v) for v in values)


def _keys_for(symbol, arg_domains, sig):
    import itertools

    pools = [sig.domain_values(d) for d in arg_domains]
    for combo in itertools.product(*pools):
        yield (symbol, combo)


@dataclass(frozen=True)
class Program:
    """An LP^MLN program: a signature plus a finite list of weighted rules."""

    signature: Signature
    rules: tuple = ()

    @property
    def unweighted(self) -> tuple:
        """Pi-bar: the rules with weights dropped."""
        return tuple(wr.rule for wr in self.rules)

    @property
    def hard_rules(self) -> tuple:
        return tuple(wr for wr in self.rules if wr.weight.is_hard)

    @property
    def soft_rules(self) -> tuple:
        return tuple(wr for wr in self.rules if not wr.weight.is_hard)


# ---------------------------------------------------------------------------
# Symbolic weights


@total_ordering
@dataclass(frozen=True)
class SymbolicWeight:
    """exp(hard * alpha + soft), plus a distinguished zero bottom element.

    ``soft`` is kept in log space; comparison is lexicographic on
    (hard, soft), realizing the alpha -> infinity limit exactly.
    """

    hard: int = 0
    soft: float = 0.0
    is_zero: bool = False

    @classmethod
    def zero(cls):
        return cls(0, 0.0, True)

    @classmethod
    def one(cls):
        return cls(0, 0.0)

    def times(self, other: "SymbolicWeight") -> "SymbolicWeight":
        if self.is_zero or other.is_zero:
            return SymbolicWeight.zero()
        return SymbolicWeight(self.hard + other.hard, self.soft + other.soft)

    def _cmp_key(self):
        # zero sorts strictly below every exp(...) value
        return (0,) if self.is_zero else (1, self.hard, self.soft)

    def __lt__(self, other):
        return self._cmp_key() < other._cmp_key()

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        if self.hard:
            terms.append(f"{self.hard}a" if self.hard != 1 else "a")
        if self.soft or not terms:
            terms.append(f"{self.soft:g}")
        return "e^(" + "+".join(terms) + ")"


def compare_weights(x: SymbolicWeight, y: SymbolicWeight) -> int:
    """-1, 0 or 1; lexicographic on (hard, soft) with zero at the bottom."""
    kx, ky = x._cmp_key(), y._cmp_key()
    return (kx > ky) - (kx < ky)


def atom_sort_key(atom: Atom):
    """Canonical deterministic ordering key for ground atoms."""
    return (
        atom.symbol,
        tuple(str(a) for a in atom.args),
        "" if atom.value is None else str(atom.value),
    )


def interp_str(interp) -> str:
    """Canonical text rendering of an interpretation."""
    return "{" + ", ".join(str(a) for a in sorted(interp, key=atom_sort_key)) + "}"
