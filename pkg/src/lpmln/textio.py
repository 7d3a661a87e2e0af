"""Parsers and printers for the six textual dialects plus queries.

The concrete grammar is an invention of this package (documented with EBNF
in docs/grammar.md): weighted rules are written ``w : head :- body.`` with
``alpha`` as the hard weight, domains are declared with ``#domain``,
variables with ``#var``, and multi-valued constants with ``#mvconst``.
Printing inverts parsing: parse(print(v)) is structurally equal to v.
"""

from __future__ import annotations

import json
import os
import re

from .core import (
    And,
    Atom,
    AtomF,
    Bot,
    Builtin,
    FALSE,
    Formula,
    HARD,
    Implies,
    ModExpr,
    Not,
    Or,
    Program,
    Rule,
    Signature,
    TRUE,
    Top,
    Var,
    Weight,
    WeightedRule,
    choice_rule,
    conj,
    formula_atoms,
    is_negative,
    soft,
)
from .errors import ParseError, ValidationError
from .frontends.asp import AspProgram
from .frontends.mvpp import Declaration, MvppProgram
from .frontends.plog import PlogProgram, PrAtom, Selection
from .frontends.problog import ProbLogProgram
from .frontends.weak import WeakConstraint, WeakProgram
from .infer import MlnProgram

DIALECTS = ("lpmln", "asp", "mln", "problog", "mvpp", "plog")

EXTENSIONS = {
    ".lpmln": "lpmln",
    ".asp": "asp",
    ".mln": "mln",
    ".problog": "problog",
    ".mvpp": "mvpp",
    ".plog": "plog",
}


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<number>\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<directive>\#[a-z]+)
  | (?P<ident>[a-z_][A-Za-z0-9_]*)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<punct>:-|:~|::|\.\.|->|!=|<=|[:.,;|&(){}\[\]=<~/-])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"not", "alpha", "mod", "obs", "do", "random", "pr"}


class Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self):
        return f"Token({self.kind!r}, {self.value!r})"


def tokenize(text, filename="<string>"):
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", filename, line, col
            )
        value = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "number":
                tokens.append(Token("number", value, line, col))
            elif kind == "ident" and value in _KEYWORDS:
                tokens.append(Token(value, value, line, col))
            else:
                tokens.append(Token(kind if kind != "punct" else value, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text, filename="<string>"):
        self.filename = filename
        self.tokens = tokenize(text, filename)
        self.i = 0
        self.domains = {}
        self.var_domains = {}
        self.declared = {}  # symbol -> (arg_domain_names, value_domain_name|None)
        # usage records for signature inference
        self.seen_atoms = []

    # -- token plumbing

    def peek(self, ahead=0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, *kinds):
        return self.peek().kind in kinds

    def accept(self, kind):
        if self.at(kind):
            return self.next()
        return None

    def expect(self, kind, what=None):
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what or kind}, found {tok.value!r}",
                self.filename,
                tok.line,
                tok.column,
                expected=(kind,),
            )
        return tok

    def error(self, message):
        tok = self.peek()
        raise ParseError(message, self.filename, tok.line, tok.column)

    # -- directives

    def parse_directive(self):
        tok = self.expect("directive")
        name = tok.value
        if name == "#dialect":
            d = self.expect("ident").value
            if d not in DIALECTS:
                self.error(f"unknown dialect {d!r}")
            self.expect(".")
            return ("dialect", d)
        if name == "#domain":
            dom = self.expect("ident").value
            self.expect("=")
            if self.at("{"):
                self.next()
                values = [self.parse_value()]
                while self.accept(","):
                    values.append(self.parse_value())
                self.expect("}")
            else:
                lo = int(self.expect("number").value)
                self.expect("..")
                hi = int(self.expect("number").value)
                values = list(range(lo, hi + 1))
            self.expect(".")
            self.domains[dom] = tuple(values)
            return None
        if name == "#var":
            names = [self.expect("var").value]
            while self.accept(","):
                names.append(self.expect("var").value)
            self.expect(":")
            dom = self.expect("ident").value
            self.expect(".")
            for n in names:
                self.var_domains[n] = dom
            return None
        if name == "#mvconst":
            symbol, arg_doms = self.parse_const_decl()
            self.expect(":")
            dom = self.expect("ident").value
            self.expect(".")
            self.declared[symbol] = (arg_doms, dom)
            return None
        if name == "#pred":
            symbol, arg_doms = self.parse_const_decl()
            self.expect(".")
            self.declared[symbol] = (arg_doms, None)
            return None
        self.error(f"unknown directive {name}")

    def parse_const_decl(self):
        symbol = self.expect("ident").value
        arg_doms = []
        if self.accept("("):
            arg_doms.append(self.expect("ident").value)
            while self.accept(","):
                arg_doms.append(self.expect("ident").value)
            self.expect(")")
        return symbol, tuple(arg_doms)

    # -- terms, atoms, formulas

    def parse_value(self):
        if self.at("number"):
            tok = self.next()
            if "." in tok.value or "e" in tok.value or "E" in tok.value:
                self.error("domain values must be identifiers or integers")
            return int(tok.value)
        if self.at("ident") or self.peek().kind in _KEYWORDS:
            return self.next().value
        self.error("expected a value")

    def parse_term(self):
        if self.at("var"):
            name = self.next().value
            if name not in self.var_domains:
                self.error(f"variable {name} lacks a #var declaration")
            return Var(name, self.var_domains[name])
        return self.parse_value()

    def _bare_value(self, symbol):
        """Implicit value for a bare atom of a t/f-valued constant."""
        decl = self.declared.get(symbol)
        if decl and decl[1] is not None:
            values = self.domains.get(decl[1], ())
            if "t" in values:
                return "t"
            self.error(f"{symbol} requires an explicit =value")
        return None

    def parse_atom(self, *, allow_tilde=False, as_constant=False):
        negated_value = False
        if allow_tilde and self.accept("~"):
            negated_value = True
        symbol = self.expect("ident", "an atom").value
        args = []
        if self.accept("("):
            args.append(self.parse_term())
            while self.accept(","):
                args.append(self.parse_term())
            self.expect(")")
        if as_constant:
            atom = Atom(symbol, tuple(args))
            self.seen_atoms.append(atom)
            return atom
        value = None
        if self.accept("="):
            value = self.parse_term()
        if negated_value:
            if value is not None:
                self.error("~atom cannot also carry =value")
            value = "f"
        elif value is None:
            value = self._bare_value(symbol)
        atom = Atom(symbol, tuple(args), value)
        self.seen_atoms.append(atom)
        return atom

    def at_atom_start(self):
        return self.at("ident")

    def at_builtin_start(self):
        return self.at("var", "number")

    def parse_builtin(self):
        lhs = self.parse_term()
        if self.accept("mod"):
            lhs = ModExpr(lhs, int(self.expect("number").value))
        op_tok = self.next()
        if op_tok.kind not in ("=", "!=", "<", "<="):
            raise ParseError(
                f"expected a comparison operator, found {op_tok.value!r}",
                self.filename,
                op_tok.line,
                op_tok.column,
            )
        rhs = self.parse_term()
        if self.accept("mod"):
            rhs = ModExpr(rhs, int(self.expect("number").value))
        return Builtin(op_tok.kind, lhs, rhs)

    def parse_body(self, *, allow_tilde=False):
        """Returns (body_pos, neg_parts, builtins)."""
        pos, neg, builtins = [], [], []
        while True:
            if self.at("not"):
                self.next()
                if self.at("not"):
                    self.next()
                    atom = self.parse_atom(allow_tilde=allow_tilde)
                    neg.append(Not(Not(AtomF(atom))))
                elif self.at("("):
                    self.next()
                    f = self.parse_formula()
                    self.expect(")")
                    neg.append(Not(f))
                else:
                    atom = self.parse_atom(allow_tilde=allow_tilde)
                    neg.append(Not(AtomF(atom)))
            elif self.at("("):
                self.next()
                f = self.parse_formula()
                self.expect(")")
                if not is_negative(f):
                    self.error("parenthesized body formulas must be negative")
                neg.append(f)
            elif self.at_builtin_start():
                builtins.append(self.parse_builtin())
            elif self.at_atom_start() or (allow_tilde and self.at("~")):
                pos.append(self.parse_atom(allow_tilde=allow_tilde))
            else:
                self.error("expected a body literal")
            if not self.accept(","):
                break
        return tuple(pos), conj(neg), tuple(builtins)

    def parse_rule_after_weight(self, *, allow_tilde=False):
        """head [:- body] . with '{a}' choice heads and ';' disjunction."""
        head = []
        is_choice = False
        if self.accept("{"):
            head.append(self.parse_atom(allow_tilde=allow_tilde))
            self.expect("}")
            is_choice = True
        elif self.at_atom_start() or (allow_tilde and self.at("~")):
            head.append(self.parse_atom(allow_tilde=allow_tilde))
            while self.accept(";"):
                head.append(self.parse_atom(allow_tilde=allow_tilde))
        pos, neg, builtins = (), TRUE, ()
        if self.accept(":-"):
            if not self.at("."):
                pos, neg, builtins = self.parse_body(allow_tilde=allow_tilde)
        self.expect(".")
        if is_choice:
            return choice_rule(head[0], body_pos=pos, body_neg=neg, builtins=builtins)
        return Rule(head=tuple(head), body_pos=pos, body_neg=neg, builtins=builtins)

    def parse_weight(self):
        """Leading 'w :' prefix if present; None when the rule is unweighted."""
        if self.at("alpha") and self.peek(1).kind == ":":
            self.next()
            self.expect(":")
            return HARD
        if self.at("-") and self.peek(1).kind == "number" and self.peek(2).kind == ":":
            self.next()
            w = -float(self.next().value)
            self.expect(":")
            return soft(w)
        if self.at("number") and self.peek(1).kind == ":":
            w = float(self.next().value)
            self.expect(":")
            return soft(w)
        return None

    def parse_probability(self):
        neg = bool(self.accept("-"))
        num = float(self.expect("number").value)
        if self.accept("/"):
            num /= float(self.expect("number").value)
        return -num if neg else num

    # -- formulas (MLN bodies, queries, parenthesized rule bodies)

    def parse_formula(self):
        lhs = self.parse_disjunction()
        if self.accept("->"):
            return Implies(lhs, self.parse_formula())
        return lhs

    def parse_disjunction(self):
        parts = [self.parse_conjunction()]
        while self.at("|", ";"):
            self.next()
            parts.append(self.parse_conjunction())
        return disj_strict(parts)

    def parse_conjunction(self):
        parts = [self.parse_unary()]
        while self.at("&", ","):
            self.next()
            parts.append(self.parse_unary())
        return conj_strict(parts)

    def parse_unary(self):
        if self.at("not", "~"):
            self.next()
            return Not(self.parse_unary())
        if self.accept("("):
            f = self.parse_formula()
            self.expect(")")
            return f
        if self.at("directive") and self.peek().value in ("#true", "#false"):
            return TRUE if self.next().value == "#true" else FALSE
        return AtomF(self.parse_atom())


def conj_strict(parts):
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj_strict(parts):
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


# ---------------------------------------------------------------------------
# Signature inference


def _infer_signature(parser: _Parser) -> Signature:
    """Declared domains and constants, completed from atom usage: undeclared
    symbols get synthetic per-position argument domains and, when used with
    =value, a synthetic value domain."""
    domains = dict(parser.domains)
    constants = {}
    for symbol, (arg_doms, value_dom) in parser.declared.items():
        for d in arg_doms + ((value_dom,) if value_dom else ()):
            if d not in domains:
                raise ValidationError(f"undeclared domain {d} for constant {symbol}")
        constants[symbol] = (
            arg_doms,
            domains[value_dom] if value_dom is not None else None,
        )
    arg_values = {}  # symbol -> per-position ordered value lists
    val_values = {}
    mv = set()
    for atom in parser.seen_atoms:
        if atom.symbol in parser.declared:
            decl_args, _ = constants[atom.symbol]
            if len(atom.args) != len(decl_args):
                raise ValidationError(
                    f"{atom.symbol} declared with {len(decl_args)} argument(s), "
                    f"used with {len(atom.args)}"
                )
            continue
        slots = arg_values.setdefault(atom.symbol, [])
        if slots and len(slots) != len(atom.args):
            raise ValidationError(
                f"{atom.symbol} used with both {len(slots)} and "
                f"{len(atom.args)} arguments"
            )
        while len(slots) < len(atom.args):
            slots.append([])
        for slot, term in zip(slots, atom.args):
            for v in _term_values(term, domains):
                if v not in slot:
                    slot.append(v)
        if atom.value is not None:
            mv.add(atom.symbol)
            vals = val_values.setdefault(atom.symbol, [])
            for v in _term_values(atom.value, domains):
                if v not in vals:
                    vals.append(v)
    for symbol in arg_values:
        arg_doms = []
        for i, slot in enumerate(arg_values[symbol]):
            name = f"_a_{symbol}_{i + 1}"
            domains[name] = tuple(slot)
            arg_doms.append(name)
        values = None
        if symbol in mv:
            name = f"_v_{symbol}"
            domains[name] = tuple(val_values[symbol])
            values = domains[name]
        constants[symbol] = (tuple(arg_doms), values)
    return Signature(domains=domains, constants=constants)


def _term_values(term, domains):
    if isinstance(term, Var):
        return domains.get(term.domain, ())
    return (term,)


# ---------------------------------------------------------------------------
# Dialect drivers


def parse(dialect, text, filename="<string>"):
    if dialect not in DIALECTS:
        raise ValidationError(f"unknown dialect {dialect!r}")
    parser = _Parser(text, filename)
    statements = []
    while not parser.at("eof"):
        if parser.at("directive") and parser.peek().value not in ("#true", "#false"):
            d = parser.parse_directive()
            if d is not None and d[0] == "dialect":
                if d[1] != dialect:
                    dialect = d[1]
            continue
        statements.append(_DIALECT_STATEMENTS[dialect](parser))
    sig = _infer_signature(parser)
    return _DIALECT_BUILDERS[dialect](sig, statements)


def parse_path(path):
    ext = os.path.splitext(path)[1]
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    m = re.search(r"^\s*#dialect\s+([a-z]+)\s*\.", text, re.MULTILINE)
    if m:
        dialect = m.group(1)
    elif ext in EXTENSIONS:
        dialect = EXTENSIONS[ext]
    else:
        raise ValidationError(f"cannot determine dialect of {path}")
    return parse(dialect, text, filename=path)


def parse_query(text, signature=None):
    parser = _Parser(text, "<query>")
    if signature is not None:
        # make declared t/f constants readable without '=t'
        parser.domains = dict(signature.domains)
        rev = {v: k for k, v in signature.domains.items()}
        for symbol, (arg_doms, values) in signature.constants.items():
            vd = rev.get(values) if values is not None else None
            if values is not None and vd is None:
                vd = f"_q_{symbol}"
                parser.domains[vd] = values
            parser.declared[symbol] = (arg_doms, vd)
    f = parser.parse_formula()
    if not parser.at("eof"):
        parser.error("unexpected trailing input in query")
    if signature is not None:
        for atom in parser.seen_atoms:
            if atom.is_ground:
                signature.check_atom(atom)
    return f


# -- statement parsers per dialect


def _stmt_lpmln(p: _Parser):
    weight = p.parse_weight()
    rule = p.parse_rule_after_weight()
    return (HARD if weight is None else weight, rule)


def _stmt_asp(p: _Parser):
    if p.accept(":~"):
        pos, neg, builtins = p.parse_body()
        p.expect(".")
        p.expect("[")
        w = int(p.expect("number").value)
        p.expect("]")
        return ("weak", WeakConstraint(
            Rule(body_pos=pos, body_neg=neg, builtins=builtins), w))
    return ("rule", p.parse_rule_after_weight())


def _stmt_mln(p: _Parser):
    weight = p.parse_weight()
    if weight is None:
        p.error("every formula needs a 'w :' or 'alpha :' prefix")
    f = p.parse_formula()
    p.expect(".")
    return (weight, f)


def _stmt_problog(p: _Parser):
    if p.at("number"):
        pr = p.parse_probability()
        p.expect("::")
        atom = p.parse_atom()
        p.expect(".")
        return ("fact", atom, pr)
    return ("rule", p.parse_rule_after_weight())


def _stmt_mvpp(p: _Parser):
    if p.at("number") and p.peek(1).kind == ":" or (
        p.at("number") and p.peek(1).kind == "/"
    ):
        items = []
        first = None
        while True:
            pr = p.parse_probability()
            p.expect(":")
            atom = p.parse_atom()
            if atom.value is None:
                p.error("declarations need atoms of the form c=v")
            key = (atom.symbol, atom.args)
            if first is None:
                first = key
            elif key != first:
                p.error("all alternatives must declare the same constant")
            items.append((pr, atom.value))
            if not p.accept("|"):
                break
        p.expect(".")
        return ("decl", first[0], first[1], tuple(items))
    return ("rule", p.parse_rule_after_weight())


def _stmt_plog(p: _Parser):
    if p.at("[") or (p.at("random")):
        name = None
        if p.accept("["):
            name = p.expect("ident").value
            p.expect("]")
        p.expect("random")
        p.expect("(")
        constant = p.parse_atom(as_constant=True)
        p.expect(")")
        pos, neg, builtins = (), TRUE, ()
        if p.accept(":-"):
            pos, neg, builtins = p.parse_body(allow_tilde=True)
        p.expect(".")
        return ("selection", name, constant, pos, neg, builtins)
    if p.at("pr"):
        p.next()
        name = None
        if p.accept("["):
            name = p.expect("ident").value
            p.expect("]")
        p.expect("(")
        atom = p.parse_atom()
        if atom.value is None:
            p.error("pr-atoms need the form c=v")
        pos, neg, builtins = (), TRUE, ()
        if p.accept("|"):
            pos, neg, builtins = p.parse_body(allow_tilde=True)
        p.expect(")")
        p.expect("=")
        prob = p.parse_probability()
        p.expect(".")
        return ("pr", name, atom, prob, pos, neg, builtins)
    if p.at("obs", "do"):
        kind = p.next().kind
        p.expect("(")
        atom = p.parse_atom(allow_tilde=True)
        p.expect(")")
        p.expect(".")
        return (kind, atom)
    return ("rule", p.parse_rule_after_weight(allow_tilde=True))


_DIALECT_STATEMENTS = {
    "lpmln": _stmt_lpmln,
    "asp": _stmt_asp,
    "mln": _stmt_mln,
    "problog": _stmt_problog,
    "mvpp": _stmt_mvpp,
    "plog": _stmt_plog,
}


# -- program builders per dialect


def _build_lpmln(sig, statements):
    return Program(sig, tuple(WeightedRule(w, r) for w, r in statements))


def _build_asp(sig, statements):
    rules = tuple(s[1] for s in statements if s[0] == "rule")
    weak = tuple(s[1] for s in statements if s[0] == "weak")
    if weak:
        return WeakProgram(sig, rules, weak)
    return AspProgram(sig, rules)


def _build_mln(sig, statements):
    return MlnProgram(sig, tuple(statements))


def _build_problog(sig, statements):
    facts = tuple((s[1], s[2]) for s in statements if s[0] == "fact")
    rules = tuple(s[1] for s in statements if s[0] == "rule")
    return ProbLogProgram(sig, facts, rules)


def _build_mvpp(sig, statements):
    decls = tuple(
        Declaration(s[1], s[2], s[3]) for s in statements if s[0] == "decl"
    )
    rules = tuple(s[1] for s in statements if s[0] == "rule")
    return MvppProgram(sig, decls, rules)


def _build_plog(sig, statements):
    rules, selections, pratoms, obs, do = [], [], [], [], []
    counter = 0
    for s in statements:
        if s[0] == "rule":
            rules.append(s[1])
        elif s[0] == "selection":
            counter += 1
            name = s[1] or f"r{counter}"
            selections.append(
                Selection(name=name, constant=s[2], body_pos=s[3],
                          body_neg=s[4], builtins=s[5])
            )
        elif s[0] == "obs":
            obs.append(s[1])
        elif s[0] == "do":
            do.append(s[1])
    by_symbol = {}
    for sel in selections:
        by_symbol.setdefault(sel.constant.symbol, []).append(sel.name)
    for s in statements:
        if s[0] != "pr":
            continue
        _tag, name, atom, prob, pos, neg, builtins = s
        if name is None:
            candidates = by_symbol.get(atom.symbol, [])
            if len(candidates) != 1:
                raise ValidationError(
                    f"pr-atom for {atom.symbol} needs an explicit [r] tag: "
                    f"{len(candidates)} selection rules match"
                )
            name = candidates[0]
        pratoms.append(
            PrAtom(selection=name, constant=Atom(atom.symbol, atom.args),
                   value=atom.value, prob=prob, body_pos=pos, body_neg=neg,
                   builtins=builtins)
        )
    return PlogProgram(sig, tuple(rules), tuple(selections), tuple(pratoms),
                       tuple(obs), tuple(do))


_DIALECT_BUILDERS = {
    "lpmln": _build_lpmln,
    "asp": _build_asp,
    "mln": _build_mln,
    "problog": _build_problog,
    "mvpp": _build_mvpp,
    "plog": _build_plog,
}


# ---------------------------------------------------------------------------
# Printing


def format_value(v):
    return str(v)


def format_term(t):
    if isinstance(t, Var):
        return t.name
    return format_value(t)


def format_atom(atom: Atom, *, tilde=False):
    base = atom.symbol
    if atom.args:
        base += "(" + ", ".join(format_term(a) for a in atom.args) + ")"
    if atom.value is None or atom.value == "t":
        return base
    if tilde and atom.value == "f":
        return "~" + base
    return base + "=" + format_term(atom.value)


def format_formula(f: Formula, *, tilde=False):
    def fmt(g, level):
        # level: 0 implies, 1 or, 2 and, 3 unary
        if isinstance(g, Top):
            return "#true"
        if isinstance(g, Bot):
            return "#false"
        if isinstance(g, AtomF):
            return format_atom(g.atom, tilde=tilde)
        if isinstance(g, Not):
            return "not " + fmt(g.arg, 3)
        if isinstance(g, And):
            # children one level up so nested conjunctions keep their shape
            s = " & ".join(fmt(x, 3) for x in g.parts)
            return f"({s})" if level > 2 else s
        if isinstance(g, Or):
            s = " | ".join(fmt(x, 2) for x in g.parts)
            return f"({s})" if level > 1 else s
        if isinstance(g, Implies):
            s = fmt(g.lhs, 1) + " -> " + fmt(g.rhs, 0)
            return f"({s})" if level > 0 else s
        raise TypeError(f"not a formula: {g!r}")

    return fmt(f, 0)


def _format_mod(t):
    if isinstance(t, ModExpr):
        return f"{format_term(t.term)} mod {t.modulus}"
    return format_term(t)


def format_builtin(b: Builtin):
    return f"{_format_mod(b.lhs)} {b.op} {_format_mod(b.rhs)}"


def _neg_parts(f: Formula):
    if f == TRUE:
        return []
    if isinstance(f, And):
        out = []
        for part in f.parts:
            out.extend(_neg_parts(part))
        return out
    return [f]


def _format_neg_literal(f: Formula, *, tilde=False):
    if isinstance(f, Not):
        inner = f.arg
        if isinstance(inner, AtomF):
            return "not " + format_atom(inner.atom, tilde=tilde)
        if isinstance(inner, Not) and isinstance(inner.arg, AtomF):
            return "not not " + format_atom(inner.arg.atom, tilde=tilde)
        return "not (" + format_formula(inner, tilde=tilde) + ")"
    return "(" + format_formula(f, tilde=tilde) + ")"


def format_rule(rule: Rule, *, tilde=False):
    neg_parts = _neg_parts(rule.body_neg)
    head_atoms = list(rule.head)
    choice = None
    if len(head_atoms) == 1:
        marker = Not(Not(AtomF(head_atoms[0])))
        if marker in neg_parts:
            choice = head_atoms[0]
            neg_parts = [p for p in neg_parts if p != marker]
    if choice is not None:
        head = "{" + format_atom(choice, tilde=tilde) + "}"
    else:
        head = "; ".join(format_atom(a, tilde=tilde) for a in head_atoms)
    body = (
        [format_atom(a, tilde=tilde) for a in rule.body_pos]
        + [format_builtin(b) for b in rule.builtins]
        + [_format_neg_literal(f, tilde=tilde) for f in neg_parts]
    )
    if not body:
        return f"{head}."
    if not head:
        return ":- " + ", ".join(body) + "."
    return head + " :- " + ", ".join(body) + "."


def format_weight(w: Weight):
    return "alpha" if w.is_hard else repr(w.soft)


def _signature_header(sig: Signature):
    lines = []
    for name, values in sig.domains.items():
        body = ", ".join(format_value(v) for v in values)
        lines.append(f"#domain {name} = {{{body}}}.")
    for symbol, (arg_doms, values) in sig.constants.items():
        args = "(" + ", ".join(arg_doms) + ")" if arg_doms else ""
        if values is None:
            lines.append(f"#pred {symbol}{args}.")
        else:
            dom_name = _domain_name_for(sig, values, symbol)
            lines.append(f"#mvconst {symbol}{args} : {dom_name}.")
    return lines


def _domain_name_for(sig, values, symbol):
    for name, vals in sig.domains.items():
        if vals == values:
            return name
    raise ValidationError(f"value domain of {symbol} is not a declared domain")


def _var_header(rules_vars):
    by_domain = {}
    seen = {}
    for v in rules_vars:
        if v.name in seen and seen[v.name] != v.domain:
            raise ValidationError(
                f"variable {v.name} used with two domains; cannot print"
            )
        seen[v.name] = v.domain
        by_domain.setdefault(v.domain, [])
        if v.name not in by_domain[v.domain]:
            by_domain[v.domain].append(v.name)
    return [
        f"#var {', '.join(names)} : {dom}." for dom, names in by_domain.items()
    ]


def _collect_vars(*pieces):
    out = []

    def walk_term(t):
        if isinstance(t, Var) and t not in out:
            out.append(t)

    def walk_atom(a):
        for t in a.args:
            walk_term(t)
        if a.value is not None:
            walk_term(a.value)

    def walk_formula(f):
        for a in formula_atoms(f):
            walk_atom(a)

    def walk_builtin(b):
        for side in (b.lhs, b.rhs):
            if isinstance(side, ModExpr):
                walk_term(side.term)
            else:
                walk_term(side)

    def walk_rule(r):
        for a in r.head:
            walk_atom(a)
        for a in r.body_pos:
            walk_atom(a)
        walk_formula(r.body_neg)
        for b in r.builtins:
            walk_builtin(b)

    for kind, item in pieces:
        if kind == "rule":
            walk_rule(item)
        elif kind == "atom":
            walk_atom(item)
        elif kind == "formula":
            walk_formula(item)
        elif kind == "builtins":
            for b in item:
                walk_builtin(b)
    return out


def _body_text(pos, neg, builtins, *, tilde=False):
    parts = (
        [format_atom(a, tilde=tilde) for a in pos]
        + [format_builtin(b) for b in builtins]
        + [_format_neg_literal(f, tilde=tilde) for f in _neg_parts(neg)]
    )
    return ", ".join(parts)


def print_program(value) -> str:
    if isinstance(value, Program):
        return _print_generic(
            value.signature,
            "lpmln",
            [("rule", wr.rule) for wr in value.rules],
            [f"{format_weight(wr.weight)} : {format_rule(wr.rule)}" for wr in value.rules],
        )
    if isinstance(value, WeakProgram):
        pieces = [("rule", r) for r in value.rules] + [
            ("rule", wc.body) for wc in value.weak
        ]
        lines = [format_rule(r) for r in value.rules] + [
            ":~ "
            + _body_text(wc.body.body_pos, wc.body.body_neg, wc.body.builtins)
            + f". [{wc.weight}]"
            for wc in value.weak
        ]
        return _print_generic(value.signature, "asp", pieces, lines)
    if isinstance(value, AspProgram):
        return _print_generic(
            value.signature,
            "asp",
            [("rule", r) for r in value.rules],
            [format_rule(r) for r in value.rules],
        )
    if isinstance(value, MlnProgram):
        return _print_generic(
            value.signature,
            "mln",
            [("formula", f) for _w, f in value.formulas],
            [f"{format_weight(w)} : {format_formula(f)}." for w, f in value.formulas],
        )
    if isinstance(value, ProbLogProgram):
        pieces = [("atom", a) for a, _pr in value.prob_facts] + [
            ("rule", r) for r in value.rules
        ]
        lines = [f"{pr!r} :: {format_atom(a)}." for a, pr in value.prob_facts] + [
            format_rule(r) for r in value.rules
        ]
        return _print_generic(value.signature, "problog", pieces, lines)
    if isinstance(value, MvppProgram):
        pieces = [("rule", r) for r in value.rules]
        lines = []
        for d in value.declarations:
            alts = " | ".join(
                f"{p!r}: {format_atom(Atom(d.symbol, d.args, v))}"
                + ("" if v != "t" else "=t")
                for p, v in d.items
            )
            lines.append(alts + ".")
        lines.extend(format_rule(r) for r in value.rules)
        return _print_generic(value.signature, "mvpp", pieces, lines)
    if isinstance(value, PlogProgram):
        pieces = [("rule", r) for r in value.rules]
        lines = [format_rule(r, tilde=True) for r in value.rules]
        for sel in value.selections:
            pieces.append(
                ("rule", Rule(body_pos=sel.body_pos, body_neg=sel.body_neg,
                              builtins=sel.builtins))
            )
            pieces.append(("atom", sel.constant))
            body = _body_text(sel.body_pos, sel.body_neg, sel.builtins, tilde=True)
            text = f"[{sel.name}] random({format_atom(sel.constant)})"
            lines.append(text + (f" :- {body}." if body else "."))
        for pa in value.pratoms:
            pieces.append(
                ("rule", Rule(body_pos=pa.body_pos, body_neg=pa.body_neg,
                              builtins=pa.builtins))
            )
            carrier = Atom(pa.constant.symbol, pa.constant.args, pa.value)
            pieces.append(("atom", carrier))
            body = _body_text(pa.body_pos, pa.body_neg, pa.builtins, tilde=True)
            head = f"pr[{pa.selection}]({_format_pr_atom(carrier)}"
            head += f" | {body}" if body else ""
            lines.append(head + f") = {pa.prob!r}.")
        for atom in value.obs:
            lines.append(f"obs({format_atom(atom, tilde=True)}).")
        for atom in value.do:
            lines.append(f"do({format_atom(atom, tilde=True)}).")
        return _print_generic(value.signature, "plog", pieces, lines)
    raise TypeError(f"cannot print {type(value).__name__}")


def _format_pr_atom(atom: Atom):
    """pr-atoms always spell the value, even 't'."""
    base = atom.symbol
    if atom.args:
        base += "(" + ", ".join(format_term(a) for a in atom.args) + ")"
    return base + "=" + format_term(atom.value)


def _print_generic(sig, dialect, pieces, body_lines):
    lines = [f"#dialect {dialect}."]
    lines.extend(_signature_header(sig))
    lines.extend(_var_header(_collect_vars(*pieces)))
    lines.extend(body_lines)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON export


def _value_json(v):
    return v if not isinstance(v, Var) else {"var": v.name, "domain": v.domain}


def _atom_json(a: Atom):
    out = {"symbol": a.symbol, "args": [_value_json(t) for t in a.args]}
    if a.value is not None:
        out["value"] = _value_json(a.value)
    return out


def _formula_json(f: Formula):
    if isinstance(f, Top):
        return {"op": "true"}
    if isinstance(f, Bot):
        return {"op": "false"}
    if isinstance(f, AtomF):
        return {"op": "atom", "atom": _atom_json(f.atom)}
    if isinstance(f, Not):
        return {"op": "not", "arg": _formula_json(f.arg)}
    if isinstance(f, And):
        return {"op": "and", "parts": [_formula_json(p) for p in f.parts]}
    if isinstance(f, Or):
        return {"op": "or", "parts": [_formula_json(p) for p in f.parts]}
    if isinstance(f, Implies):
        return {
            "op": "implies",
            "lhs": _formula_json(f.lhs),
            "rhs": _formula_json(f.rhs),
        }
    raise TypeError(f"not a formula: {f!r}")


def program_to_json(program: Program) -> dict:
    rules = []
    for wr in program.rules:
        rules.append(
            {
                "weight": "alpha" if wr.weight.is_hard else wr.weight.soft,
                "head": [_atom_json(a) for a in wr.rule.head],
                "pos": [_atom_json(a) for a in wr.rule.body_pos],
                "neg": _formula_json(wr.rule.body_neg),
            }
        )
    return {"rules": rules}


def program_to_json_text(program: Program) -> str:
    return json.dumps(program_to_json(program), indent=2)
