"""Lexer and recursive-descent parser for the ASCII formula grammar.

Application is sort-driven: the head's sort fixes how many argument terms
are consumed, so `p & (q)` and `P (neg Y)` need no extra punctuation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formulas import (
    INDIVIDUAL, PROPOSITION, REL1, Relation, Sort,
    Actually, And, Box, Const, Description, Diamond, Encode, Exemplify,
    Exists, Forall, Formula, Iff, Implies, Lambda, MACRO_FORMULA_SIGS,
    MACRO_TERM_SIGS, MacroFormula, MacroTerm, Not, Or, PrimitiveEq, SOAtom,
    Term, Var, Xor, sort_of,
)
from .printer import default_sort
from .signature import Mode, Signature, check_sorts


class ParseError(Exception):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*[!*]?)
  | (?P<num>[0-9]+)
  | (?P<op><->|\[\]|<>|->|\[\\|[()\[\]~&|=@:\\,])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"all", "exists", "the", "xor"}


def lex(text: str) -> list:
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        i = m.end()
        if m.lastgroup == "ws":
            continue
        kind = m.lastgroup
        val = m.group()
        if kind == "name" and val in _KEYWORDS:
            kind = val
        elif kind == "op":
            kind = val
        out.append(Token(kind, val, m.start()))
    out.append(Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, tokens: list, sig: Signature):
        self.toks = tokens
        self.i = 0
        self.sig = sig
        self.scopes: list = []

    # -- token plumbing

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def accept(self, kind: str):
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text!r}", t.pos)
        return self.next()

    def fail(self, msg: str):
        raise ParseError(msg, self.peek().pos)

    # -- scoping

    def lookup(self, name: str):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    # -- grammar

    def formula(self) -> Formula:
        left = self.impl()
        while self.peek().kind in ("<->", "xor"):
            op = self.next().kind
            right = self.impl()
            left = Iff(left, right) if op == "<->" else Xor(left, right)
        return left

    def impl(self) -> Formula:
        left = self.orf()
        if self.accept("->"):
            return Implies(left, self.impl())
        return left

    def orf(self) -> Formula:
        left = self.andf()
        while self.accept("|"):
            left = Or(left, self.andf())
        return left

    def andf(self) -> Formula:
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind == "~":
            self.next()
            return Not(self.unary())
        if t.kind == "[]":
            self.next()
            return Box(self.unary())
        if t.kind == "<>":
            self.next()
            return Diamond(self.unary())
        if t.kind == "@":
            self.next()
            return Actually(self.unary())
        if t.kind in ("all", "exists"):
            self.next()
            v = self.binder_decl()
            self.expect("(")
            self.scopes.append({v.name: v})
            body = self.formula()
            self.scopes.pop()
            self.expect(")")
            return Forall(v, body) if t.kind == "all" else Exists(v, body)
        return self.atom()

    def binder_decl(self) -> Var:
        name = self.expect("name").text
        sort = default_sort(name)
        if self.accept(":"):
            sort = self.sort_annotation()
        return Var(name, sort)

    def sort_annotation(self) -> Sort:
        t = self.expect("name")
        if t.text == "ind":
            return INDIVIDUAL
        if t.text == "prop":
            return PROPOSITION
        if t.text == "rel":
            if self.peek().kind == "num":
                return Relation(int(self.next().text))
            return REL1
        raise ParseError(f"unknown sort {t.text!r}", t.pos)

    def atom(self) -> Formula:
        t = self.peek()
        if t.kind == "(":
            if self.peek(1).kind == "the":
                head = self.primary_term()
                return self.app_tail(head)
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind in ("name", "[\\"):
            # A formula-macro head takes term arguments directly.
            if t.kind == "name" and self.lookup(t.text) is None \
                    and t.text not in self.sig.consts \
                    and t.text in MACRO_FORMULA_SIGS:
                self.next()
                sig = MACRO_FORMULA_SIGS[t.text]
                args = tuple(self.arg_term() for _ in sig)
                return MacroFormula(t.text, args)
            head = self.primary_term()
            return self.app_tail(head)
        self.fail(f"unexpected token {t.text!r}")

    def app_tail(self, head: Term) -> Formula:
        sort = self.head_sort(head)
        if sort.kind == "so":
            return SOAtom(head, self.arg_term())
        if sort.kind == "rel":
            if self.peek().kind == "=":
                return self.equality(head)
            args = tuple(self.arg_term() for _ in range(sort.arity))
            return Exemplify(head, args)
        # individual head: encoding atom or equality
        if self.peek().kind == "[":
            self.next()
            rel = self.term()
            self.expect("]")
            return Encode(head, rel)
        if self.peek().kind == "=":
            return self.equality(head)
        self.fail("an individual term is not a formula")

    def equality(self, left: Term) -> Formula:
        self.expect("=")
        right = self.arg_term()
        if self.sig.mode is Mode.AOT:
            return MacroFormula("id", (left, right))
        return PrimitiveEq(left, right)

    def head_sort(self, t: Term) -> Sort:
        if isinstance(t, Var):
            return t.sort
        if isinstance(t, Const):
            return t.sort
        return sort_of(t)

    def resolve_name(self, tok: Token) -> Term:
        v = self.lookup(tok.text)
        if v is not None:
            return v
        if tok.text in self.sig.consts:
            return Const(tok.text, self.sig.consts[tok.text])
        if tok.text in MACRO_TERM_SIGS:
            arg_sorts, _ = MACRO_TERM_SIGS[tok.text]
            if arg_sorts:
                raise ParseError(
                    f"macro {tok.text!r} takes arguments; parenthesize the application",
                    tok.pos)
            return MacroTerm(tok.text)
        return Var(tok.text, default_sort(tok.text))

    def primary_term(self) -> Term:
        t = self.peek()
        if t.kind == "name":
            self.next()
            return self.resolve_name(t)
        if t.kind == "[\\":
            return self.lambda_term()
        if t.kind == "(" and self.peek(1).kind == "the":
            self.next()
            self.next()
            v = Var(self.expect("name").text, INDIVIDUAL)
            self.expect(":")
            self.scopes.append({v.name: v})
            body = self.formula()
            self.scopes.pop()
            self.expect(")")
            return Description(v, body)
        self.fail(f"expected a term, found {t.text!r}")

    def lambda_term(self) -> Term:
        self.expect("[\\")
        params = []
        if self.peek().kind == "name":
            params.append(Var(self.next().text, INDIVIDUAL))
        while self.accept("\\"):
            params.append(Var(self.expect("name").text, INDIVIDUAL))
        self.scopes.append({p.name: p for p in params})
        body = self.formula()
        self.scopes.pop()
        self.expect("]")
        return Lambda(tuple(params), body)

    def arg_term(self) -> Term:
        """A term in argument position: name, lambda, description, or (macro app)."""
        t = self.peek()
        if t.kind == "(" and self.peek(1).kind != "the":
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        return self.primary_term()

    def term(self) -> Term:
        """A full term: macro heads may take arguments here."""
        t = self.peek()
        if t.kind == "name" and self.lookup(t.text) is None \
                and t.text not in self.sig.consts and t.text in MACRO_TERM_SIGS:
            self.next()
            arg_sorts, _ = MACRO_TERM_SIGS[t.text]
            args = tuple(self.arg_term() for _ in arg_sorts)
            return MacroTerm(t.text, args)
        return self.primary_term()


def parse_formula(text: str, sig: Signature) -> Formula:
    p = _Parser(lex(text), sig)
    f = p.formula()
    tail = p.peek()
    if tail.kind != "eof":
        raise ParseError(f"trailing input {tail.text!r}", tail.pos)
    check_sorts(f, sig)
    return f


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(lex(text), sig)
    t = p.term()
    tail = p.peek()
    if tail.kind != "eof":
        raise ParseError(f"trailing input {tail.text!r}", tail.pos)
    return t
