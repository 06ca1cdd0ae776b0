"""Fully parenthesized text syntax for terms and formulas.

Terms:    0  1  (S t)  (+ t t)  (* t t)  (v name)  (num n)  (fn name t ...)
Formulas: (= t t) (<= t t) (P t) (T t) (not f) (and f f) (or f f)
          (imp f f) (iff f f) (all x f) (ex x f)

Numerals up to ``SPELL_LIMIT`` are printed as successor chains; larger ones
use the compact ``(num n)`` form so that codes can appear inside formulas.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .syntax import (
    Add, And, Eq, Exists, Fn, Forall, Iff, Imp, Leq, Mul, Node, Not, Num, One, Or,
    Pred, Succ, Var, var_index,
)

SPELL_LIMIT = 64

_TOKEN = re.compile(r"\(|\)|[^\s()]+")

_BINARY_FORMULA = {"=": Eq, "<=": Leq, "and": And, "or": Or, "imp": Imp, "iff": Iff}
_BINARY_TERM = {"+": Add, "*": Mul}
_NAMES = {Eq: "=", Leq: "<=", And: "and", Or: "or", Imp: "imp", Iff: "iff",
          Add: "+", Mul: "*", Forall: "all", Exists: "ex"}


def to_text(node: Node) -> str:
    memo: dict = {}

    def go(n):
        hit = memo.get(n)
        if hit is not None:
            return hit
        if isinstance(n, Num):
            if n.value <= SPELL_LIMIT:
                out = "(S " * n.value + "0" + ")" * n.value
            else:
                out = f"(num {n.value})"
        elif isinstance(n, One):
            out = "1"
        elif isinstance(n, Var):
            out = f"(v {n.name})"
        elif isinstance(n, Succ):
            out = f"(S {go(n.arg)})"
        elif isinstance(n, Fn):
            out = "(fn " + " ".join([n.name, *(go(a) for a in n.fargs)]) + ")"
        elif isinstance(n, Pred):
            out = f"({n.symbol} {go(n.arg)})"
        elif isinstance(n, Not):
            out = f"(not {go(n.body)})"
        elif isinstance(n, (Forall, Exists)):
            out = f"({_NAMES[type(n)]} {n.var} {go(n.body)})"
        else:
            out = f"({_NAMES[type(n)]} {go(n.left)} {go(n.right)})"
        memo[n] = out
        return out

    return go(node)


def _tokenize(text: str) -> list:
    return _TOKEN.findall(text)


def _read(tokens: list):
    """Tokens to nested lists of strings."""
    stack: list = [[]]
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ParseError("unbalanced '('")
    return stack[0]


def _ident(tok) -> str:
    if not isinstance(tok, str):
        raise ParseError(f"expected an identifier, got {tok!r}")
    try:
        var_index(tok)
    except ValueError:
        raise ParseError(f"invalid identifier {tok!r}") from None
    return tok


def _term(s):
    if isinstance(s, str):
        if s == "0":
            return Num(0)
        if s == "1":
            return One()
        raise ParseError(f"unexpected atom {s!r} in term position")
    if not s:
        raise ParseError("empty list")
    head, rest = s[0], s[1:]
    if head == "S" and len(rest) == 1:
        return Succ(_term(rest[0]))
    if head in _BINARY_TERM and len(rest) == 2:
        return _BINARY_TERM[head](_term(rest[0]), _term(rest[1]))
    if head == "v" and len(rest) == 1:
        return Var(_ident(rest[0]))
    if head == "num" and len(rest) == 1 and isinstance(rest[0], str) and rest[0].isdigit():
        return Num(int(rest[0]))
    if head == "fn" and rest and isinstance(rest[0], str):
        return Fn(rest[0], tuple(_term(a) for a in rest[1:]))
    raise ParseError(f"malformed term {s!r}")


def _formula(s):
    if isinstance(s, str) or not s:
        raise ParseError(f"expected a formula, got {s!r}")
    head, rest = s[0], s[1:]
    if head in ("=", "<=") and len(rest) == 2:
        return _BINARY_FORMULA[head](_term(rest[0]), _term(rest[1]))
    if head in ("and", "or", "imp", "iff") and len(rest) == 2:
        return _BINARY_FORMULA[head](_formula(rest[0]), _formula(rest[1]))
    if head in ("P", "T") and len(rest) == 1:
        return Pred(head, _term(rest[0]))
    if head == "not" and len(rest) == 1:
        return Not(_formula(rest[0]))
    if head in ("all", "ex") and len(rest) == 2:
        cls = Forall if head == "all" else Exists
        return cls(_ident(rest[0]), _formula(rest[1]))
    raise ParseError(f"malformed formula starting with {head!r}")


def _parse_one(text: str, reader):
    forms = _read(_tokenize(text))
    if len(forms) != 1:
        raise ParseError(f"expected exactly one expression, found {len(forms)}")
    return reader(forms[0])


def parse_formula(text: str):
    return _parse_one(text, _formula)


def parse_term(text: str):
    return _parse_one(text, _term)


def parse(text: str):
    """Parse a formula, falling back to a term."""
    forms = _read(_tokenize(text))
    if len(forms) != 1:
        raise ParseError(f"expected exactly one expression, found {len(forms)}")
    try:
        return _formula(forms[0])
    except ParseError:
        return _term(forms[0])


def parse_corpus(text: str) -> list:
    """All formulas in a newline- or whitespace-separated corpus."""
    return [_formula(s) for s in _read(_tokenize(text))] if text.strip() else []
