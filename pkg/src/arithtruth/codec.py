"""Goedel coding of terms and formulas.

A syntax object is serialized in prefix order as a bit string: a 5-bit tag
per node followed by its payload (Elias-gamma numbers for numerals, variable
indices and function symbols) and then its children. The code is the integer
whose binary expansion is ``1`` followed by that string. Serializations are
prefix-free, so decoding is unambiguous, and the serialization of a proper
subterm or subformula is a proper substring of its parent's, hence strictly
shorter; codes are therefore subformula-monotone by bit length. Code size is
linear in the size of the syntax tree.
"""
from __future__ import annotations

from .errors import ArityError, NotACode, OpenTerm
from .syntax import (
    Add, And, Eq, Exists, Fn, Forall, Formula, Iff, Imp, Leq, Mul, Node, Not, Num,
    One, Or, Pred, Succ, Term, Var, free_var_order, instantiate, is_closed, is_pure,
    var_index, var_name,
)

TAG_BITS = 5

TAGS = {
    Num: 0, One: 1, Var: 2, Succ: 3, Add: 4, Mul: 5, Fn: 6,
    Eq: 8, Leq: 9, Pred: 10, Not: 11, And: 12, Or: 13, Imp: 14, Iff: 15,
    Forall: 16, Exists: 17,
}
_BY_TAG = {v: k for k, v in TAGS.items()}
TERM_TAGS = frozenset(TAGS[c] for c in (Num, One, Var, Succ, Add, Mul, Fn))

# arity None means variadic
FN_ARITY = {
    "val": 1, "sub": None, "clterm": 1, "form": 1, "sent": 1, "num": 1,
    "neg": 1, "conj": 2, "disj": 2, "all": 1, "ex": 1, "eq": 2, "leq": 2,
    "bit": 2, "fv1": 1, "indrho": 1,
}
FN_NAMES = tuple(FN_ARITY)
_FN_INDEX = {n: i for i, n in enumerate(FN_NAMES)}

_PRED_BIT = {"P": "0", "T": "1"}


class GoedelCode(int):
    """A natural number that codes a term or a formula."""

    def __new__(cls, value, kind):
        obj = super().__new__(cls, value)
        obj.kind = kind
        return obj

    def __repr__(self):
        return f"GoedelCode({int(self)}, {self.kind!r})"


class SetCode(int):
    """Bit-sum code of a finite set of naturals: ``sum(2**x for x in s)``."""

    def __repr__(self):
        return f"SetCode({int(self)})"


def gamma(n: int) -> str:
    """Elias gamma code of ``n >= 1``."""
    b = bin(n)[2:]
    return "0" * (len(b) - 1) + b


def _tag(cls) -> str:
    return format(TAGS[cls], f"0{TAG_BITS}b")


def serialize(node: Node) -> str:
    memo: dict = {}

    def go(n):
        hit = memo.get(n)
        if hit is not None:
            return hit
        tag = _tag(type(n))
        if isinstance(n, Num):
            out = tag + gamma(n.value + 1)
        elif isinstance(n, One):
            out = tag
        elif isinstance(n, Var):
            out = tag + gamma(var_index(n.name) + 1)
        elif isinstance(n, Fn):
            if n.name not in _FN_INDEX:
                raise ValueError(f"unknown function symbol {n.name!r}")
            out = tag + gamma(_FN_INDEX[n.name] + 1) + gamma(len(n.fargs) + 1) + "".join(
                go(a) for a in n.fargs)
        elif isinstance(n, Pred):
            out = tag + _PRED_BIT[n.symbol] + go(n.arg)
        elif isinstance(n, (Forall, Exists)):
            out = tag + gamma(var_index(n.var) + 1) + go(n.body)
        else:
            out = tag + "".join(go(c) for c in n.children())
        memo[n] = out
        return out

    return go(node)


def encode(obj: Node) -> GoedelCode:
    kind = "TermCode" if isinstance(obj, Term) else "FormulaCode"
    return GoedelCode(int("1" + serialize(obj), 2), kind)


class _Reader:
    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def take(self, k: int) -> str:
        if self.pos + k > len(self.bits):
            raise NotACode("truncated code")
        out = self.bits[self.pos:self.pos + k]
        self.pos += k
        return out

    def gamma(self) -> int:
        zeros = 0
        while True:
            b = self.take(1)
            if b == "1":
                break
            zeros += 1
        return int("1" + self.take(zeros), 2) if zeros else 1

    def node(self) -> Node:
        tag = int(self.take(TAG_BITS), 2)
        cls = _BY_TAG.get(tag)
        if cls is None:
            raise NotACode(f"unknown tag {tag}")
        if cls is Num:
            return Num(self.gamma() - 1)
        if cls is One:
            return One()
        if cls is Var:
            return Var(var_name(self.gamma() - 1))
        if cls is Succ:
            arg = self.term()
            if isinstance(arg, Num):
                raise NotACode("non-canonical successor of a numeral")
            return Succ(arg)
        if cls in (Add, Mul):
            return cls(self.term(), self.term())
        if cls is Fn:
            idx = self.gamma() - 1
            if idx >= len(FN_NAMES):
                raise NotACode("unknown function symbol")
            name = FN_NAMES[idx]
            n = self.gamma() - 1
            if FN_ARITY[name] is not None and FN_ARITY[name] != n:
                raise NotACode(f"wrong arity for {name}")
            return Fn(name, tuple(self.term() for _ in range(n)))
        if cls in (Eq, Leq):
            return cls(self.term(), self.term())
        if cls is Pred:
            return Pred("P" if self.take(1) == "0" else "T", self.term())
        if cls is Not:
            return Not(self.formula())
        if cls in (And, Or, Imp, Iff):
            return cls(self.formula(), self.formula())
        return cls(var_name(self.gamma() - 1), self.formula())

    def term(self) -> Term:
        n = self.node()
        if not isinstance(n, Term):
            raise NotACode("formula in term position")
        return n

    def formula(self) -> Formula:
        n = self.node()
        if not isinstance(n, Formula):
            raise NotACode("term in formula position")
        return n


_decode_cache: dict = {}


def decode(c: int) -> Node:
    """Left inverse of :func:`encode`; raises :class:`NotACode` otherwise."""
    c = int(c)
    hit = _decode_cache.get(c)
    if hit is not None:
        return hit
    if c < 2:
        raise NotACode(f"{c} is not a code")
    reader = _Reader(bin(c)[3:])
    node = reader.node()
    if reader.pos != len(reader.bits):
        raise NotACode("trailing bits")
    if c.bit_length() < 4096:
        if len(_decode_cache) > 200_000:
            _decode_cache.clear()
        _decode_cache[c] = node
    return node


def try_decode(c: int):
    try:
        return decode(c)
    except NotACode:
        return None


def recognize(c: int) -> frozenset:
    """Flags among IsForm, IsSent, IsTerm, IsClTerm for pure arithmetical syntax."""
    node = try_decode(c)
    if node is None or not is_pure(node):
        return frozenset()
    if isinstance(node, Formula):
        return frozenset({"IsForm", "IsSent"} if is_closed(node) else {"IsForm"})
    return frozenset({"IsTerm", "IsClTerm"} if is_closed(node) else {"IsTerm"})


def is_formula_code(c: int) -> bool:
    return "IsForm" in recognize(c)


def is_sentence_code(c: int) -> bool:
    return "IsSent" in recognize(c)


def is_closed_term_code(c: int) -> bool:
    return "IsClTerm" in recognize(c)


def decode_formula(c: int) -> Formula:
    node = decode(c)
    if not isinstance(node, Formula):
        raise NotACode(f"{c} codes a term, not a formula")
    return node


def decode_closed_term(c: int) -> Term:
    node = decode(c)
    if not isinstance(node, Term):
        raise NotACode(f"{c} codes a formula, not a term")
    if not is_closed(node):
        raise OpenTerm(f"{c} codes an open term")
    return node


def code_subst(f_code: int, *t_codes: int) -> GoedelCode:
    """Code of the formula obtained by putting the coded closed terms for its
    leading free variables (default: just the first one)."""
    f = decode_formula(f_code)
    terms = [decode_closed_term(t) for t in t_codes]
    if not terms:
        raise ArityError("at least one term is required")
    if len(free_var_order(f)) < len(terms):
        raise ArityError("more terms than free variables")
    return encode(instantiate(f, terms))


def code_conj(a: int, b: int) -> GoedelCode:
    return encode(And(decode_formula(a), decode_formula(b)))


def finite_set_code(s) -> SetCode:
    c = 0
    for x in set(s):
        if x < 0:
            raise ValueError("sets of naturals only")
        c |= 1 << x
    return SetCode(c)


def member(x: int, c: int) -> bool:
    return x >= 0 and (int(c) >> x) & 1 == 1
