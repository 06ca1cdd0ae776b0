"""Meaning of the ``Fn`` abbreviations: primitive recursive functions on codes.

Every function is total on the naturals. Arguments that are not codes of the
expected kind give ``0``, which is never a code, so formulas built from these
functions stay meaningful on arbitrary inputs.
"""
from __future__ import annotations

from functools import lru_cache

from .codec import encode, member, try_decode
from .errors import OpenTerm
from .syntax import (
    Add, And, Eq, Exists, Fn, Forall, Formula, Leq, Mul, Not, Num, One, Or, Succ, Term, Var,
    free_var_order, instantiate, is_closed, is_pure,
)


def eval_closed_term(t: Term) -> int:
    """Value of a closed term in the standard model."""
    memo: dict = {}

    def go(n):
        hit = memo.get(n)
        if hit is not None:
            return hit
        if isinstance(n, Num):
            out = n.value
        elif isinstance(n, One):
            out = 1
        elif isinstance(n, Var):
            raise OpenTerm(f"term contains the variable {n.name}")
        elif isinstance(n, Succ):
            out = go(n.arg) + 1
        elif isinstance(n, Add):
            out = go(n.left) + go(n.right)
        elif isinstance(n, Mul):
            out = go(n.left) * go(n.right)
        elif isinstance(n, Fn):
            out = apply(n.name, tuple(go(a) for a in n.fargs))
        else:
            raise TypeError(f"not a term: {n!r}")
        memo[n] = out
        return out

    return go(t)


def _formula(c):
    n = try_decode(c)
    return n if isinstance(n, Formula) else None


def _closed_term(c):
    n = try_decode(c)
    return n if isinstance(n, Term) and is_closed(n) else None


def _pure_closed_term(c):
    n = _closed_term(c)
    return n if n is not None and is_pure(n) else None


def _val(c):
    t = _closed_term(c)
    return eval_closed_term(t) if t is not None else 0


def _sub(c, *ts):
    f = _formula(c)
    if f is None or len(free_var_order(f)) < len(ts):
        return 0
    terms = []
    for tc in ts:
        t = _closed_term(tc)
        if t is None:
            return 0
        terms.append(t)
    return int(encode(instantiate(f, terms)))


def _flag(pred):
    def fn(c):
        n = try_decode(c)
        return 1 if n is not None and pred(n) else 0
    return fn


def _unary_formula(build):
    def fn(c):
        f = _formula(c)
        return int(encode(build(f))) if f is not None else 0
    return fn


def _binary_formula(cls):
    def fn(a, b):
        f, g = _formula(a), _formula(b)
        return int(encode(cls(f, g))) if f is not None and g is not None else 0
    return fn


def _binary_atom(cls):
    def fn(a, b):
        s, t = try_decode(a), try_decode(b)
        if isinstance(s, Term) and isinstance(t, Term):
            return int(encode(cls(s, t)))
        return 0
    return fn


def _quantify(cls):
    def fn(c):
        f = _formula(c)
        if f is None:
            return 0
        fvo = free_var_order(f)
        if not fvo:
            return 0
        return int(encode(cls(fvo[0], f)))
    return fn


def _fv1(c):
    f = _formula(c)
    return 1 if f is not None and is_pure(f) and len(free_var_order(f)) == 1 else 0


def _indrho(y):
    from .factory import ind_k, rho
    return int(encode(ind_k(y, rho(y))))


FUNCTIONS = {
    "val": _val,
    "sub": _sub,
    "clterm": lambda c: 1 if _pure_closed_term(c) is not None else 0,
    "form": _flag(lambda n: isinstance(n, Formula) and is_pure(n)),
    "sent": _flag(lambda n: isinstance(n, Formula) and is_pure(n) and is_closed(n)),
    "num": lambda n: int(encode(Num(n))),
    "neg": _unary_formula(Not),
    "conj": _binary_formula(And),
    "disj": _binary_formula(Or),
    "all": _quantify(Forall),
    "ex": _quantify(Exists),
    "eq": _binary_atom(Eq),
    "leq": _binary_atom(Leq),
    "bit": lambda x, c: 1 if member(x, c) else 0,
    "fv1": _fv1,
    "indrho": _indrho,
}


@lru_cache(maxsize=100_000)
def apply(name: str, args: tuple) -> int:
    fn = FUNCTIONS.get(name)
    if fn is None:
        raise ValueError(f"unknown function symbol {name!r}")
    return fn(*args)
