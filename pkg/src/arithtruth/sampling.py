"""Seeded random generators for terms, formulas and tuples."""
from __future__ import annotations

import random

from .primitives import eval_closed_term
from .syntax import (
    Add, And, Eq, Exists, Forall, Iff, Imp, Leq, Mul, Not, Num, One, Or, Pred, Succ, Var,
    free_var_order,
)

VARS = ("x", "y", "z")


def random_term(rng: random.Random, depth: int, variables=VARS, max_num: int = 5):
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if variables and r < 0.4:
            return Var(rng.choice(variables))
        if r < 0.6:
            return One()
        return Num(rng.randint(0, max_num))
    kind = rng.choice((Succ, Add, Mul))
    if kind is Succ:
        return Succ(random_term(rng, depth - 1, variables, max_num))
    return kind(random_term(rng, depth - 1, variables, max_num),
                random_term(rng, depth - 1, variables, max_num))


def random_closed_term(rng: random.Random, max_value: int = 50, depth: int = 3):
    while True:
        t = random_term(rng, depth, (), max_num=max_value)
        if eval_closed_term(t) <= max_value:
            return t


def random_formula(rng: random.Random, depth: int, variables=VARS, predicates=(),
                   semirelational: bool = False, bounded: bool = False, max_num: int = 5):
    """Random formula of nesting depth at most ``depth``.

    ``predicates`` lists symbols that may occur; with ``semirelational`` they
    are only applied to variables. With ``bounded`` every quantifier is guarded
    by ``v <= k`` for a numeral ``k <= 8``.
    """
    def atom():
        if predicates and rng.random() < 0.35:
            sym = rng.choice(predicates)
            arg = Var(rng.choice(variables)) if semirelational else random_term(rng, 1, variables, max_num)
            return Pred(sym, arg)
        cls = rng.choice((Eq, Leq))
        return cls(random_term(rng, 2, variables, max_num), random_term(rng, 2, variables, max_num))

    def go(d):
        if d <= 0 or rng.random() < 0.25:
            return atom()
        r = rng.random()
        if r < 0.2:
            return Not(go(d - 1))
        if r < 0.65:
            cls = rng.choice((And, Or, Imp, Iff))
            return cls(go(d - 1), go(d - 1))
        v = rng.choice(variables)
        body = go(d - 1)
        if bounded:
            guard = Leq(Var(v), Num(rng.randint(0, 8)))
            if rng.random() < 0.5:
                return Forall(v, Imp(guard, body))
            return Exists(v, And(guard, body))
        return rng.choice((Forall, Exists))(v, body)

    return go(depth)


def random_sentence(rng: random.Random, depth: int, **kw):
    f = random_formula(rng, depth, **kw)
    for v in reversed(free_var_order(f)):
        if kw.get("bounded"):
            f = Forall(v, Imp(Leq(Var(v), Num(rng.randint(0, 8))), f))
        else:
            f = Forall(v, f)
    return f


def random_term_tuple(rng: random.Random, n: int, max_value: int = 50) -> tuple:
    return tuple(random_closed_term(rng, max_value) for _ in range(n))
