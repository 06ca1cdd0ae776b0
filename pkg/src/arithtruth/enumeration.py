"""Enumeration of arithmetical formulas in increasing code order.

Codes are ordered first by serialization length and then lexicographically,
so the enumeration is generated length by length: every pure syntax object
with a serialization of exactly ``L`` bits is built from shorter ones and the
level is sorted. ``chi(i)`` only ever materializes the levels up to the one
containing index ``i``.
"""
from __future__ import annotations

import bisect
import threading
from functools import lru_cache

from .codec import TAG_BITS, _tag, gamma, serialize
from .errors import NotArithmetical
from .syntax import (
    Add, And, Eq, Exists, Forall, Formula, Iff, Imp, Leq, Mul, Not, Num, One, Or, Pred,
    Succ, Var, free_var_order, is_closed, is_pure, is_semirelational, var_name,
)

_lock = threading.RLock()


def _gamma_range(g: int):
    """Values ``m >= 1`` whose gamma code has exactly ``g`` bits."""
    if g < 1 or g % 2 == 0:
        return range(0)
    k = (g - 1) // 2
    return range(1 << k, 1 << (k + 1))


@lru_cache(maxsize=None)
def _terms(length: int) -> tuple:
    out = []
    if length == TAG_BITS:
        out.append((_tag(One), One()))
    g = length - TAG_BITS
    for m in _gamma_range(g):
        out.append((_tag(Num) + gamma(m), Num(m - 1)))
        out.append((_tag(Var) + gamma(m), Var(var_name(m - 1))))
    for bits, t in _terms_upto(length - TAG_BITS):
        if not isinstance(t, Num):
            out.append((_tag(Succ) + bits, Succ(t)))
    rest = length - TAG_BITS
    for a in range(TAG_BITS, rest - TAG_BITS + 1):
        left, right = _terms(a), _terms(rest - a)
        for cls in (Add, Mul):
            tag = _tag(cls)
            for lb, lt in left:
                for rb, rt in right:
                    out.append((tag + lb + rb, cls(lt, rt)))
    out.sort(key=lambda p: p[0])
    return tuple(out)


def _terms_upto(length: int) -> tuple:
    return _terms(length) if length >= TAG_BITS else ()


@lru_cache(maxsize=None)
def _formulas(length: int, with_p: bool) -> tuple:
    out = []
    rest = length - TAG_BITS
    if rest <= 0:
        return ()
    for a in range(TAG_BITS, rest - TAG_BITS + 1):
        left, right = _terms(a), _terms(rest - a)
        for cls in (Eq, Leq):
            tag = _tag(cls)
            for lb, lt in left:
                for rb, rt in right:
                    out.append((tag + lb + rb, cls(lt, rt)))
    if with_p:
        for bits, t in _terms_upto(rest - 1):
            out.append((_tag(Pred) + "0" + bits, Pred("P", t)))
    for bits, f in _formulas(rest, with_p) if rest > TAG_BITS else ():
        out.append((_tag(Not) + bits, Not(f)))
    for a in range(1, rest):
        left = _formulas(a, with_p) if a > TAG_BITS else ()
        if not left:
            continue
        right = _formulas(rest - a, with_p) if rest - a > TAG_BITS else ()
        for cls in (And, Or, Imp, Iff):
            tag = _tag(cls)
            for lb, lf in left:
                for rb, rf in right:
                    out.append((tag + lb + rb, cls(lf, rf)))
    for g in range(1, rest):
        body = _formulas(rest - g, with_p) if rest - g > TAG_BITS else ()
        if not body:
            continue
        for m in _gamma_range(g):
            v = var_name(m - 1)
            for cls in (Forall, Exists):
                tag = _tag(cls) + gamma(m)
                for bb, bf in body:
                    out.append((tag + bb, cls(v, bf)))
    out.sort(key=lambda p: p[0])
    return tuple(out)


def formulas_of_length(length: int, with_p: bool = False) -> tuple:
    """Pure formulas whose serialization has exactly ``length`` bits, in code order."""
    with _lock:
        return tuple(f for _, f in _formulas(length, with_p))


def terms_of_length(length: int) -> tuple:
    with _lock:
        return tuple(t for _, t in _terms_upto(length))


class _Sequence:
    """Lazily extended code-ordered list of formulas satisfying a filter."""

    def __init__(self, with_p: bool, keep):
        self.with_p = with_p
        self.keep = keep
        self.items: list = []
        self.level_start: dict = {}
        self.next_length = 1

    def extend_to(self, i: int):
        with _lock:
            while len(self.items) <= i:
                self.level_start[self.next_length] = len(self.items)
                self.items.extend(f for f in formulas_of_length(self.next_length, self.with_p)
                                  if self.keep(f))
                self.next_length += 1
                if self.next_length > 200:
                    raise RuntimeError("enumeration exhausted its length budget")
            return self.items[i]

    def index(self, f: Formula) -> int:
        bits = serialize(f)
        length = len(bits)
        with _lock:
            while self.next_length <= length:
                self.extend_to(len(self.items))
            start = self.level_start[length]
            end = self.level_start.get(length + 1, len(self.items))
            keys = [serialize(g) for g in self.items[start:end]]
            pos = bisect.bisect_left(keys, bits)
            if pos == len(keys) or keys[pos] != bits:
                raise ValueError("formula is not in this enumeration")
            return start + pos


_CHI = _Sequence(False, lambda f: True)
_CHI1 = _Sequence(False, lambda f: len(free_var_order(f)) <= 1)
_SEMIREL_P = _Sequence(True, lambda f: is_semirelational(f) and len(free_var_order(f)) >= 1)


def chi(i: int) -> Formula:
    """The ``i``-th pure arithmetical formula in increasing code order."""
    if i < 0:
        raise IndexError("index must be non-negative")
    return _CHI.extend_to(i)


def chi_index(f: Formula) -> int:
    if any(isinstance(n, Pred) for n in _nodes(f)):
        raise NotArithmetical("formula mentions a predicate symbol")
    if not is_pure(f):
        raise NotArithmetical("formula uses function abbreviations outside the enumerated language")
    return _CHI.index(f)


def chi1(i: int) -> Formula:
    """The ``i``-th formula with at most one free variable."""
    return _CHI1.extend_to(i)


def arity(i: int) -> int:
    return len(free_var_order(chi(i)))


def semirelational_pformula(i: int) -> Formula:
    """``i``-th semirelational formula of arithmetic with ``P`` having a free variable."""
    return _SEMIREL_P.extend_to(i)


def _nodes(f):
    from .syntax import iter_nodes
    return iter_nodes(f)


def pure_sentences_below(bound: int) -> list:
    """Pure sentences with code ``< bound`` in increasing code order."""
    from .codec import encode
    out = []
    for length in range(1, max(bound.bit_length(), 1)):
        for f in formulas_of_length(length):
            if is_closed(f) and encode(f) < bound:
                out.append(f)
    return out


@lru_cache(maxsize=64)
def closed_terms_below(bound: int) -> tuple:
    """Pure closed terms with code ``< bound`` in increasing code order."""
    from .codec import encode
    out = []
    for length in range(1, max(bound.bit_length(), 1)):
        for t in terms_of_length(length):
            if is_closed(t) and encode(t) < bound:
                out.append(t)
    return tuple(out)
