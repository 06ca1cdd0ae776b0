"""Three-valued bounded evaluation over the standard model.

``TRUE`` and ``FALSE`` are only returned when they are correct in the standard
model (for the given interpretation of ``P`` and ``T``); ``UNKNOWN`` means a
search budget ran out or a partial interpretation was silent.

Quantifiers are searched over a finite domain. A quantifier whose body is
guarded (``all v (v <= t -> ...)``, ``ex v (v = t and ...)``,
``all v (clterm(v) = 1 -> ...)`` and the like) only visits the values the
guard admits; numeric guards are exact, term guards and unguarded quantifiers
are truncated by the budget. In ``exhaustive`` mode a truncated search that
finds no counterexample (or no witness) is taken at face value, which is
the semantics of the finite initial segment rather than of the standard model.

Blocks of term quantifiers in front of ``x = sub(c, t1, ..., tn)`` guards are
resolved by decoding the value of ``x`` instead of searching (the decode rule).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Mapping

from .codec import SetCode, encode, member, try_decode
from .enumeration import closed_terms_below, pure_sentences_below
from .errors import ArithTruthError, MissingBinding, ShapeError
from .primitives import apply, eval_closed_term
from .syntax import (
    Add, And, Eq, Exists, Fn, Forall, Formula, Iff, Imp, Leq, Mul, Not, Num, One, Or, Pred,
    Succ, Term, Var, free_var_order, free_vars, is_closed,
)


class TriBool(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __invert__(self):
        return t_not(self)

    def __and__(self, other):
        return t_and(self, other)

    def __or__(self, other):
        return t_or(self, other)

    def __bool__(self):
        raise TypeError("TriBool has no two-valued truth; compare with TRUE/FALSE")

    @property
    def definite(self) -> bool:
        return self is not TriBool.UNKNOWN

    def __str__(self):
        return self.value


TRUE, FALSE, UNKNOWN = TriBool.TRUE, TriBool.FALSE, TriBool.UNKNOWN


def tri(b) -> TriBool:
    if isinstance(b, TriBool):
        return b
    if b is None:
        return UNKNOWN
    return TRUE if b else FALSE


def t_not(a: TriBool) -> TriBool:
    return FALSE if a is TRUE else TRUE if a is FALSE else UNKNOWN


def t_and(a: TriBool, b: TriBool) -> TriBool:
    if a is FALSE or b is FALSE:
        return FALSE
    if a is TRUE and b is TRUE:
        return TRUE
    return UNKNOWN


def t_or(a: TriBool, b: TriBool) -> TriBool:
    if a is TRUE or b is TRUE:
        return TRUE
    if a is FALSE and b is FALSE:
        return FALSE
    return UNKNOWN


def t_imp(a: TriBool, b: TriBool) -> TriBool:
    return t_or(t_not(a), b)


def t_iff(a: TriBool, b: TriBool) -> TriBool:
    if not (a.definite and b.definite):
        return UNKNOWN
    return tri(a is b)


@dataclass(frozen=True)
class EvalBudget:
    quantifier_bound: int = 20
    clterm_bound: int = 1 << 17
    depth_bound: int = 3
    range_bound: int = 10_000
    exhaustive: bool = False
    decode_rule: bool = True

    def __post_init__(self):
        for name in ("quantifier_bound", "clterm_bound", "depth_bound", "range_bound"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def scaled(self, k: int) -> "EvalBudget":
        return replace(self, quantifier_bound=self.quantifier_bound * k,
                       clterm_bound=self.clterm_bound * k, range_bound=self.range_bound * k)

    def to_dict(self) -> dict:
        return {"quantifier_bound": self.quantifier_bound, "clterm_bound": self.clterm_bound,
                "depth_bound": self.depth_bound, "range_bound": self.range_bound,
                "exhaustive": self.exhaustive, "decode_rule": self.decode_rule}


class TruthAssignment:
    """Partial map from sentence codes below ``bound`` to truth values."""

    def __init__(self, values: Mapping[int, bool] = (), bound: int | None = None):
        values = {int(k): bool(v) for k, v in dict(values).items()}
        if bound is None:
            bound = max(values, default=-1) + 1
        if any(k >= bound for k in values):
            raise ValueError("assignment has codes at or above its bound")
        self._values = MappingProxyType(values)
        self.bound = int(bound)

    @property
    def values(self) -> Mapping[int, bool]:
        return self._values

    def get(self, code: int) -> TriBool:
        v = self._values.get(int(code))
        return UNKNOWN if v is None else tri(v)

    def __contains__(self, code) -> bool:
        return int(code) in self._values

    def __len__(self):
        return len(self._values)

    def __iter__(self):
        return iter(sorted(self._values))

    def __eq__(self, other):
        return (isinstance(other, TruthAssignment) and self.bound == other.bound
                and dict(self._values) == dict(other._values))

    def __hash__(self):
        return hash((self.bound, frozenset(self._values.items())))

    def __repr__(self):
        return f"TruthAssignment({len(self)} entries, bound={self.bound})"

    def flipped(self, code: int) -> "TruthAssignment":
        vals = dict(self._values)
        vals[int(code)] = not vals[int(code)]
        return TruthAssignment(vals, self.bound)

    def restricted(self, codes) -> "TruthAssignment":
        keep = {int(c) for c in codes}
        return TruthAssignment({k: v for k, v in self._values.items() if k in keep}, self.bound)

    def true_codes(self) -> list:
        return sorted(k for k, v in self._values.items() if v)

    def to_dict(self) -> dict:
        return {"bound": self.bound, "values": {str(k): v for k, v in sorted(self._values.items())}}


class TruthOracle:
    """Interpret a predicate as truth in the standard model: ``T(n)`` holds iff
    ``n`` codes a true sentence. Sentences may use ``Fn`` abbreviations and
    predicates themselves; nesting is limited by the budget's ``depth_bound``."""

    def __repr__(self):
        return "TruthOracle()"


TRUTH = TruthOracle()


def _as_predicate(interp):
    """Normalize an interpretation into ``(evaluator, n) -> TriBool``."""
    if interp is None:
        return None
    if isinstance(interp, TruthOracle):
        return lambda ev, n: ev._truth_of_code(n)
    if isinstance(interp, TruthAssignment):
        return lambda ev, n: interp.get(n)
    if isinstance(interp, SetCode):
        return lambda ev, n: tri(member(n, interp))
    if isinstance(interp, (set, frozenset)):
        return lambda ev, n: tri(n in interp)
    if callable(interp):
        return lambda ev, n: tri(interp(n))
    raise TypeError(f"unsupported predicate interpretation {interp!r}")


_MISSING = object()


class Evaluator:
    """Evaluation with fixed interpretations and budget; results are memoized
    per (node, values of its free variables) for the evaluator's lifetime."""

    def __init__(self, p_interp=None, budget: EvalBudget | None = None, t_interp=None):
        self.budget = budget or EvalBudget()
        self._preds = {"P": _as_predicate(p_interp), "T": _as_predicate(t_interp)}
        self._cache: dict = {}
        self._term_cache: dict = {}
        self._depth = 0

    # -- terms ---------------------------------------------------------------
    def term(self, t: Term, env: Mapping[str, int]) -> int:
        if isinstance(t, Num):
            return t.value
        if isinstance(t, Var):
            v = env.get(t.name, _MISSING)
            if v is _MISSING:
                raise MissingBinding(f"no value for variable {t.name}")
            return v
        if isinstance(t, One):
            return 1
        if is_closed(t):
            hit = self._term_cache.get(t)
            if hit is None:
                hit = self._term_cache[t] = eval_closed_term(t)
            return hit
        if isinstance(t, Succ):
            return self.term(t.arg, env) + 1
        if isinstance(t, Add):
            return self.term(t.left, env) + self.term(t.right, env)
        if isinstance(t, Mul):
            return self.term(t.left, env) * self.term(t.right, env)
        if isinstance(t, Fn):
            return apply(t.name, tuple(self.term(a, env) for a in t.fargs))
        raise TypeError(f"not a term: {t!r}")

    # -- formulas ------------------------------------------------------------
    def eval(self, f: Formula, env: Mapping[str, int] | None = None) -> TriBool:
        env = env or {}
        try:
            key = (f, tuple(env[v] for v in free_var_order(f)))
        except KeyError as exc:
            raise MissingBinding(f"no value for variable {exc.args[0]}") from None
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self._eval(f, env)
        self._cache[key] = out
        return out

    def _eval(self, f, env) -> TriBool:
        if isinstance(f, Eq):
            return tri(self.term(f.left, env) == self.term(f.right, env))
        if isinstance(f, Leq):
            return tri(self.term(f.left, env) <= self.term(f.right, env))
        if isinstance(f, Pred):
            pred = self._preds[f.symbol]
            if pred is None:
                raise ArithTruthError(f"no interpretation given for predicate {f.symbol}")
            return pred(self, self.term(f.arg, env))
        if isinstance(f, Not):
            return t_not(self.eval(f.body, env))
        if isinstance(f, And):
            a = self.eval(f.left, env)
            return FALSE if a is FALSE else t_and(a, self.eval(f.right, env))
        if isinstance(f, Or):
            a = self.eval(f.left, env)
            return TRUE if a is TRUE else t_or(a, self.eval(f.right, env))
        if isinstance(f, Imp):
            a = self.eval(f.left, env)
            return TRUE if a is FALSE else t_imp(a, self.eval(f.right, env))
        if isinstance(f, Iff):
            return t_iff(self.eval(f.left, env), self.eval(f.right, env))
        if isinstance(f, (Forall, Exists)):
            return self._quantifier(f, env)
        raise TypeError(f"not a formula: {f!r}")

    def _truth_of_code(self, n: int) -> TriBool:
        node = try_decode(n)
        if not isinstance(node, Formula) or not is_closed(node):
            return FALSE
        if self._depth >= self.budget.depth_bound:
            return UNKNOWN
        self._depth += 1
        try:
            return self.eval(node, {})
        finally:
            self._depth -= 1

    # -- quantifiers ---------------------------------------------------------
    def _quantifier(self, f, env) -> TriBool:
        if self.budget.decode_rule:
            out = self._decode_block(f, env)
            if out is not None:
                return out
        universal = isinstance(f, Forall)
        v, body = f.var, f.body
        guard = rest = None
        if universal and isinstance(body, Imp):
            guard, rest = body.left, body.right
        elif not universal and isinstance(body, And):
            guard, rest = body.left, body.right
        domain = self._guard_domain(guard, v, env) if guard is not None else None
        if domain is None:
            values, exact, rest = range(self.budget.quantifier_bound + 1), False, body
        else:
            values, exact = domain
        unknown = False
        inner = dict(env)
        for d in values:
            inner[v] = d
            r = self.eval(rest, inner)
            if universal and r is FALSE:
                return FALSE
            if not universal and r is TRUE:
                return TRUE
            if r is UNKNOWN:
                unknown = True
        if unknown or not (exact or self.budget.exhaustive):
            return UNKNOWN
        return TRUE if universal else FALSE

    def _guard_domain(self, g, v, env):
        """Values of ``v`` satisfying guard ``g`` as ``(iterable, exact)``, or None."""
        if isinstance(g, Leq):
            bound = None
            if g.left is Var(v) and v not in free_vars(g.right):
                bound = self.term(g.right, env)
            elif isinstance(g.left, Succ) and g.left.arg is Var(v) and v not in free_vars(g.right):
                bound = self.term(g.right, env) - 1
            if bound is None:
                return None
            if bound + 1 > self.budget.range_bound:
                return range(self.budget.range_bound), False
            return range(max(bound + 1, 0)), True
        if isinstance(g, Eq):
            for a, b in ((g.left, g.right), (g.right, g.left)):
                if a is Var(v) and v not in free_vars(b):
                    return (self.term(b, env),), True
            if (isinstance(g.left, Fn) and g.left.name == "clterm" and g.left.fargs == (Var(v),)
                    and isinstance(g.right, One)):
                return self._term_domain(), False
        return None

    def _term_domain(self) -> tuple:
        return tuple(int(encode(t)) for t in closed_terms_below(self.budget.clterm_bound))

    # -- decode rule ---------------------------------------------------------
    def _decode_block(self, f, env):
        block, core = term_block(f)
        if not block:
            return None
        universal = isinstance(f, Forall)
        parts = _split(core, And if universal else Or)
        plan = []
        for part in parts:
            if universal:
                if not isinstance(part, Imp):
                    return None
                head, body = part.left, part.right
            else:
                head, body = part, None
            m = _sub_guard(head, block)
            if m is None:
                return None
            var, code, tvars = m
            if body is not None and (free_vars(body) & set(block)) - set(tvars):
                return None
            plan.append((var, code, tvars, body))
        acc = TRUE if universal else FALSE
        for var, code, tvars, body in plan:
            match = match_instance(code, len(tvars), self.term(var, env))
            if universal:
                r = TRUE if match is None else self.eval(
                    body, {**env, **{t: int(encode(s)) for t, s in zip(tvars, match)}})
                acc = t_and(acc, r)
                if acc is FALSE:
                    return FALSE
            else:
                if match is not None:
                    return TRUE
        return acc


def term_block(f):
    """Split a block of term quantifiers of one kind off ``f``.

    Returns ``(vars, core)``; ``vars`` is empty if ``f`` does not start with a
    guarded term quantifier.
    """
    cls = type(f)
    if cls not in (Forall, Exists):
        return (), f
    link = Imp if cls is Forall else And
    names = []
    cur = f
    while type(cur) is cls and isinstance(cur.body, link) and _is_clterm_guard(cur.body.left, cur.var):
        names.append(cur.var)
        cur = cur.body.right
    return tuple(names), cur


def _is_clterm_guard(g, v) -> bool:
    return (isinstance(g, Eq) and isinstance(g.left, Fn) and g.left.name == "clterm"
            and g.left.fargs == (Var(v),) and isinstance(g.right, One))


def _split(f, cls) -> list:
    out, stack = [], [f]
    while stack:
        cur = stack.pop()
        if isinstance(cur, cls):
            stack.append(cur.right)
            stack.append(cur.left)
        else:
            out.append(cur)
    return out


def _sub_guard(head, block):
    """Match ``s = sub(c, t1..tn)`` (or ``s = c`` for ``n = 0``) with ``s`` free of the block."""
    if not isinstance(head, Eq) or free_vars(head.left) & set(block):
        return None
    var, rhs = head.left, head.right
    if isinstance(rhs, Num):
        return var, rhs.value, ()
    if not (isinstance(rhs, Fn) and rhs.name == "sub" and rhs.fargs
            and isinstance(rhs.fargs[0], Num)):
        return None
    tvars = []
    for a in rhs.fargs[1:]:
        if not isinstance(a, Var) or a.name not in block or a.name in tvars:
            return None
        tvars.append(a.name)
    return var, rhs.fargs[0].value, tuple(tvars)


def match_instance(template_code: int, n: int, value: int):
    """Closed pure terms ``t1..tn`` with ``sub(template, t1..tn) = value``, or None."""
    template = try_decode(template_code)
    target = try_decode(value)
    if not isinstance(template, Formula) or not isinstance(target, Formula):
        return None
    order = free_var_order(template)
    if len(order) < n:
        return None
    if n == 0:
        return () if template is target else None
    slots = order[:n]
    binding: dict = {}
    if not _match(template, target, set(slots), binding, frozenset()):
        return None
    terms = tuple(binding[s] for s in slots)
    from .syntax import instantiate, is_pure
    if not all(is_pure(t) for t in terms):
        return None
    # matching is modulo successor folding; confirm the instance really is ``target``
    return terms if instantiate(template, terms) is target else None


def _match(p, t, slots, binding, bound) -> bool:
    stack = [(p, t, bound)]
    while stack:
        p, t, bound = stack.pop()
        if isinstance(p, Var) and p.name in slots and p.name not in bound:
            if not isinstance(t, Term) or not is_closed(t):
                return False
            prev = binding.get(p.name)
            if prev is None:
                binding[p.name] = t
            elif prev is not t:
                return False
            continue
        if is_closed(p) or not (free_vars(p) & slots - bound):
            if p is not t:
                return False
            continue
        if isinstance(p, Succ) and isinstance(t, Num):
            if t.value == 0:
                return False
            stack.append((p.arg, Num(t.value - 1), bound))
            continue
        if type(p) is not type(t):
            return False
        if isinstance(p, (Forall, Exists)):
            if p.var != t.var:
                return False
            stack.append((p.body, t.body, bound | {p.var}))
        elif isinstance(p, Pred):
            if p.symbol != t.symbol:
                return False
            stack.append((p.arg, t.arg, bound))
        elif isinstance(p, Fn):
            if p.name != t.name or len(p.fargs) != len(t.fargs):
                return False
            stack.extend((a, b, bound) for a, b in zip(p.fargs, t.fargs))
        else:
            stack.extend((a, b, bound) for a, b in zip(p.children(), t.children()))
    return True


# -- module-level API --------------------------------------------------------

def evaluate(f: Formula, env: Mapping[str, int] | None = None, p_interp=None,
             budget: EvalBudget | None = None, t_interp=None) -> TriBool:
    """Evaluate ``f`` under ``env``; ``P``/``T`` are interpreted by a finite set,
    a :class:`TruthAssignment`, a :class:`SetCode`, a callable, or :data:`TRUTH`."""
    return Evaluator(p_interp, budget, t_interp).eval(f, env or {})


def eval_special_xi(f: Formula, x_value: int, budget: EvalBudget | None = None) -> TriBool:
    """Evaluate a positive and/or combination of term-quantifier blocks (a
    member of the xi or rho families) at ``x_value`` using the decode rule."""
    fvo = free_var_order(f)
    if len(fvo) != 1:
        raise ShapeError("expected exactly one free variable")
    ev = Evaluator(None, replace(budget or EvalBudget(), decode_rule=True))
    env = {fvo[0]: x_value}

    def leaf(g):
        out = ev._decode_block(g, env) if isinstance(g, (Forall, Exists)) else None
        if out is None:
            raise ShapeError(f"not a family-shaped leaf: {str(g)[:80]}")
        return out

    def go(g):
        if isinstance(g, And):
            a = go(g.left)
            return FALSE if a is FALSE else t_and(a, go(g.right))
        if isinstance(g, Or):
            a = go(g.left)
            return TRUE if a is TRUE else t_or(a, go(g.right))
        return leaf(g)

    return go(f)


def truth_sweep(code_bound: int, budget: EvalBudget | None = None) -> TruthAssignment:
    """Definite truth values of all pure sentences with code below ``code_bound``."""
    ev = Evaluator(None, budget)
    values = {}
    for s in pure_sentences_below(code_bound):
        r = ev.eval(s)
        if r.definite:
            values[int(encode(s))] = r is TRUE
    return TruthAssignment(values, code_bound)


def parse_bounds(text: str) -> EvalBudget:
    """``"q,c,d"`` into a budget."""
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("bounds are q,c,d")
    return EvalBudget(quantifier_bound=parts[0], clterm_bound=parts[1], depth_bound=parts[2])


__all__ = [
    "TriBool", "TRUE", "FALSE", "UNKNOWN", "tri", "t_not", "t_and", "t_or", "t_imp", "t_iff",
    "EvalBudget", "TruthAssignment", "TruthOracle", "TRUTH", "Evaluator", "evaluate",
    "eval_special_xi", "truth_sweep", "match_instance", "term_block", "parse_bounds",
]
