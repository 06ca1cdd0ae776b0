"""Abstract syntax for arithmetic with optional unary predicates P and T.

Nodes are hash-consed: constructing a node that is structurally equal to a
live one returns the very same object, so equality is identity and hashing is
O(1). This keeps the (heavily shared) formula families of the factory cheap
to compare, substitute into, and memoize over.

Numerals are stored compactly as ``Num(n)``; ``Succ`` applied to a numeral is
folded into the next numeral, so ``S...S(0)`` has exactly one representation.
``Fn`` terms name primitive recursive functions on codes (substitution,
valuation, ...); they are definitional abbreviations and never appear in the
enumerated language.
"""
from __future__ import annotations

import threading
import weakref
from typing import Iterator, Mapping

from .errors import ArityError, NotSemirelational

ALPHABET = "xyzuvwabcdefghijklmnopqrst"
_LETTER_INDEX = {c: i for i, c in enumerate(ALPHABET)}

PREDICATE_SYMBOLS = ("P", "T")


def var_index(name: str) -> int:
    """Position of ``name`` in the total order of variable identifiers."""
    if not name or any(c not in _LETTER_INDEX for c in name):
        raise ValueError(f"invalid variable identifier {name!r}")
    n = 0
    for c in name:
        n = n * 26 + _LETTER_INDEX[c] + 1
    return n - 1


def var_name(index: int) -> str:
    if index < 0:
        raise ValueError("variable index must be non-negative")
    n = index + 1
    out = []
    while n > 0:
        n, r = divmod(n - 1, 26)
        out.append(ALPHABET[r])
    return "".join(reversed(out))


def fresh_var(avoid, hint: str = "x") -> str:
    """Least identifier at or after ``hint`` (in identifier order) not in ``avoid``."""
    i = var_index(hint)
    while var_name(i) in avoid:
        i += 1
    return var_name(i)


class Node:
    __slots__ = ("_hash", "_fvo", "__weakref__")
    _fields: tuple = ()
    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    def __new__(cls, *args):
        key = (cls, *args)
        with Node._lock:
            node = Node._table.get(key)
            if node is None:
                node = object.__new__(cls)
                for name, value in zip(cls._fields, args):
                    object.__setattr__(node, name, value)
                object.__setattr__(node, "_hash", hash(key))
                object.__setattr__(node, "_fvo", None)
                Node._table[key] = node
        return node

    def __init__(self, *args):
        if len(args) != len(self._fields):
            raise TypeError(f"{type(self).__name__} takes {len(self._fields)} arguments")

    def __setattr__(self, name, value):
        raise AttributeError("syntax nodes are immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __reduce__(self):
        return (type(self), self.args)

    @property
    def args(self) -> tuple:
        return tuple(getattr(self, f) for f in self._fields)

    def children(self) -> tuple:
        out = []
        for a in self.args:
            if isinstance(a, Node):
                out.append(a)
            elif isinstance(a, tuple):
                out.extend(a)
        return tuple(out)

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.args))})"

    def __str__(self):
        from .sexpr import to_text
        return to_text(self)


class Term(Node):
    __slots__ = ()


class Formula(Node):
    __slots__ = ()


class Num(Term):
    """The numeral with ``value`` successors applied to zero."""
    __slots__ = ("value",)
    _fields = ("value",)

    def __new__(cls, value):
        if not isinstance(value, int) or value < 0:
            raise ValueError("numeral value must be a natural number")
        return super().__new__(cls, int(value))


class One(Term):
    __slots__ = ()


class Var(Term):
    __slots__ = ("name",)
    _fields = ("name",)

    def __new__(cls, name):
        var_index(name)
        return super().__new__(cls, name)


class Succ(Term):
    __slots__ = ("arg",)
    _fields = ("arg",)

    def __new__(cls, arg):
        if isinstance(arg, Num):
            return Num(arg.value + 1)
        return super().__new__(cls, arg)


class Add(Term):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Mul(Term):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Fn(Term):
    """Application of a named primitive recursive function on codes."""
    __slots__ = ("name", "fargs")
    _fields = ("name", "fargs")

    def __new__(cls, name, fargs=()):
        return super().__new__(cls, name, tuple(fargs))

    def __init__(self, name, fargs=()):
        pass


def Zero() -> Num:
    return Num(0)


ZERO = Num(0)


class Eq(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Leq(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Pred(Formula):
    __slots__ = ("symbol", "arg")
    _fields = ("symbol", "arg")

    def __new__(cls, symbol, arg):
        if symbol not in PREDICATE_SYMBOLS:
            raise ValueError(f"unknown predicate symbol {symbol!r}")
        return super().__new__(cls, symbol, arg)


class Not(Formula):
    __slots__ = ("body",)
    _fields = ("body",)


class And(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Or(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Imp(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Iff(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")


class Forall(Formula):
    __slots__ = ("var", "body")
    _fields = ("var", "body")

    def __new__(cls, var, body):
        var_index(var)
        return super().__new__(cls, var, body)


class Exists(Formula):
    __slots__ = ("var", "body")
    _fields = ("var", "body")

    def __new__(cls, var, body):
        var_index(var)
        return super().__new__(cls, var, body)


ATOMS = (Eq, Leq, Pred)
CONNECTIVES = (Not, And, Or, Imp, Iff)
BINARY = (And, Or, Imp, Iff)
QUANTIFIERS = (Forall, Exists)

TRUE = Eq(ZERO, ZERO)
FALSE = Not(TRUE)


def P(arg: Term) -> Pred:
    return Pred("P", arg)


def T(arg: Term) -> Pred:
    return Pred("T", arg)


def mk_numeral(n: int) -> Num:
    """The n-th numeral ``S...S(0)``."""
    return Num(n)


def unfold_numeral(t: Term) -> tuple:
    """Spell a numeral out as nested ``('S', ... '0')`` tuples (for display and tests)."""
    if not isinstance(t, Num):
        raise TypeError("not a numeral")
    out: tuple = ("0",)
    for _ in range(t.value):
        out = ("S", out)
    return out


def conj(parts) -> Formula:
    """Right-grouped conjunction; the empty conjunction is ``0=0``."""
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts) -> Formula:
    """Right-grouped disjunction; the empty disjunction is ``not 0=0``."""
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


# -- variables ---------------------------------------------------------------

def free_var_order(node: Node) -> tuple:
    """Free variables in order of first (leftmost) occurrence."""
    cached = node._fvo
    if cached is not None:
        return cached
    stack = [node]
    # iterative post-order so deep formulas do not hit the recursion limit
    while stack:
        cur = stack[-1]
        if cur._fvo is not None:
            stack.pop()
            continue
        pending = [c for c in cur.children() if c._fvo is None]
        if pending:
            stack.extend(reversed(pending))
            continue
        stack.pop()
        if isinstance(cur, Var):
            fvo = (cur.name,)
        elif isinstance(cur, QUANTIFIERS):
            fvo = tuple(v for v in cur.body._fvo if v != cur.var)
        else:
            seen: list = []
            for c in cur.children():
                for v in c._fvo:
                    if v not in seen:
                        seen.append(v)
            fvo = tuple(seen)
        object.__setattr__(cur, "_fvo", fvo)
    return node._fvo


def free_vars(node: Node) -> frozenset:
    return frozenset(free_var_order(node))


def is_closed(node: Node) -> bool:
    return not free_var_order(node)


def all_vars(node: Node) -> set:
    """Every variable name occurring in ``node``, bound or free."""
    out: set = set()
    seen: set = set()
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        if isinstance(cur, Var):
            out.add(cur.name)
        elif isinstance(cur, QUANTIFIERS):
            out.add(cur.var)
        stack.extend(cur.children())
    return out


def iter_nodes(node: Node) -> Iterator[Node]:
    """Distinct nodes of the DAG under ``node``."""
    seen: set = set()
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        yield cur
        stack.extend(cur.children())


def size(node: Node) -> int:
    """Number of nodes of the syntax tree (shared subtrees counted per occurrence)."""
    memo: dict = {}
    for cur in _postorder(node):
        memo[cur] = 1 + sum(memo[c] for c in cur.children())
    return memo[node]


def depth(node: Node) -> int:
    memo: dict = {}
    for cur in _postorder(node):
        memo[cur] = 1 + max((memo[c] for c in cur.children()), default=0)
    return memo[node]


def _postorder(node: Node) -> list:
    order, seen, stack = [], set(), [(node, False)]
    while stack:
        cur, done = stack.pop()
        if done:
            order.append(cur)
            continue
        if cur in seen:
            continue
        seen.add(cur)
        stack.append((cur, True))
        stack.extend((c, False) for c in cur.children())
    return order


def pred_symbols(node: Node) -> set:
    return {n.symbol for n in iter_nodes(node) if isinstance(n, Pred)}


def has_fn(node: Node) -> bool:
    return any(isinstance(n, Fn) for n in iter_nodes(node))


def is_pure(node: Node) -> bool:
    """True for plain L_PA syntax: no predicate symbol and no ``Fn`` abbreviation."""
    return not any(isinstance(n, (Fn, Pred)) for n in iter_nodes(node))


def in_language(f: Formula, lang: str) -> bool:
    """Membership in ``"PA"``, ``"PAP"`` or ``"PAT"`` (``Fn`` abbreviations allowed)."""
    syms = pred_symbols(f)
    if lang == "PA":
        return not syms
    if lang == "PAP":
        return syms <= {"P"}
    if lang == "PAT":
        return syms <= {"T"}
    raise ValueError(lang)


# -- substitution ------------------------------------------------------------

def subst_terms(f: Node, assignment: Mapping[str, Term]) -> Node:
    """Capture-avoiding simultaneous substitution of terms for free variables.

    A bound variable is renamed (to the least fresh identifier after it) only
    when it would capture a variable of a substituted term.
    """
    memo: dict = {}

    def go(node, mapping):
        fvo = free_var_order(node)
        rel = tuple((v, mapping[v]) for v in fvo if v in mapping)
        if not rel:
            return node
        key = (node, rel)
        hit = memo.get(key)
        if hit is not None:
            return hit
        rel_map = dict(rel)
        if isinstance(node, Var):
            out = rel_map[node.name]
        elif isinstance(node, QUANTIFIERS):
            v = node.var
            term_vars = set()
            for t in rel_map.values():
                term_vars |= free_vars(t)
            if v in term_vars:
                avoid = all_vars(node.body) | term_vars | set(rel_map)
                new = fresh_var(avoid, v)
                body = go(node.body, {**rel_map, v: Var(new)})
                out = type(node)(new, body)
            else:
                out = type(node)(v, go(node.body, rel_map))
        elif isinstance(node, Fn):
            out = Fn(node.name, tuple(go(a, rel_map) for a in node.fargs))
        else:
            out = type(node)(*(go(a, rel_map) if isinstance(a, Node) else a for a in node.args))
        memo[key] = out
        return out

    return go(f, dict(assignment))


def instantiate(f: Node, terms) -> Node:
    """Substitute ``terms`` for the leading free variables of ``f`` (first-occurrence order)."""
    terms = tuple(terms)
    order = free_var_order(f)
    if len(terms) > len(order):
        raise ArityError(f"{len(terms)} terms for {len(order)} free variables")
    return subst_terms(f, dict(zip(order, terms)))


# -- boolean structure -------------------------------------------------------

def boolean_subformulas(f: Formula) -> list:
    """Subformula occurrences reachable from the root through connectives only.

    Returns ``(path, subformula)`` pairs in pre-order; a path lists child
    positions from the root. Quantified and atomic subformulas are leaves.
    """
    out = []
    stack = [((), f)]
    while stack:
        path, cur = stack.pop()
        out.append((path, cur))
        if isinstance(cur, Not):
            stack.append((path + (0,), cur.body))
        elif isinstance(cur, BINARY):
            stack.append((path + (1,), cur.right))
            stack.append((path + (0,), cur.left))
    return out


def bool_subst(f: Formula, target: Formula, replacement: Formula) -> Formula:
    """Replace every boolean-subformula occurrence of ``target`` by ``replacement``."""
    memo: dict = {}

    def go(node):
        if node is target:
            return replacement
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Not):
            out = Not(go(node.body))
        elif isinstance(node, BINARY):
            out = type(node)(go(node.left), go(node.right))
        else:
            out = node
        memo[node] = out
        return out

    return go(f)


def expand_connectives(f: Formula) -> Formula:
    """Rewrite ``Imp`` as ``not a or b`` and ``Iff`` as a conjunction of two such."""
    memo: dict = {}

    def go(node):
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Imp):
            out = Or(Not(go(node.left)), go(node.right))
        elif isinstance(node, Iff):
            a, b = go(node.left), go(node.right)
            out = And(Or(Not(a), b), Or(Not(b), a))
        elif isinstance(node, (Not, And, Or)):
            out = type(node)(*(go(c) for c in node.args))
        elif isinstance(node, QUANTIFIERS):
            out = type(node)(node.var, go(node.body))
        else:
            out = node
        memo[node] = out
        return out

    return go(f)


# -- predicate substitution and semirelational form --------------------------

def is_semirelational(f: Formula) -> bool:
    """True iff every predicate is applied to a bare variable."""
    return all(isinstance(n.arg, Var) for n in iter_nodes(f) if isinstance(n, Pred))


def semirelational_nf(f: Formula) -> Formula:
    """Replace each ``Q(t)`` with non-variable ``t`` by ``exists v (v = t and Q(v))``."""
    if is_semirelational(f):
        return f
    v = fresh_var(all_vars(f), "v")
    memo: dict = {}

    def go(node):
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Pred):
            if isinstance(node.arg, Var):
                out = node
            else:
                out = Exists(v, And(Eq(Var(v), node.arg), Pred(node.symbol, Var(v))))
        elif isinstance(node, (Eq, Leq)):
            out = node
        elif isinstance(node, QUANTIFIERS):
            out = type(node)(node.var, go(node.body))
        else:
            out = type(node)(*(go(c) for c in node.args))
        memo[node] = out
        return out

    return go(f)


def designated_var(phi: Formula, var: str | None = None) -> str:
    fvo = free_var_order(phi)
    if var is None:
        if len(fvo) != 1:
            raise ArityError(f"expected exactly one free variable, found {list(fvo)}")
        return fvo[0]
    if set(fvo) - {var}:
        raise ArityError(f"formula has free variables besides {var!r}: {list(fvo)}")
    return var


def pred_subst(delta: Formula, phi: Formula, var: str | None = None, symbol: str = "P") -> Formula:
    """``delta[phi]``: replace each ``P(x_i)`` in ``delta`` by ``phi(x_i)``.

    ``phi`` has one free variable ``var``; clashes between ``x_i`` and the
    bound variables of ``phi`` are resolved by renaming inside ``phi``.
    """
    for n in iter_nodes(delta):
        if isinstance(n, Pred) and n.symbol == symbol and not isinstance(n.arg, Var):
            raise NotSemirelational(f"{symbol} applied to non-variable term {n.arg!r}")
    var = designated_var(phi, var)
    instances: dict = {}
    memo: dict = {}

    def go(node):
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Pred):
            if node.symbol != symbol:
                out = node
            else:
                name = node.arg.name
                out = instances.get(name)
                if out is None:
                    out = instances[name] = subst_terms(phi, {var: node.arg})
        elif isinstance(node, (Eq, Leq)):
            out = node
        elif isinstance(node, QUANTIFIERS):
            out = type(node)(node.var, go(node.body))
        else:
            out = type(node)(*(go(c) for c in node.args))
        memo[node] = out
        return out

    return go(delta)
