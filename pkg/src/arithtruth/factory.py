"""Formula families and axiom instances.

Quantification over terms is rendered as quantification over numbers guarded
by ``clterm(t) = 1``; ``val``, ``sub`` and the other code functions are the
``Fn`` abbreviations interpreted in :mod:`arithtruth.primitives`.
"""
from __future__ import annotations

import threading

from .codec import encode
from .enumeration import arity, chi, semirelational_pformula
from .errors import ArityError, NotArithmetical, NotSemirelational, NotSentence
from .syntax import (
    Add, And, bool_subst, Eq, Exists, Fn, Forall, Formula, Term, Iff, Imp, Leq, Not, Num, One, Or, Pred, Succ,
    Var, conj, designated_var, disj, free_var_order, is_closed, is_pure, is_semirelational,
    pred_subst, semirelational_nf, subst_terms, var_name, ZERO,
)

X = "x"
_lock = threading.RLock()


def block_vars(n: int, avoid=(X,)) -> tuple:
    """The first ``n`` identifiers not in ``avoid``."""
    out, i = [], 0
    while len(out) < n:
        name = var_name(i)
        if name not in avoid:
            out.append(name)
        i += 1
    return tuple(out)


def clterm_guard(v: str) -> Formula:
    return Eq(Fn("clterm", (Var(v),)), One())


def _flag(fn: str, v: str) -> Formula:
    return Eq(Fn(fn, (Var(v),)), One())


def forall_terms(names, body: Formula) -> Formula:
    """``all t1 (clterm(t1)=1 -> all t2 (... -> body))``."""
    for v in reversed(names):
        body = Forall(v, Imp(clterm_guard(v), body))
    return body


def exists_terms(names, body: Formula) -> Formula:
    for v in reversed(names):
        body = Exists(v, And(clterm_guard(v), body))
    return body


def code_term(f: Formula, names) -> Term:
    """Term for the code of ``f`` with the coded terms ``names`` put in for its free variables."""
    if not names:
        return Num(int(encode(f)))
    return Fn("sub", (Num(int(encode(f))), *(Var(v) for v in names)))


def valued_instance(f: Formula, names) -> Formula:
    """``f`` with its leading free variables replaced by ``val(t_k)``."""
    order = free_var_order(f)
    return subst_terms(f, {v: Fn("val", (Var(t),)) for v, t in zip(order, names)})


# -- xi and rho ----------------------------------------------------------------

_xi_memo: dict = {}
_rho_memo: list = []


def xi(k: int) -> Formula:
    if k < 0:
        raise IndexError("index must be non-negative")
    with _lock:
        hit = _xi_memo.get(k)
        if hit is not None:
            return hit
        i = k // 2
        arities = [arity(j) for j in range(i + 1)]
        names = block_vars(max(1, *arities))
        if k % 2 == 0:
            core = conj(Imp(Eq(Var(X), code_term(chi(j), names[:n])), valued_instance(chi(j), names[:n]))
                        for j, n in enumerate(arities))
            out = forall_terms(names, core)
        else:
            core = disj(Eq(Var(X), code_term(chi(j), names[:n])) for j, n in enumerate(arities))
            out = exists_terms(names, core)
        _xi_memo[k] = out
        return out


def rho(n: int) -> Formula:
    if n < 0:
        raise IndexError("index must be non-negative")
    with _lock:
        if not _rho_memo:
            _rho_memo.append(xi(0))
        while len(_rho_memo) <= n:
            m = len(_rho_memo)
            prev = _rho_memo[-1]
            if m % 2 == 1:
                nxt = bool_subst(prev, xi(m - 1), And(xi(m - 1), xi(m)))
            else:
                nxt = bool_subst(prev, xi(m - 1), Or(xi(m - 1), xi(m)))
            _rho_memo.append(nxt)
        return _rho_memo[n]


def tau(sentences) -> Formula:
    parts = []
    for s in sentences:
        if not is_closed(s):
            raise NotSentence(f"not a sentence: {s}")
        if not is_pure(s):
            raise NotArithmetical(f"not an arithmetical sentence: {s}")
        parts.append(And(Eq(Var(X), Num(int(encode(s)))), s))
    return disj(parts)


# -- rank-lemma families -------------------------------------------------------

def disquotation_formula(pred: Formula, k: int, var: str | None = None) -> Formula:
    """``all t (pred(code of chi_k(t)) <-> chi_k(val t))``.

    ``pred`` is applied to the code through a one-point quantifier
    ``all x (x = sub(...) -> ...)`` so the node ``pred`` itself is shared
    rather than copied by substitution.
    """
    var = designated_var(pred, var)
    target = chi(k)
    n = arity(k)
    names = block_vars(n, avoid=(var,))
    body = Forall(var, Imp(Eq(Var(var), code_term(target, names)),
                           Iff(pred, valued_instance(target, names))))
    return forall_terms(names, body)


_gamma_memo: dict = {}
_alpha_memo: dict = {}


def _check_delta(delta: Formula):
    if not is_semirelational(delta):
        raise NotSemirelational("delta must be semirelational")
    if not is_closed(delta):
        raise NotSentence("delta must be a sentence")


def gamma(i: int, delta: Formula) -> Formula:
    if i < 0:
        raise IndexError("index must be non-negative")
    _check_delta(delta)
    with _lock:
        key = (delta, i)
        hit = _gamma_memo.get(key)
        if hit is not None:
            return hit
        if i == 0:
            out = Eq(Var(X), Var(X))
        else:
            out = Imp(pred_subst(delta, gamma(i - 1, delta), X), alpha(i - 1, i - 1, delta))
        _gamma_memo[key] = out
        return out


def alpha(i: int, j: int, delta: Formula) -> Formula:
    if j > i or j < 0:
        raise IndexError("alpha(i, j) needs 0 <= j <= i")
    _check_delta(delta)
    with _lock:
        key = (delta, i, j)
        hit = _alpha_memo.get(key)
        if hit is not None:
            return hit
        if j == 0:
            out = rho(2 * i)
        else:
            k = i - j
            ok = disquotation_formula(gamma(i, delta), k, X)
            out = Or(And(ok, alpha(i, j - 1, delta)), And(Not(ok), rho(2 * k)))
        _alpha_memo[key] = out
        return out


# -- induction -----------------------------------------------------------------

def ind_instance(phi: Formula, var: str | None = None) -> Formula:
    """``all v (phi(v) -> phi(Sv)) -> (phi(0) -> all v phi(v))``, with any other
    free variables closed universally when ``var`` is given."""
    fvo = free_var_order(phi)
    if var is None:
        if len(fvo) != 1:
            raise ArityError(f"expected one free variable, found {list(fvo)}")
        var = fvo[0]
    elif var not in fvo and fvo:
        raise ArityError(f"{var} is not free in the formula")
    step = Forall(var, Imp(phi, subst_terms(phi, {var: Succ(Var(var))})))
    out = Imp(step, Imp(subst_terms(phi, {var: ZERO}), Forall(var, phi)))
    for v in reversed([v for v in fvo if v != var]):
        out = Forall(v, out)
    return out


_ind_memo: list = []


def ind(j: int) -> Formula:
    """The ``j``-th semirelational induction instance over ``P``."""
    with _lock:
        while len(_ind_memo) <= j:
            psi = semirelational_pformula(len(_ind_memo))
            _ind_memo.append(semirelational_nf(ind_instance(psi, free_var_order(psi)[0])))
        return _ind_memo[j]


def ind_k(k: int, phi: Formula) -> Formula:
    """Right-grouped conjunction of ``ind(0)[phi] .. ind(k-1)[phi]``."""
    var = designated_var(phi) if free_var_order(phi) else X
    return conj(pred_subst(ind(j), phi, var) for j in range(k))


def default_test_delta() -> Formula:
    """A single induction instance over ``P``, in semirelational form."""
    return semirelational_nf(ind_instance(Pred("P", Var(X))))


# -- main-proof builders -----------------------------------------------------

def _p(term) -> Formula:
    return Pred("P", term)


def _fn(name, *args):
    return Fn(name, tuple(args))


def _below(v: str, bound: str, body: Formula) -> Formula:
    """``all v (v < bound -> body)`` written with ``S v <= bound``."""
    return Forall(v, Imp(Leq(Succ(Var(v)), Var(bound)), body))


def theta_tilde_clauses(y: str = "y") -> list:
    f, g, s, t = Var("f"), Var("g"), Var("s"), Var("t")
    neg = _below("f", y, Imp(_flag("sent", "f"),
                             Iff(_p(_fn("neg", f)), Not(_p(f)))))
    binary = []
    for fn, cls in (("conj", And), ("disj", Or)):
        binary.append(_below("f", y, _below("g", y, Imp(
            And(_flag("sent", "f"), _flag("sent", "g")),
            Iff(_p(_fn(fn, f, g)), cls(_p(f), _p(g)))))))
    quant = [
        _below("f", y, Imp(_flag("fv1", "f"), Iff(
            _p(_fn("all", f)), forall_terms(("t",), _p(_fn("sub", f, t)))))),
        _below("f", y, Imp(_flag("fv1", "f"), Iff(
            _p(_fn("ex", f)), exists_terms(("t",), _p(_fn("sub", f, t)))))),
    ]
    ext = _below("f", y, Imp(_flag("fv1", "f"), forall_terms(("s", "t"), Imp(
        Eq(_fn("val", s), _fn("val", t)),
        Iff(_p(_fn("sub", f, s)), _p(_fn("sub", f, t)))))))
    return [neg, *binary, *quant, ext]


def theta_tilde() -> Formula:
    """``P`` is a compositional extensional truth predicate for codes below ``y``."""
    return conj(theta_tilde_clauses("y"))


def _inductive(body: Formula, var: str) -> Formula:
    """``all v (B(v) -> B(v+1)) -> (B(0) -> all v B(v))``."""
    at = lambda t: subst_terms(body, {var: t})
    return Imp(Forall(var, Imp(body, at(Add(Var(var), One())))),
               Imp(at(ZERO), Forall(var, body)))


def theta() -> Formula:
    return _inductive(subst_terms(theta_tilde(), {"y": Var("x")}), "x")


def zeta_tilde() -> Formula:
    """``all y < x P(code of Ind_y(rho_y))``."""
    return _below("y", X, _p(_fn("indrho", Var("y"))))


def zeta() -> Formula:
    return _inductive(subst_terms(zeta_tilde(), {X: Var("y")}), "y")


def delta_main() -> Formula:
    return And(zeta(), theta())


# -- truth axioms --------------------------------------------------------------

def _t(term) -> Formula:
    return Pred("T", term)


def tb_axiom(phi: Formula) -> Formula:
    if not is_pure(phi):
        raise NotArithmetical("TB instances are for arithmetical sentences")
    if not is_closed(phi):
        raise NotSentence(f"not a sentence: {phi}")
    return Iff(_t(Num(int(encode(phi)))), phi)


def utb_axiom(phi: Formula) -> Formula:
    if not is_pure(phi):
        raise NotArithmetical("UTB instances are for arithmetical formulas")
    n = len(free_var_order(phi))
    names = block_vars(n, avoid=())
    return forall_terms(names, Iff(_t(code_term(phi, names)), valued_instance(phi, names)))


def ct_axioms() -> list:
    """Compositional clauses for T: atoms (= and <=), and/or, not, all/ex."""
    s, t, f, g = Var("s"), Var("t"), Var("f"), Var("g")
    out = []
    for fn, cls in (("eq", Eq), ("leq", Leq)):
        out.append(forall_terms(("s", "t"), Iff(_t(_fn(fn, s, t)),
                                                cls(_fn("val", s), _fn("val", t)))))
    for fn, cls in (("conj", And), ("disj", Or)):
        out.append(Forall("f", Imp(_flag("sent", "f"), Forall("g", Imp(
            _flag("sent", "g"), Iff(_t(_fn(fn, f, g)), cls(_t(f), _t(g))))))))
    out.append(Forall("f", Imp(_flag("sent", "f"), Iff(_t(_fn("neg", f)), Not(_t(f))))))
    out.append(Forall("f", Imp(_flag("fv1", "f"), Iff(
        _t(_fn("all", f)), forall_terms(("t",), _t(_fn("sub", f, t)))))))
    out.append(Forall("f", Imp(_flag("fv1", "f"), Iff(
        _t(_fn("ex", f)), exists_terms(("t",), _t(_fn("sub", f, t)))))))
    return out


def t_double_prime(e: int) -> Formula:
    """``T(code of rho_e(num x))``."""
    return _t(_fn("sub", Num(int(encode(rho(e)))), _fn("num", Var(X))))
