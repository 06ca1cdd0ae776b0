"""Finite checks of disquotation, rank, compositionality and related claims.

Every check returns a :class:`CheckReport` whose verdict is ``Pass``,
``Fail``, ``Inconclusive`` (a needed evaluation was ``UNKNOWN``) or, for the
standard-extension check, ``HypothesisFailed``. A ``Fail`` carries the first
offending instance in processing order.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .codec import encode, finite_set_code, try_decode, SetCode
from .enumeration import arity, chi, closed_terms_below
from .errors import ArityError, NotSemirelational
from .evaluator import (
    FALSE, TRUE, TRUTH, UNKNOWN, EvalBudget, Evaluator, TruthAssignment, t_and,
    t_iff, t_imp, t_not, t_or, tri, truth_sweep,
)
from .factory import gamma as gamma_formula, tb_axiom
from .primitives import eval_closed_term
from .syntax import (
    And, Eq, Exists, Forall, Formula, Iff, Imp, Leq, Not, Num, Or, Pred, Term, Var,
    designated_var, free_var_order, instantiate, is_closed, is_pure, is_semirelational,
    pred_subst, subst_terms,
)

PASS, FAIL, INCONCLUSIVE, HYPOTHESIS_FAILED = "Pass", "Fail", "Inconclusive", "HypothesisFailed"
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2, HYPOTHESIS_FAILED: 2}


@dataclass
class CheckReport:
    verdict: str
    records: list = field(default_factory=list)
    counterexample: dict | None = None
    info: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "counterexample": self.counterexample,
                "info": self.info, "records": self.records}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), default=str, **kw)


def _verdict(results, fail=None, **info) -> CheckReport:
    records = list(results)
    if fail is not None:
        return CheckReport(FAIL, records, fail, info)
    if any(r.get("status") == "unknown" for r in records):
        return CheckReport(INCONCLUSIVE, records, None, info)
    return CheckReport(PASS, records, None, info)


# -- rank values ---------------------------------------------------------------

@dataclass(frozen=True)
class RankValue:
    kind: str           # "NegInf" | "Fin" | "AtLeastCap" | "Unknown"
    n: int | None = None

    def __str__(self):
        return self.kind if self.n is None else f"{self.kind}({self.n})"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n}


def NegInf() -> RankValue:
    return RankValue("NegInf")


def Fin(n: int) -> RankValue:
    return RankValue("Fin", n)


def AtLeastCap(cap: int) -> RankValue:
    return RankValue("AtLeastCap", cap)


def UnknownRank() -> RankValue:
    return RankValue("Unknown")


# -- disquotation ----------------------------------------------------------------

def term_domain(budget: EvalBudget) -> tuple:
    """Closed terms a term quantifier ranges over under ``budget``."""
    return closed_terms_below(budget.clterm_bound)


def domain_tuples(n: int, budget: EvalBudget, limit: int | None = None) -> list:
    """First ``limit`` ``n``-tuples over the term domain in lexicographic order."""
    it = itertools.product(term_domain(budget), repeat=n)
    return list(itertools.islice(it, limit)) if limit is not None else list(it)


def _disquote_one(ev: Evaluator, pred, var, target, tup):
    code = int(encode(instantiate(target, tup)))
    lhs = ev.eval(pred, {var: code})
    values = {v: eval_closed_term(t) for v, t in zip(free_var_order(target), tup)}
    rhs = ev.eval(target, values)
    rec = {"tuple": [str(t) for t in tup], "code": str(code), "lhs": str(lhs), "rhs": str(rhs)}
    if lhs.definite and rhs.definite:
        rec["status"] = "ok" if lhs is rhs else "fail"
    else:
        rec["status"] = "unknown"
    return rec


def check_disquotation(pred: Formula, chi_index: int, tuples, budget: EvalBudget | None = None,
                       var: str | None = None, evaluator: Evaluator | None = None,
                       p_interp=None, t_interp=TRUTH) -> CheckReport:
    """``pred(code of chi_i(t)) <-> chi_i(val t)`` for each closed-term tuple ``t``."""
    budget = budget or EvalBudget()
    var = designated_var(pred, var)
    target = chi(chi_index)
    n = arity(chi_index)
    tuples = [tuple(t) for t in tuples]
    for tup in tuples:
        if len(tup) != n:
            raise ArityError(f"chi_{chi_index} takes {n} terms, got {len(tup)}")
        if not all(isinstance(t, Term) and is_closed(t) for t in tup):
            raise ArityError("tuples must consist of closed terms")
    ev = evaluator or Evaluator(p_interp, budget, t_interp)
    records, fail = [], None
    for tup in tuples:
        rec = _disquote_one(ev, pred, var, target, tup)
        records.append(rec)
        if rec["status"] == "fail" and fail is None:
            fail = rec
            break
    return _verdict(records, fail, chi_index=chi_index, formula=str(target))


def rank(gamma: Formula, delta: Formula, cap: int = 8, tuples_per_index: int | None = None,
         budget: EvalBudget | None = None, evaluator: Evaluator | None = None,
         detail: dict | None = None) -> RankValue:
    """Computable surrogate of the rank of ``gamma`` with respect to ``delta``.

    ``Fin(n)`` means the first refuted index is ``n + 1`` (so a failure at
    index 0 gives ``Fin(-1)``). Term quantifiers are read over the finite term
    domain of ``budget`` (exhaustive semantics by default).
    """
    if not is_semirelational(delta):
        raise NotSemirelational("delta must be semirelational")
    budget = budget or EvalBudget(exhaustive=True)
    var = designated_var(gamma, "x" if not free_var_order(gamma) else None)
    ev = evaluator or Evaluator(None, budget)
    holds = ev.eval(pred_subst(delta, gamma, var))
    if detail is not None:
        detail["delta"] = str(holds)
        detail["indices"] = []
    if holds is FALSE:
        return NegInf()
    if holds is UNKNOWN:
        return UnknownRank()
    for k in range(cap + 1):
        tuples = domain_tuples(arity(k), budget, tuples_per_index)
        statuses = {_disquote_one(ev, gamma, var, chi(k), t)["status"] for t in tuples}
        status = "fail" if "fail" in statuses else "unknown" if "unknown" in statuses else "ok"
        if detail is not None:
            detail["indices"].append(status)
        if status == "fail":
            return Fin(k - 1)
        if status == "unknown":
            return UnknownRank()
    return AtLeastCap(cap)


def rank_sweep(delta: Formula, a_max: int = 5, cap: int = 8, tuples_per_index: int | None = None,
               budget: EvalBudget | None = None) -> CheckReport:
    """Ranks of ``gamma_0 .. gamma_{a_max + 1}`` and the strict-increase property."""
    budget = budget or EvalBudget(exhaustive=True)
    ev = Evaluator(None, budget)
    ranks, records = [], []
    for a in range(a_max + 2):
        detail: dict = {}
        r = rank(gamma_formula(a, delta), delta, cap, tuples_per_index, budget, ev, detail)
        ranks.append(r)
        records.append({"a": a, "rank": str(r), **detail})
    fail = None
    unknown = False
    for a in range(a_max + 1):
        lo, hi = ranks[a], ranks[a + 1]
        if lo.kind == "Unknown" or hi.kind == "Unknown":
            unknown = True
        bad = ((lo.kind == hi.kind == "Fin" and hi.n <= lo.n)
               or (lo.kind == hi.kind == "NegInf"))
        if bad:
            fail = {"a": a, "rank_a": str(lo), "rank_a_plus_1": str(hi)}
            break
    if fail is not None:
        return CheckReport(FAIL, records, fail, {"ranks": [str(r) for r in ranks]})
    verdict = INCONCLUSIVE if unknown else PASS
    return CheckReport(verdict, records, None, {"ranks": [str(r) for r in ranks]})


# -- compositional fragments ---------------------------------------------------

def canonical(f: Formula) -> Formula:
    """Replace every maximal closed term by the numeral of its value."""
    memo: dict = {}

    def term(t):
        if is_closed(t):
            return Num(eval_closed_term(t))
        return type(t)(*(term(a) if isinstance(a, Term) else a for a in t.args))

    def go(node):
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, (Eq, Leq)):
            out = type(node)(term(node.left), term(node.right))
        elif isinstance(node, Pred):
            out = Pred(node.symbol, term(node.arg))
        elif isinstance(node, (Forall, Exists)):
            out = type(node)(node.var, go(node.body))
        else:
            out = type(node)(*(go(c) for c in node.args))
        memo[node] = out
        return out

    return go(f)


def _instances(f, budget):
    """Closed instances of a quantifier body over the term domain."""
    body, v = f.body, f.var
    if v not in free_var_order(body):
        return [body]
    return [subst_terms(body, {v: t}) for t in term_domain(budget)]


def _clause(f: Formula, look, budget) -> tuple:
    """Expected value of ``f`` from the values of its parts: ``(value, exact)``.

    ``look`` maps a sentence to a TriBool. For quantifiers the instance search
    is bounded, so only a counterexample (for all) or witness (for exists) is
    conclusive.
    """
    if isinstance(f, (Eq, Leq)):
        l, r = eval_closed_term(f.left), eval_closed_term(f.right)
        return tri(l == r if isinstance(f, Eq) else l <= r), True
    if isinstance(f, Not):
        return t_not(look(f.body)), True
    if isinstance(f, And):
        return t_and(look(f.left), look(f.right)), True
    if isinstance(f, Or):
        return t_or(look(f.left), look(f.right)), True
    if isinstance(f, Imp):
        return t_imp(look(f.left), look(f.right)), True
    if isinstance(f, Iff):
        return t_iff(look(f.left), look(f.right)), True
    if isinstance(f, (Forall, Exists)):
        vals = [look(s) for s in _instances(f, budget)]
        universal = isinstance(f, Forall)
        decisive = FALSE if universal else TRUE
        if decisive in vals:
            return decisive, True
        if UNKNOWN in vals:
            return UNKNOWN, False
        return t_not(decisive), False
    raise TypeError(f"not a formula: {f!r}")


def check_fragment_compositional(assignment: TruthAssignment, c: int,
                                 budget: EvalBudget | None = None) -> CheckReport:
    """Atomic, connective, quantifier and extensionality clauses for every
    sentence with code below ``c`` in the assignment's domain."""
    budget = budget or EvalBudget()
    if assignment.bound < c:
        raise ValueError("assignment bound is below the checked range")

    def look(s):
        return assignment.get(int(encode(s)))

    records, fail = [], None
    for code in assignment:
        if code >= c:
            break
        f = try_decode(code)
        if not isinstance(f, Formula) or not is_closed(f) or not is_pure(f):
            continue
        have = assignment.get(code)
        want, exact = _clause(f, look, budget)
        rec = {"code": str(code), "sentence": str(f), "value": str(have), "clause": str(want)}
        if want is UNKNOWN:
            rec["status"] = "unknown"
        elif want is have:
            rec["status"] = "ok"
        else:
            # a bounded instance search that found nothing cannot refute the value
            rec["status"] = "fail" if exact else "unknown"
        canon = canonical(f)
        if rec["status"] == "ok" and canon is not f:
            other = look(canon)
            if other.definite and other is not have:
                rec["status"] = "fail"
                rec["extensionality"] = str(canon)
        records.append(rec)
        if rec["status"] == "fail":
            fail = rec
            break
    return _verdict(records, fail, checked=len(records), bound=c)


def fragment(depth: int, constants=(0, 5), var: str = "x") -> list:
    """Closed sentences of nesting depth at most ``depth`` built from ``=`` and
    ``<=`` atoms over the given numerals and one bound variable, in code order."""
    closed_terms = [Num(k) for k in constants]
    open_terms = closed_terms + [Var(var)]
    atoms_c = [R(s, t) for R in (Eq, Leq) for s in closed_terms for t in closed_terms]
    atoms_o = [R(s, t) for R in (Eq, Leq) for s in open_terms for t in open_terms
               if Var(var) in (s, t)]
    closed_by = [atoms_c]
    open_by = [atoms_o]
    for d in range(1, depth + 1):
        cl_prev = [f for lvl in closed_by for f in lvl]
        op_prev = open_by[-1] if d == 1 else []
        new_c = [Not(f) for f in closed_by[-1]]
        new_c += [cls(a, b) for cls in (And, Or) for a in cl_prev for b in cl_prev
                  if max(_nest(a), _nest(b)) == d - 1]
        new_c += [Q(var, f) for Q in (Forall, Exists) for f in open_by[-1]]
        closed_by.append(new_c)
        if d < depth:
            new_o = [Not(f) for f in open_by[-1]]
            new_o += [cls(a, b) for cls in (And, Or) for a in op_prev for b in op_prev]
            open_by.append(new_o)
    out = {f for lvl in closed_by for f in lvl}
    return sorted(out, key=lambda f: int(encode(f)))


def _nest(f) -> int:
    if isinstance(f, (Eq, Leq, Pred)):
        return 0
    if isinstance(f, Not):
        return 1 + _nest(f.body)
    if isinstance(f, (Forall, Exists)):
        return 1 + _nest(f.body)
    return 1 + max(_nest(f.left), _nest(f.right))


def atomic_sentences(sentences, budget: EvalBudget) -> list:
    """Atomic sentences the closure of ``sentences`` looks up, including the
    quantifier instances over the term domain."""
    seen, out, stack = set(), [], list(sentences)
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        if isinstance(f, (Eq, Leq)):
            out.append(f)
        elif isinstance(f, Not):
            stack.append(f.body)
        elif isinstance(f, (And, Or, Imp, Iff)):
            stack.extend((f.left, f.right))
        elif isinstance(f, (Forall, Exists)):
            stack.extend(_instances(f, budget))
    return sorted(out, key=lambda f: int(encode(f)))


def correct_atomics(sentences, budget: EvalBudget) -> TruthAssignment:
    vals = {}
    for a in atomic_sentences(sentences, budget):
        l, r = eval_closed_term(a.left), eval_closed_term(a.right)
        vals[int(encode(a))] = (l == r) if isinstance(a, Eq) else (l <= r)
    return TruthAssignment(vals)


def compositional_closure(atomic: TruthAssignment, depth: int, budget: EvalBudget | None = None,
                          constants=(0, 5), sentences=None) -> TruthAssignment:
    """Extend an atomic assignment compositionally over the depth-bounded
    fragment; entries whose quantifier search is inconclusive are left out."""
    budget = budget or EvalBudget()
    sentences = fragment(depth, constants) if sentences is None else list(sentences)
    memo: dict = {}

    def value(f):
        hit = memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, (Eq, Leq)):
            out = atomic.get(int(encode(f)))
        else:
            out, exact = _clause(f, value, budget)
            if not exact and not budget.exhaustive:
                out = out if out is (FALSE if isinstance(f, Forall) else TRUE) else UNKNOWN
        memo[f] = out
        return out

    vals = {}
    for f in sentences:
        v = value(f)
        if v.definite:
            vals[int(encode(f))] = v is TRUE
    for f, v in memo.items():
        if v.definite and is_closed(f):
            vals.setdefault(int(encode(f)), v is TRUE)
    for code, v in atomic.values.items():
        vals.setdefault(code, v)
    return TruthAssignment(vals, max(vals, default=-1) + 1)


def sweep_sentences(sentences, budget: EvalBudget | None = None) -> TruthAssignment:
    """Definite evaluations of the given sentences (a truth sweep over a list)."""
    ev = Evaluator(None, budget)
    vals = {}
    for f in sentences:
        r = ev.eval(f)
        if r.definite:
            vals[int(encode(f))] = r is TRUE
    return TruthAssignment(vals, max(vals, default=-1) + 1)


def flip_search(sentences, atomic: TruthAssignment, budget: EvalBudget | None = None) -> list:
    """All assignments over ``sentences`` (atoms fixed by ``atomic``) that pass
    the compositional check; the sentences must be closed under the parts the
    check looks up."""
    budget = budget or EvalBudget()
    codes = [int(encode(f)) for f in sentences]
    free = [c for c, f in zip(codes, sentences) if not isinstance(f, (Eq, Leq))]
    fixed = {c: atomic.values[c] for c, f in zip(codes, sentences) if isinstance(f, (Eq, Leq))}
    bound = max(codes, default=-1) + 1
    passing = []
    for bits in itertools.product((False, True), repeat=len(free)):
        vals = dict(fixed)
        vals.update(zip(free, bits))
        a = TruthAssignment(vals, bound)
        if check_fragment_compositional(a, bound, budget).verdict == PASS:
            passing.append(a)
    return passing


def closed_subfragment(root: Formula, budget: EvalBudget) -> list:
    """``root`` together with every sentence its compositional check depends on."""
    seen, stack = set(), [root]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        if isinstance(f, Not):
            stack.append(f.body)
        elif isinstance(f, (And, Or, Imp, Iff)):
            stack.extend((f.left, f.right))
        elif isinstance(f, (Forall, Exists)):
            stack.extend(_instances(f, budget))
        canon = canonical(f)
        if canon is not f:
            stack.append(canon)
    return sorted(seen, key=lambda f: int(encode(f)))


# -- commutativity and standard extension ------------------------------------

def _numerals(values):
    return [Num(v) for v in values]


def check_generalised_commutativity(phi: Formula, xi: Formula, sample, truth_pred=TRUTH,
                                    budget: EvalBudget | None = None) -> CheckReport:
    """``T'(phi[xi](num a))`` against ``phi[xi_hat](a)`` with ``xi_hat(n) := T'(xi(num n))``."""
    if not is_semirelational(phi):
        raise NotSemirelational("phi must be semirelational")
    budget = budget or EvalBudget()
    var = designated_var(xi)
    order = free_var_order(phi)
    oracle = Evaluator(None, budget, truth_pred)
    substituted = pred_subst(phi, xi, var)

    def xi_hat(n):
        return oracle.eval(Pred("T", Num(int(encode(subst_terms(xi, {var: Num(n)}))))))

    rhs_ev = Evaluator(xi_hat, budget, truth_pred)
    records, fail = [], None
    for tup in sample:
        tup = tuple(tup)
        if len(tup) != len(order):
            raise ArityError(f"phi has {len(order)} free variables, got {len(tup)} values")
        sentence = subst_terms(substituted, dict(zip(order, _numerals(tup))))
        lhs = oracle.eval(Pred("T", Num(int(encode(sentence)))))
        rhs = rhs_ev.eval(phi, dict(zip(order, tup)))
        rec = {"tuple": list(tup), "lhs": str(lhs), "rhs": str(rhs)}
        rec["status"] = ("unknown" if not (lhs.definite and rhs.definite)
                         else "ok" if lhs is rhs else "fail")
        records.append(rec)
        if rec["status"] == "fail":
            fail = rec
            break
    report = _verdict(records, fail)
    # only definite pairs are compared; undecided pairs do not make this check inconclusive
    if report.verdict == INCONCLUSIVE:
        report.verdict = PASS
    report.info["definite"] = sum(r["status"] == "ok" for r in records)
    return report


def check_standard_extension(phi: Formula, gamma: Formula, delta: Formula, term_sample,
                             tuple_sample, budget: EvalBudget | None = None,
                             t_interp=TRUTH) -> CheckReport:
    """If ``phi(t) <-> T gamma(t)`` on ``term_sample`` then
    ``delta[phi](t) <-> T delta[gamma](t)`` on ``tuple_sample``."""
    if not is_semirelational(delta):
        raise NotSemirelational("delta must be semirelational")
    budget = budget or EvalBudget()
    ev = Evaluator(None, budget, t_interp)
    pv = designated_var(phi, "x" if not free_var_order(phi) else None)
    gv = designated_var(gamma, "x" if not free_var_order(gamma) else None)
    hyp = []
    for t in term_sample:
        lhs = ev.eval(phi, {pv: eval_closed_term(t)})
        rhs = ev.eval(Pred("T", Num(int(encode(subst_terms(gamma, {gv: t}))))))
        status = "unknown" if not (lhs.definite and rhs.definite) else "ok" if lhs is rhs else "fail"
        hyp.append({"stage": "hypothesis", "term": str(t), "lhs": str(lhs), "rhs": str(rhs),
                    "status": status})
        if status == "fail":
            return CheckReport(HYPOTHESIS_FAILED, hyp, hyp[-1])
    if any(r["status"] == "unknown" for r in hyp):
        return CheckReport(INCONCLUSIVE, hyp)
    left = pred_subst(delta, phi, pv)
    right = pred_subst(delta, gamma, gv)
    order = free_var_order(delta)
    records, fail = list(hyp), None
    for tup in tuple_sample:
        tup = tuple(tup)
        if len(tup) != len(order):
            raise ArityError(f"delta has {len(order)} free variables, got {len(tup)} terms")
        lhs = ev.eval(left, {v: eval_closed_term(t) for v, t in zip(order, tup)})
        inst = subst_terms(right, dict(zip(order, tup)))
        rhs = ev.eval(Pred("T", Num(int(encode(inst)))))
        status = "unknown" if not (lhs.definite and rhs.definite) else "ok" if lhs is rhs else "fail"
        records.append({"stage": "conclusion", "tuple": [str(t) for t in tup], "lhs": str(lhs),
                        "rhs": str(rhs), "status": status})
        if status == "fail":
            fail = records[-1]
            break
    return _verdict(records, fail)


# -- TB coding -------------------------------------------------------------------

def check_tb_coding(code_bound: int, budget: EvalBudget | None = None,
                    flip: int | None = None) -> CheckReport:
    """Code the set of true sentences below ``code_bound`` and check every
    Tarski biconditional with ``T`` read as membership in that code.

    ``flip`` toggles one bit of the code (fault injection)."""
    budget = budget or EvalBudget()
    sweep = truth_sweep(code_bound, budget)
    c = finite_set_code(sweep.true_codes())
    if flip is not None:
        c = SetCode(int(c) ^ (1 << flip))
    ev = Evaluator(None, budget, c)
    records, fail = [], None
    for code in sweep:
        f = try_decode(code)
        r = ev.eval(tb_axiom(f))
        rec = {"code": str(code), "sentence": str(f), "value": str(r),
               "status": "ok" if r is TRUE else "fail" if r is FALSE else "unknown"}
        records.append(rec)
        if rec["status"] == "fail":
            fail = rec
            break
    return _verdict(records, fail, sentences=len(sweep), set_code_bits=int(c).bit_length())
