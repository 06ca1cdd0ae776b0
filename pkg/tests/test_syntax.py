import pickle

import pytest
from hypothesis import given, settings, strategies as st

from arithtruth.errors import ArityError, NotSemirelational
from arithtruth.primitives import eval_closed_term
from arithtruth.errors import OpenTerm
from arithtruth.syntax import (
    Add, And, Eq, Exists, Forall, Iff, Imp, Leq, Mul, Not, Num, One, Or, Pred, Succ, Var,
    ZERO, TRUE, FALSE, boolean_subformulas, bool_subst, conj, disj, expand_connectives,
    fresh_var, free_var_order, free_vars, in_language, instantiate, is_semirelational,
    mk_numeral, pred_subst, semirelational_nf, size, subst_terms, unfold_numeral, var_index,
    var_name,
)
from strategies import formulas, terms

x, y, z = Var("x"), Var("y"), Var("z")


def test_numerals():
    assert mk_numeral(0) is ZERO
    assert mk_numeral(1) is Succ(ZERO)
    assert mk_numeral(3) is Succ(Succ(Succ(ZERO)))
    assert unfold_numeral(mk_numeral(2)) == ("S", ("S", ("0",)))


def test_hash_consing_and_immutability():
    assert Add(One(), x) is Add(One(), x)
    assert Eq(x, y) == Eq(x, y) and Eq(x, y) != Eq(y, x)
    with pytest.raises(AttributeError):
        Eq(x, y).left = z
    f = Forall("x", Imp(Leq(x, Num(3)), Pred("P", x)))
    assert pickle.loads(pickle.dumps(f)) is f


def test_invalid_nodes():
    with pytest.raises(ValueError):
        Var("X1")
    with pytest.raises(ValueError):
        Num(-1)
    with pytest.raises(ValueError):
        Pred("Q", x)


def test_eval_closed_term():
    assert eval_closed_term(Add(Succ(ZERO), Succ(Succ(ZERO)))) == 3
    assert eval_closed_term(mk_numeral(7)) == 7
    assert eval_closed_term(Mul(Succ(Succ(ZERO)), Add(One(), One()))) == 4
    with pytest.raises(OpenTerm):
        eval_closed_term(Add(x, One()))


def test_free_vars():
    assert free_vars(Eq(x, x)) == {"x"}
    assert free_vars(Forall("x", Eq(x, ZERO))) == frozenset()
    assert free_vars(Iff(Pred("P", x), Pred("P", y))) == {"x", "y"}
    assert free_var_order(And(Eq(y, x), Eq(z, y))) == ("y", "x", "z")


def test_identifier_order_roundtrip():
    for i in range(2000):
        assert var_index(var_name(i)) == i
    assert var_name(0) == "x" and var_name(1) == "y"
    assert fresh_var({"x", "y"}) == "z"
    assert fresh_var({"v"}, "v") == "w"


def test_subst_examples():
    assert subst_terms(Eq(x, ZERO), {"x": mk_numeral(2)}) is Eq(Num(2), ZERO)
    f = Forall("x", Eq(x, y))
    assert subst_terms(f, {"y": Succ(ZERO)}) is Forall("x", Eq(x, Num(1)))
    # capture is avoided by renaming the binder
    g = subst_terms(Forall("y", Eq(x, y)), {"x": y})
    assert isinstance(g, Forall) and g.var != "y" and free_vars(g) == {"y"}


def naive_subst(f, mapping):
    """Independent substituter for closed terms: plain recursion, no memo, no renaming."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, (Num, One)):
        return f
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, naive_subst(f.body, inner))
    if isinstance(f, Pred):
        return Pred(f.symbol, naive_subst(f.arg, mapping))
    return type(f)(*(naive_subst(a, mapping) for a in f.args))


@settings(max_examples=100)
@given(formulas(12), st.dictionaries(st.sampled_from(["x", "y", "z", "u"]), terms(4, closed=True)))
def test_subst_matches_naive_oracle(f, mapping):
    out = subst_terms(f, mapping)
    assert out is naive_subst(f, mapping)
    assert free_vars(out) == free_vars(f) - set(mapping)


@given(formulas(10), st.lists(terms(3, closed=True), max_size=3))
def test_instantiate(f, ts):
    order = free_var_order(f)
    if len(ts) > len(order):
        with pytest.raises(ArityError):
            instantiate(f, ts)
    else:
        assert instantiate(f, ts) is naive_subst(f, dict(zip(order, ts)))


def test_boolean_subformulas():
    a, b = Eq(x, ZERO), Leq(y, ZERO)
    f = And(a, Forall("x", b))
    assert [s for _, s in boolean_subformulas(f)] == [f, a, Forall("x", b)]
    assert [s for _, s in boolean_subformulas(TRUE)] == [TRUE]
    assert [p for p, _ in boolean_subformulas(f)] == [(), (0,), (1,)]


def test_bool_subst_examples():
    a, b, c = Eq(x, ZERO), Eq(y, ZERO), Eq(z, ZERO)
    assert bool_subst(And(a, b), a, c) is And(c, b)
    assert bool_subst(Forall("x", a), a, c) is Forall("x", a)
    assert bool_subst(Not(Or(a, a)), a, c) is Not(Or(c, c))


@given(formulas(10), formulas(3))
def test_bool_subst_identity(f, target):
    assert bool_subst(f, target, target) is f


def test_conj_disj_grouping():
    a, b, c = Eq(x, x), Eq(y, y), Eq(z, z)
    assert conj([a, b, c]) is And(a, And(b, c))
    assert disj([a, b]) is Or(a, b)
    assert conj([]) is TRUE and disj([]) is FALSE


def test_expand_connectives():
    a, b = Eq(x, x), Eq(y, y)
    assert expand_connectives(Imp(a, b)) is Or(Not(a), b)
    assert expand_connectives(Iff(a, b)) is And(Or(Not(a), b), Or(Not(b), a))


def test_semirelational():
    assert is_semirelational(Pred("P", x))
    assert not is_semirelational(Pred("P", Succ(x)))
    assert is_semirelational(Eq(ZERO, ZERO))


def test_semirelational_nf_examples():
    nf = semirelational_nf(Pred("P", Succ(x)))
    assert nf is Exists("v", And(Eq(Var("v"), Succ(x)), Pred("P", Var("v"))))
    assert semirelational_nf(Pred("P", x)) is Pred("P", x)


@given(formulas(10, predicates=("P",)))
def test_nf_properties(f):
    g = semirelational_nf(f)
    assert is_semirelational(g)
    assert free_vars(g) == free_vars(f)
    assert semirelational_nf(g) is g


def test_pred_subst_worked_example():
    delta = Iff(Pred("P", x), Pred("P", y))
    assert pred_subst(delta, Eq(z, z)) is Iff(Eq(x, x), Eq(y, y))


def test_pred_subst_basics():
    phi = Exists("y", Eq(Var("v"), Add(y, y)))
    assert pred_subst(Pred("P", x), phi) is subst_terms(phi, {"v": x})
    # the bound y of phi is renamed when substituting y for its variable
    out = pred_subst(Pred("P", y), phi)
    assert free_vars(out) == {"y"} and isinstance(out, Exists) and out.var != "y"
    with pytest.raises(NotSemirelational):
        pred_subst(Pred("P", Succ(x)), phi)
    with pytest.raises(ArityError):
        pred_subst(Pred("P", x), Eq(x, y))


@given(formulas(8, predicates=("P",), semirelational=True))
def test_pred_subst_removes_predicates(delta):
    out = pred_subst(delta, Leq(Var("v"), Num(3)))
    assert in_language(out, "PA")


def test_size_of_shared_dag():
    f = Eq(x, x)
    for _ in range(40):
        f = And(f, f)
    assert size(f) == 2 ** 41 - 1 + 2 * (2 ** 40)  # tree size, computed without expansion
