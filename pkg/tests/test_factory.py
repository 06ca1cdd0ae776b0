import random

import pytest

from arithtruth.codec import decode, encode
from arithtruth.enumeration import arity, chi, closed_terms_below
from arithtruth.errors import ArityError, NotArithmetical, NotSemirelational, NotSentence
from arithtruth.evaluator import TRUE, TRUTH, EvalBudget, Evaluator, evaluate
from arithtruth.factory import (
    alpha, block_vars, ct_axioms, default_test_delta, delta_main, disquotation_formula, gamma,
    ind, ind_instance, ind_k, rho, t_double_prime, tau, tb_axiom, theta, theta_tilde,
    theta_tilde_clauses, utb_axiom, xi, zeta, zeta_tilde,
)
from arithtruth.syntax import (
    And, Eq, Exists, Fn, Forall, Iff, Imp, Leq, Not, Num, One, Or, Pred, Succ, Var, ZERO,
    boolean_subformulas, bool_subst, free_vars, instantiate, is_semirelational, iter_nodes,
    pred_subst, semirelational_nf, size,
)

x = Var("x")
DELTA = default_test_delta()


def xi_leaves(f):
    """Boolean leaves of a rho formula, in left-to-right order."""
    return [g for path, g in boolean_subformulas(f) if not isinstance(g, (And, Or, Not, Imp, Iff))]


def test_xi_shapes():
    assert isinstance(xi(0), Forall) and isinstance(xi(1), Exists)
    for k in range(11):
        assert free_vars(xi(k)) == {"x"}
    # xi_1 is a single existential block over a code equation for chi_0
    f = xi(1)
    assert f.body.right == Eq(x, Num(int(encode(chi(0)))))


def test_rho_recursion_and_growth():
    assert rho(0) is xi(0)
    assert rho(1) is bool_subst(rho(0), xi(0), And(xi(0), xi(1)))
    assert rho(2) is bool_subst(rho(1), xi(1), Or(xi(1), xi(2)))
    sizes = [size(rho(n)) for n in range(13)]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    for n in range(13):
        assert free_vars(rho(n)) == {"x"}
        leaves = xi_leaves(rho(n))
        assert all(any(g is xi(k) for k in range(n + 1)) for g in leaves)
        assert [g for g in leaves if g is xi(n)] == [leaves[-1]]
        assert not any(isinstance(g, Not) for _, g in boolean_subformulas(rho(n)))


def test_rho_codes():
    assert encode(xi(0)) < encode(rho(1))
    assert decode(encode(rho(3))) is rho(3)


def test_rho_monotonicity_and_disquotation():
    rng = random.Random(2)
    domain = closed_terms_below(1 << 12)
    ev = Evaluator()
    values = []
    for _ in range(40):
        j = rng.randint(0, 5)
        ts = [rng.choice(domain) for _ in range(arity(j))]
        values.append((j, instantiate(chi(j), ts)))
    for n in range(6):
        for j, inst in values:
            if j > n:
                continue
            code = int(encode(inst))
            got = ev.eval(rho(2 * n), {"x": code})
            assert got is evaluate(inst)
    for _, inst in values:
        code = int(encode(inst))
        for i in range(4):
            for m in range(2 * i, 9):
                if ev.eval(rho(m), {"x": code}) is TRUE:
                    assert ev.eval(rho(2 * i), {"x": code}) is TRUE
            for m in range(2 * i + 1, 9):
                if ev.eval(rho(2 * i + 1), {"x": code}) is TRUE:
                    assert ev.eval(rho(m), {"x": code}) is TRUE


def test_tau():
    phi = Eq(ZERO, ZERO)
    assert tau([phi]) is And(Eq(x, Num(int(encode(phi)))), phi)
    assert tau([]) is Not(Eq(ZERO, ZERO))
    sents = [Eq(ZERO, One()), Leq(ZERO, One()), Forall("y", Leq(ZERO, Var("y")))]
    f = tau(sents)
    for s in sents:
        got = evaluate(f, {"x": int(encode(s))}, budget=EvalBudget(exhaustive=True))
        assert got is evaluate(s, budget=EvalBudget(exhaustive=True))
    with pytest.raises(NotSentence):
        tau([Eq(x, ZERO)])
    with pytest.raises(NotArithmetical):
        tau([Pred("P", ZERO)])


def test_gamma_alpha_recursion():
    assert gamma(0, DELTA) is Eq(x, x)
    for i in range(4):
        assert alpha(i, 0, DELTA) is rho(2 * i)
        assert gamma(i + 1, DELTA) is Imp(pred_subst(DELTA, gamma(i, DELTA), "x"), alpha(i, i, DELTA))
        for j in range(i):
            ok = disquotation_formula(gamma(i, DELTA), i - j - 1, "x")
            assert alpha(i, j + 1, DELTA) is Or(And(ok, alpha(i, j, DELTA)),
                                                 And(Not(ok), rho(2 * (i - j - 1))))
        assert free_vars(gamma(i, DELTA)) == {"x"}
    with pytest.raises(IndexError):
        alpha(1, 2, DELTA)
    with pytest.raises(NotSemirelational):
        gamma(1, Pred("P", ZERO))
    with pytest.raises(NotSentence):
        gamma(1, Pred("P", x))


def test_disquotation_formula_shape():
    f = disquotation_formula(Eq(x, x), 4)
    assert arity(4) == 1
    assert f.var == block_vars(1, avoid=("x",))[0]
    assert f.body.left == Eq(Fn("clterm", (Var(f.var),)), One())
    assert disquotation_formula(Eq(x, x), 0).var == "x"


def test_ind_instance():
    f = ind_instance(Eq(x, x))
    assert f is Imp(Forall("x", Imp(Eq(x, x), Eq(Succ(x), Succ(x)))),
                    Imp(Eq(ZERO, ZERO), Forall("x", Eq(x, x))))
    assert evaluate(f, budget=EvalBudget(exhaustive=True)) is TRUE
    with pytest.raises(ArityError):
        ind_instance(Eq(ZERO, ZERO))
    with pytest.raises(ArityError):
        ind_instance(Eq(x, Var("y")))


def test_ind_k_grouping():
    phi = Eq(x, x)
    parts = [pred_subst(ind(j), phi, "x") for j in range(3)]
    assert ind_k(1, phi) is parts[0]
    assert ind_k(3, phi) is And(parts[0], And(parts[1], parts[2]))
    assert all(is_semirelational(ind(j)) and not free_vars(ind(j)) for j in range(5))
    assert ind(0) is DELTA


def test_main_builders():
    clauses = theta_tilde_clauses()
    assert len(clauses) == 6
    assert theta_tilde() is And(clauses[0], And(clauses[1], And(clauses[2], And(clauses[3], And(clauses[4], clauses[5])))))
    assert free_vars(theta_tilde()) == {"y"}
    t = theta()
    assert isinstance(t, Imp) and isinstance(t.left, Forall) and isinstance(t.right, Imp)
    assert isinstance(t.right.right, Forall) and not free_vars(t)
    assert free_vars(zeta_tilde()) == {"x"}
    assert not free_vars(zeta())
    assert delta_main() is And(zeta(), theta())
    nf = semirelational_nf(delta_main())
    assert is_semirelational(nf)


def test_theta_tilde_under_rho_is_definite_on_small_bounds():
    f = pred_subst(semirelational_nf(theta_tilde()), rho(2), "x")
    for y in range(3):
        assert evaluate(f, {"y": y}).definite


def test_truth_axioms():
    phi = Eq(ZERO, ZERO)
    assert tb_axiom(phi) is Iff(Pred("T", Num(int(encode(phi)))), phi)
    assert utb_axiom(phi) is tb_axiom(phi)
    with pytest.raises(NotSentence):
        tb_axiom(Eq(x, ZERO))
    with pytest.raises(NotArithmetical):
        tb_axiom(Pred("P", ZERO))
    u = utb_axiom(Eq(x, Var("y")))
    assert isinstance(u, Forall) and not free_vars(u)
    cts = ct_axioms()
    assert len(cts) == 7
    assert any(isinstance(c.body.right, Iff) and c.body.right.right == Not(Pred("T", Var("f")))
               for c in cts if isinstance(c, Forall) and isinstance(c.body, Imp))
    assert all(not free_vars(c) for c in cts)


def test_t_double_prime():
    f = t_double_prime(6)
    preds = [n for n in iter_nodes(f) if isinstance(n, Pred)]
    assert len(preds) == 1 and preds[0].symbol == "T"
    assert any(isinstance(n, Num) and n.value == int(encode(rho(6))) for n in iter_nodes(f))
    g = t_double_prime(0)
    ev = Evaluator(t_interp=TRUTH)
    for v in [0, 3, int(encode(chi(0))), int(encode(chi(2)))]:
        assert ev.eval(g, {"x": v}) is Evaluator().eval(rho(0), {"x": v})
