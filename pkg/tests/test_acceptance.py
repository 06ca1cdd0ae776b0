"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are written to the
terminal even when output capture is on.
"""
import random
import time

import pytest

from arithtruth.codec import decode, encode
from arithtruth.enumeration import arity, chi
from arithtruth.evaluator import TRUE, EvalBudget, Evaluator, evaluate
from arithtruth.factory import default_test_delta, rho
from arithtruth.sampling import random_closed_term, random_formula, random_term_tuple
from arithtruth.syntax import (
    Eq, Exists, Forall, Iff, One, Pred, Var, free_var_order, instantiate, iter_nodes,
    pred_subst, semirelational_nf,
)
from arithtruth.verifier import (
    PASS, check_disquotation, check_fragment_compositional, check_generalised_commutativity,
    check_tb_coding, closed_subfragment, compositional_closure, correct_atomics, flip_search,
    fragment, rank_sweep, sweep_sentences,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, elapsed, limit, detail=""):
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        timing = f"{elapsed:.1f}s" + (f" (limit {limit}s)" if limit else "")
        with capsys.disabled():
            print(f"\n[criterion {number}] {status}: {title} in {timing}"
                  + (f" - {detail}" if detail else ""))
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {limit}s"
    return emit


def proper_parts(node):
    return [n for n in iter_nodes(node) if n is not node]


def test_criterion_1_codec_laws(report):
    start = time.perf_counter()
    rng = random.Random(1)
    corpus = set()
    while len(corpus) < 10_000:
        corpus.add(random_formula(rng, 6, predicates=("P", "T")))
    codes = {}
    bad = []
    for f in corpus:
        c = encode(f)
        if decode(c) is not f:
            bad.append(("roundtrip", str(f)))
        codes.setdefault(int(c), []).append(f)
        for part in set(proper_parts(f)):
            if not encode(part) < c:
                bad.append(("monotone", str(f), str(part)))
    bad += [("collision", k) for k, v in codes.items() if len(v) > 1]
    report(1, f"codec laws on {len(corpus)} formulas", not bad, time.perf_counter() - start, 30,
           f"{len(bad)} violations" + (f", first {bad[0]}" if bad else ""))


def test_criterion_2_rho_disquotation(report):
    start = time.perf_counter()
    rng = random.Random(2)
    problems = []
    for n in range(7):
        for i in range(n + 1):
            assert not any(isinstance(g, (Forall, Exists)) for g in iter_nodes(chi(i)))
            tuples = [random_term_tuple(rng, arity(i), 50) for _ in range(25)]
            r = check_disquotation(rho(2 * n), i, tuples)
            if r.verdict != PASS:
                problems.append((n, i, r.verdict, r.counterexample))
    report(2, "rho_2n disquotes chi_0..chi_n for n <= 6", not problems,
           time.perf_counter() - start, 120, f"{len(problems)} non-passing cells"
           + (f", first {problems[0]}" if problems else ""))


def test_criterion_3_rho_monotonicity(report):
    start = time.perf_counter()
    rng = random.Random(3)
    ev = Evaluator()
    violations, definite = [], 0
    for _ in range(500):
        m = rng.randint(0, 14)
        i = rng.randint(0, m // 2)
        if rng.random() < 0.8:
            j = rng.randint(0, 8)
            x = int(encode(instantiate(chi(j), [random_closed_term(rng, 50) for _ in range(arity(j))])))
        else:
            x = rng.randint(0, 1 << 24)
        at = lambda k: ev.eval(rho(k), {"x": x})
        if at(m).definite and at(2 * i).definite:
            definite += 1
            if at(m) is TRUE and at(2 * i) is not TRUE:
                violations.append(("down", m, 2 * i, x))
        if 2 * i + 1 <= m and at(2 * i + 1).definite and at(m).definite:
            if at(2 * i + 1) is TRUE and at(m) is not TRUE:
                violations.append(("up", 2 * i + 1, m, x))
    report(3, f"rho monotonicity on 500 samples ({definite} definite)", not violations,
           time.perf_counter() - start, 60, f"{len(violations)} violations")


def test_criterion_4_rank_lemma(report):
    start = time.perf_counter()
    r = rank_sweep(default_test_delta(), a_max=5, cap=8)
    ok = r.verdict == PASS
    detail = f"ranks {r.info['ranks']}"
    if r.counterexample:
        detail += f", violation {r.counterexample}"
    report(4, "rank strictly increases along gamma_0..gamma_6", ok, time.perf_counter() - start,
           300, detail)


def test_criterion_5_compositional_closure(report):
    start = time.perf_counter()
    budget = EvalBudget(clterm_bound=1 << 11)
    sentences = fragment(2, (0, 5))
    atoms = correct_atomics(sentences, budget)
    closure = compositional_closure(atoms, 2, budget, (0, 5), sentences)
    sweep = sweep_sentences(sentences, budget)
    shared = [c for c in sweep if c in closure]
    disagreements = [c for c in shared if closure.get(c) is not sweep.get(c)]
    check = check_fragment_compositional(closure, closure.bound, budget)
    rng = random.Random(5)
    quantified, other = [], []
    for f in sentences:
        sub = closed_subfragment(f, budget)
        if len(sub) <= 20:
            (quantified if isinstance(f, (Forall, Exists)) else other).append(sub)
    samples = rng.sample(quantified, min(20, len(quantified))) + rng.sample(other, 20)
    extra = 0
    for sub in samples:
        passing = flip_search(sub, correct_atomics(sub, budget), budget)
        want = sweep_sentences(sub, budget)
        if len(passing) != 1 or any(passing[0].get(c) is not want.get(c) for c in want):
            extra += 1
    ok = not disagreements and check.verdict != "Fail" and extra == 0 and len(shared) > 0
    report(5, f"closure vs truth on {len(sentences)} sentences, flip search on {len(samples)} subfragments",
           ok, time.perf_counter() - start, 120,
           f"{len(shared)} definite shared, {len(disagreements)} disagreements, "
           f"check {check.verdict}, {extra} non-unique subfragments")


def test_criterion_6_commutativity(report):
    start = time.perf_counter()
    rng = random.Random(6)
    fails, definite = [], 0
    for _ in range(200):
        phi = random_formula(rng, 3, predicates=("P",), semirelational=True)
        xi = rho(rng.randint(0, 4))
        tup = tuple(rng.randint(0, 10) for _ in free_var_order(phi))
        r = check_generalised_commutativity(phi, xi, [tup])
        definite += r.info["definite"]
        if r.verdict != PASS:
            fails.append((str(phi), tup, r.counterexample))
    report(6, f"generalised commutativity on 200 triples ({definite} definite)", not fails,
           time.perf_counter() - start, 60, f"{len(fails)} violations")


def test_criterion_7_semirelational_nf(report):
    start = time.perf_counter()
    rng = random.Random(7)
    bad, definite = [], 0
    budget = EvalBudget(quantifier_bound=8)
    for _ in range(200):
        f = random_formula(rng, 3, predicates=("P",))
        nf = semirelational_nf(f)
        pset = frozenset(rng.sample(range(30), rng.randint(0, 10)))
        env = {v: rng.randint(0, 10) for v in free_var_order(f)}
        a, b = evaluate(f, env, pset, budget), evaluate(nf, env, pset, budget)
        if a.definite and b.definite:
            definite += 1
            if a is not b:
                bad.append(("disagree", str(f)))
        if semirelational_nf(nf) is not nf:
            bad.append(("idempotence", str(f)))
    report(7, f"semirelational normal form on 200 triples ({definite} definite)", not bad,
           time.perf_counter() - start, 30, f"{len(bad)} violations")


def test_criterion_8_tb_coding(report):
    start = time.perf_counter()
    r = check_tb_coding(1 << 23)
    count = r.info["sentences"]
    true_code = int(encode(Eq(One(), One())))
    flipped = check_tb_coding(1 << 23, flip=true_code)
    ok = (r.verdict == PASS and count >= 100 and flipped.verdict == "Fail"
          and flipped.counterexample["code"] == str(true_code))
    report(8, f"TB instances over a coded set of {count} sentences", ok,
           time.perf_counter() - start, 60, f"verdict {r.verdict}, flipped {flipped.verdict}")


def test_criterion_9_worked_example(report):
    start = time.perf_counter()
    x, y, z = Var("x"), Var("y"), Var("z")
    got = pred_subst(Iff(Pred("P", x), Pred("P", y)), Eq(z, z))
    want = Iff(Eq(x, x), Eq(y, y))
    report(9, "worked predicate-substitution example", got is want,
           time.perf_counter() - start, None, f"got {got}")
