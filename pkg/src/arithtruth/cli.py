"""Command-line interface.

Exit codes: 0 pass/success, 1 fail, 2 inconclusive, 64 usage error.
Formula arguments are given inline in the text grammar, or as ``@path`` to
read them from a file.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import factory
from .codec import decode, encode, recognize
from .enumeration import arity, chi, chi_index
from .errors import ArithTruthError
from .evaluator import (
    EvalBudget, evaluate, parse_bounds, truth_sweep,
)
from .primitives import eval_closed_term
from .sampling import random_formula, random_term_tuple
from .sexpr import parse, parse_corpus, parse_formula, parse_term, to_text
from .syntax import (
    Formula, Node, Num, bool_subst, free_var_order, pred_subst,
    semirelational_nf,
)
from .verifier import (
    check_disquotation, check_fragment_compositional,
    check_generalised_commutativity, check_standard_extension, check_tb_coding,
    compositional_closure, correct_atomics, fragment, rank_sweep,
)

EX_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _text(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def _formula(arg: str) -> Formula:
    return parse_formula(_text(arg))


def _delta(arg: str) -> Formula:
    if arg == "default":
        return factory.default_test_delta()
    return _formula(arg)


def ast_json(node: Node):
    """Nested-list rendering: ``[constructor, field, ...]``."""
    if isinstance(node, Num):
        return ["Num", node.value]
    out = [type(node).__name__]
    for a in node.args:
        if isinstance(a, Node):
            out.append(ast_json(a))
        elif isinstance(a, tuple):
            out.append([ast_json(x) for x in a])
        else:
            out.append(a)
    return out


class Output:
    def __init__(self, fmt: str):
        self.fmt = fmt

    def node(self, node: Node, **extra):
        if self.fmt == "json":
            self.json({"formula" if isinstance(node, Formula) else "term": to_text(node),
                       "ast": ast_json(node), **extra})
        else:
            print(to_text(node))

    def json(self, obj):
        print(json.dumps(obj, sort_keys=True, default=str))

    def value(self, key, value, **extra):
        if self.fmt == "json":
            self.json({key: value, **extra})
        else:
            print(value)


def _budget(args) -> EvalBudget:
    b = parse_bounds(args.bounds) if args.bounds else EvalBudget()
    if getattr(args, "exhaustive", False):
        from dataclasses import replace
        b = replace(b, exhaustive=True)
    return b


def _env(text: str | None) -> dict:
    env = {}
    for part in filter(None, (text or "").split(",")):
        name, _, value = part.partition("=")
        env[name.strip()] = int(value)
    return env


def _p_set(path: str | None):
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        return frozenset(int(tok) for tok in fh.read().replace(",", " ").split())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arithtruth", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bounds", help="quantifier,clterm,depth bounds, e.g. 20,131072,3")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("numeral"); s.add_argument("n", type=int)
    s = sub.add_parser("eval-term"); s.add_argument("term")
    s = sub.add_parser("encode"); s.add_argument("expr")
    s = sub.add_parser("decode"); s.add_argument("code", type=int)
    s = sub.add_parser("chi"); s.add_argument("i", type=int)
    s = sub.add_parser("chi-index"); s.add_argument("formula")

    b = sub.add_parser("build").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = b.add_parser("rho"); s.add_argument("n", type=int)
    s = b.add_parser("xi"); s.add_argument("k", type=int)
    s = b.add_parser("gamma"); s.add_argument("i", type=int); s.add_argument("--delta", default="default")
    s = b.add_parser("alpha"); s.add_argument("i", type=int); s.add_argument("j", type=int)
    s.add_argument("--delta", default="default")
    s = b.add_parser("tau"); s.add_argument("sentences", help="corpus of sentences (inline or @file)")
    b.add_parser("theta"); b.add_parser("theta-tilde"); b.add_parser("zeta")
    b.add_parser("zeta-tilde"); b.add_parser("delta-main")
    s = b.add_parser("ind-k"); s.add_argument("k", type=int); s.add_argument("phi")
    s = b.add_parser("t-double-prime"); s.add_argument("e", type=int)

    a = sub.add_parser("axiom").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = a.add_parser("tb"); s.add_argument("formula")
    s = a.add_parser("utb"); s.add_argument("formula")
    a.add_parser("ct")

    s = sub.add_parser("nf"); s.add_argument("formula")
    s = sub.add_parser("pred-subst"); s.add_argument("delta"); s.add_argument("phi")
    s.add_argument("--var")
    s = sub.add_parser("bool-subst"); s.add_argument("formula"); s.add_argument("target")
    s.add_argument("replacement")
    s = sub.add_parser("eval"); s.add_argument("formula"); s.add_argument("--p-set")
    s.add_argument("--env", help="x=3,y=4"); s.add_argument("--exhaustive", action="store_true")
    s = sub.add_parser("truth-sweep"); s.add_argument("code_bound", type=int)

    c = sub.add_parser("check").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = c.add_parser("disquotation")
    s.add_argument("--rho", type=int, help="use rho_N as the predicate")
    s.add_argument("--pred", help="predicate formula with one free variable")
    s.add_argument("--chi", type=int, required=True)
    s.add_argument("--tuples", type=int, default=25)
    s.add_argument("--max-value", type=int, default=50)
    s = c.add_parser("rank")
    s.add_argument("--delta", default="default")
    s.add_argument("--a-max", type=int, default=5)
    s.add_argument("--cap", type=int, default=8)
    s.add_argument("--tuples-per-index", type=int)
    s = c.add_parser("fragment")
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--constants", default="0,5")
    s = c.add_parser("commutativity")
    s.add_argument("--phi", help="semirelational formula; random if omitted")
    s.add_argument("--xi-rho", type=int, default=0)
    s.add_argument("--samples", type=int, default=20)
    s = c.add_parser("std-ext")
    s.add_argument("--phi", default="(= (v x) (v x))")
    s.add_argument("--gamma", default="(= (v x) (v x))")
    s.add_argument("--delta", default="(iff (P (v x)) (P (v y)))")
    s.add_argument("--samples", type=int, default=10)
    s = c.add_parser("tb-coding")
    s.add_argument("--bound", type=int, default=1 << 23)
    s.add_argument("--flip", type=int)
    return p


def _run(args, out: Output) -> int:
    cmd = args.cmd
    budget = _budget(args)
    rng = random.Random(args.seed)
    if cmd == "numeral":
        if args.n < 0:
            raise UsageError("numeral needs a natural number")
        text = "(S " * args.n + "0" + ")" * args.n
        if out.fmt == "json":
            out.json({"term": text, "value": args.n})
        else:
            print(text)
        return 0
    if cmd == "eval-term":
        out.value("value", eval_closed_term(parse_term(_text(args.term))))
        return 0
    if cmd == "encode":
        node = parse(_text(args.expr))
        code = encode(node)
        if out.fmt == "json":
            out.json({"code": str(int(code)), "kind": code.kind, "flags": sorted(recognize(code))})
        else:
            print(int(code))
        return 0
    if cmd == "decode":
        node = decode(args.code)
        out.node(node, flags=sorted(recognize(args.code)))
        return 0
    if cmd == "chi":
        out.node(chi(args.i), index=args.i, arity=arity(args.i))
        return 0
    if cmd == "chi-index":
        out.value("index", chi_index(_formula(args.formula)))
        return 0
    if cmd == "build":
        return _build(args, out)
    if cmd == "axiom":
        if args.what == "ct":
            axioms = factory.ct_axioms()
            if out.fmt == "json":
                out.json({"axioms": [to_text(a) for a in axioms]})
            else:
                for a in axioms:
                    print(to_text(a))
            return 0
        f = _formula(args.formula)
        out.node(factory.tb_axiom(f) if args.what == "tb" else factory.utb_axiom(f))
        return 0
    if cmd == "nf":
        out.node(semirelational_nf(_formula(args.formula)))
        return 0
    if cmd == "pred-subst":
        out.node(pred_subst(_formula(args.delta), _formula(args.phi), args.var))
        return 0
    if cmd == "bool-subst":
        out.node(bool_subst(_formula(args.formula), _formula(args.target), _formula(args.replacement)))
        return 0
    if cmd == "eval":
        f = _formula(args.formula)
        r = evaluate(f, _env(args.env), _p_set(args.p_set), budget)
        out.value("value", str(r), budget=budget.to_dict())
        return 0
    if cmd == "truth-sweep":
        ta = truth_sweep(args.code_bound, budget)
        if out.fmt == "json":
            out.json(ta.to_dict())
        else:
            for code in ta:
                print(code, "true" if ta.values[code] else "false")
        return 0
    if cmd == "check":
        report = _check(args, out, budget, rng)
        if out.fmt == "json":
            out.json(report.to_dict())
        else:
            print(report.verdict)
            if report.counterexample:
                print("counterexample:", json.dumps(report.counterexample, sort_keys=True))
            for k, v in sorted(report.info.items()):
                print(f"{k}: {v}")
        return report.exit_code
    raise UsageError(f"unknown command {cmd}")


def _build(args, out: Output) -> int:
    w = args.what
    if w == "rho":
        node = factory.rho(args.n)
    elif w == "xi":
        node = factory.xi(args.k)
    elif w == "gamma":
        node = factory.gamma(args.i, _delta(args.delta))
    elif w == "alpha":
        node = factory.alpha(args.i, args.j, _delta(args.delta))
    elif w == "tau":
        node = factory.tau(parse_corpus(_text(args.sentences)))
    elif w == "theta":
        node = factory.theta()
    elif w == "theta-tilde":
        node = factory.theta_tilde()
    elif w == "zeta":
        node = factory.zeta()
    elif w == "zeta-tilde":
        node = factory.zeta_tilde()
    elif w == "delta-main":
        node = factory.delta_main()
    elif w == "ind-k":
        node = factory.ind_k(args.k, _formula(args.phi))
    elif w == "t-double-prime":
        node = factory.t_double_prime(args.e)
    else:
        raise UsageError(f"unknown family {w}")
    out.node(node)
    return 0


def _check(args, out, budget, rng):
    w = args.what
    if w == "disquotation":
        if (args.rho is None) == (args.pred is None):
            raise UsageError("give exactly one of --rho and --pred")
        pred = factory.rho(args.rho) if args.rho is not None else _formula(args.pred)
        n = arity(args.chi)
        count = args.tuples if n else 1
        tuples = [random_term_tuple(rng, n, args.max_value) for _ in range(count)]
        return check_disquotation(pred, args.chi, tuples, budget)
    if w == "rank":
        from dataclasses import replace
        return rank_sweep(_delta(args.delta), args.a_max, args.cap, args.tuples_per_index,
                          replace(budget, exhaustive=True))
    if w == "fragment":
        constants = tuple(int(c) for c in args.constants.split(","))
        sentences = fragment(args.depth, constants)
        atoms = correct_atomics(sentences, budget)
        closure = compositional_closure(atoms, args.depth, budget, constants, sentences)
        return check_fragment_compositional(closure, closure.bound, budget)
    if w == "commutativity":
        xi = factory.rho(args.xi_rho)
        if args.phi:
            phi = _formula(args.phi)
        else:
            phi = random_formula(rng, 3, predicates=("P",), semirelational=True)
        order = free_var_order(phi)
        sample = [tuple(rng.randint(0, 10) for _ in order) for _ in range(args.samples)]
        report = check_generalised_commutativity(phi, xi, sample, budget=budget)
        report.info["phi"] = to_text(phi)
        return report
    if w == "std-ext":
        phi, gamma, delta = _formula(args.phi), _formula(args.gamma), _delta(args.delta)
        terms = [random_term_tuple(rng, 1, 20)[0] for _ in range(args.samples)]
        n = len(free_var_order(delta))
        tuples = [random_term_tuple(rng, n, 20) for _ in range(args.samples)]
        return check_standard_extension(phi, gamma, delta, terms, tuples, budget)
    if w == "tb-coding":
        return check_tb_coding(args.bound, budget, args.flip)
    raise UsageError(f"unknown check {w}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args, Output(args.format))
    except UsageError as exc:
        print(f"arithtruth: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (ArithTruthError, ValueError, IndexError, OSError) as exc:
        print(f"arithtruth: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
