import pytest
from hypothesis import given

from arithtruth.errors import ParseError
from arithtruth.sexpr import parse, parse_corpus, parse_formula, parse_term, to_text
from arithtruth.syntax import Eq, Fn, Forall, Iff, Num, One, Pred, Var, ZERO
from strategies import any_node, formulas


def test_examples():
    assert to_text(Num(3)) == "(S (S (S 0)))"
    assert parse_term("(S (S 0))") is Num(2)
    assert parse_formula("(all x (= (v x) 0))") is Forall("x", Eq(Var("x"), ZERO))
    assert parse_formula("(iff (P (v x)) (P (v y)))") is Iff(Pred("P", Var("x")), Pred("P", Var("y")))
    assert to_text(Num(100)) == "(num 100)"
    assert parse_term("(fn sub (num 7) (v y))") is Fn("sub", (Num(7), Var("y")))
    assert parse("1") is One()


@given(any_node(12))
def test_roundtrip(node):
    assert parse(to_text(node)) is node


@pytest.mark.parametrize("bad", ["(= 0)", "(and (= 0 0))", "(v X)", "(= 0 0", "(= 0 0))", "", "(foo 1)", "2"])
def test_malformed(bad):
    with pytest.raises(ParseError):
        parse(bad)


@given(formulas(6))
def test_corpus(f):
    text = "\n".join([to_text(f), to_text(Eq(ZERO, ZERO))])
    assert parse_corpus(text) == [f, Eq(ZERO, ZERO)]
