import pytest
from hypothesis import given, settings

from arithtruth.codec import decode, encode, recognize
from arithtruth.enumeration import (
    arity, chi, chi1, chi_index, closed_terms_below, formulas_of_length, pure_sentences_below,
    semirelational_pformula,
)
from arithtruth.errors import NotArithmetical
from arithtruth.syntax import Eq, Fn, Pred, Var, free_var_order, is_closed, is_semirelational
from strategies import formulas


@pytest.fixture(scope="module")
def swept():
    """Formula codes found by an exhaustive sweep of all naturals below the code of chi(55)."""
    bound = encode(chi(55))
    return [c for c in range(bound) if "IsForm" in recognize(c)]


def test_chi_zero_is_least_formula(swept):
    assert encode(chi(0)) == swept[0]


def test_prefix_matches_sweep(swept):
    assert len(swept) == 55
    assert [encode(chi(i)) for i in range(55)] == swept


def test_inverse_laws():
    assert chi_index(chi(7)) == 7
    for i in range(300):
        assert chi_index(chi(i)) == i
    with pytest.raises(NotArithmetical):
        chi_index(Pred("P", Var("x")))
    with pytest.raises(NotArithmetical):
        chi_index(Eq(Fn("val", (Var("x"),)), Var("x")))


@settings(max_examples=60)
@given(formulas(5), formulas(5))
def test_chi_index_monotone(f, g):
    if encode(f).bit_length() > 33 or encode(g).bit_length() > 33:
        return
    assert (encode(f) < encode(g)) == (chi_index(f) < chi_index(g))


def test_arity():
    i = chi_index(Eq(Var("x"), Var("y")))
    assert arity(i) == 2
    for k in range(1000):
        assert arity(k) == len(free_var_order(chi(k)))
    sentence = next(k for k in range(100) if is_closed(chi(k)))
    assert arity(sentence) == 0


def test_chi_injective_prefix():
    seen = {chi(i) for i in range(2000)}
    assert len(seen) == 2000


def test_chi1_filter():
    for i in range(200):
        assert len(free_var_order(chi1(i))) <= 1
    chi1_codes = [encode(chi1(i)) for i in range(50)]
    assert chi1_codes == sorted(chi1_codes)


def test_levels_sorted_and_sizes():
    for length in range(15, 26):
        level = [encode(f) for f in formulas_of_length(length)]
        assert level == sorted(level)
        assert all(c.bit_length() == length + 1 for c in level)


def test_semirelational_pformulas():
    fs = [semirelational_pformula(i) for i in range(40)]
    assert all(is_semirelational(f) and free_var_order(f) for f in fs)
    assert fs[0] is Pred("P", Var("x"))


def test_pure_sentences_and_terms_below():
    bound = 1 << 18
    sents = pure_sentences_below(bound)
    assert sents == [f for f in (chi(i) for i in range(200)) if encode(f) < bound and is_closed(f)]
    ts = closed_terms_below(1 << 11)
    assert all(encode(t) < (1 << 11) and is_closed(t) for t in ts)
    assert [encode(t) for t in ts] == sorted(encode(t) for t in ts)
    assert ts == tuple(decode(c) for c in range(1 << 11) if "IsClTerm" in recognize(c))
