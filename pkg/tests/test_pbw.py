import itertools
from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from oracles import naive_normal_form
from hvkernel.algebra import AlgebraKind, C1, C2, generators_up_to, d, h
from hvkernel.errors import BoundExceeded, InvalidGenerator
from hvkernel.pbw import (EnvElement, ExpVec, FORMULAS, cmp_pair, cmp_pair_prime, cmp_revlex,
                          env_mul, expand, formula_suite, monomial_degree, normal_form,
                          pair_key, verify_formula)

MIRROR, TWISTED = AlgebraKind.MIRROR, AlgebraKind.TWISTED


def as_dict(elem):
    """EnvElement -> {tuple of (tag, index): Fraction} keyed like the oracle."""
    out = {}
    for mono, c in elem.items():
        key = tuple((g.tag, sp.Rational(g.index, 2) if g.tag in "dh" else 0) for g in expand(mono))
        out[key] = c
    return out


def oracle(kind, word):
    w = [(g.tag, sp.Rational(g.index, 2) if g.tag in "dh" else 0) for g in word]
    return {k: F(str(c)) for k, c in naive_normal_form(kind.value, w).items()}


def words(kind, max_len=4, bound=3):
    return st.lists(st.sampled_from(generators_up_to(kind, bound)), max_size=max_len)


def test_normal_form_examples():
    # h_{1/2} h_{-1/2} = h_{-1/2} h_{1/2} + (1/2) c2
    assert as_dict(normal_form(MIRROR, [h(F(1, 2)), h(F(-1, 2))])) == {
        (("h", sp.Rational(-1, 2)), ("h", sp.Rational(1, 2))): 1,
        (("c2", 0),): F(1, 2)}
    # d_{-1} d_{-2} = d_{-2} d_{-1} + d_{-3}
    assert as_dict(normal_form(MIRROR, [d(-1), d(-2)])) == {
        (("d", -2), ("d", -1)): 1, (("d", -3),): 1}
    assert normal_form(MIRROR, []) == EnvElement.unit(MIRROR)


def test_normal_form_already_ordered_is_identity():
    word = [C1, h(F(-3, 2)), h(F(-3, 2)), d(-2), d(1)]
    nf = normal_form(MIRROR, word)
    assert len(nf.items()) == 1
    mono, c = nf.items()[0]
    assert c == 1 and expand(mono) == word


@given(st.sampled_from([MIRROR, TWISTED]).flatmap(lambda k: st.tuples(st.just(k), words(k))))
def test_normal_form_matches_naive_rewriting(args):
    kind, word = args
    assert as_dict(normal_form(kind, word)) == oracle(kind, word)


@given(st.sampled_from([MIRROR, TWISTED]).flatmap(
    lambda k: st.tuples(st.just(k), words(k, 3), words(k, 3), words(k, 2))))
def test_associativity(args):
    kind, a, b, c = args
    A, B, C = (normal_form(kind, w) for w in (a, b, c))
    assert env_mul(kind, env_mul(kind, A, B), C) == env_mul(kind, A, env_mul(kind, B, C))


@given(st.sampled_from([MIRROR, TWISTED]).flatmap(
    lambda k: st.tuples(st.just(k), words(k, 3), words(k, 3))))
def test_multiplication_respects_concatenation(args):
    kind, a, b = args
    assert env_mul(kind, normal_form(kind, a), normal_form(kind, b)) == normal_form(kind, a + b)


@given(st.sampled_from([MIRROR, TWISTED]).flatmap(
    lambda k: st.tuples(st.just(k), st.sampled_from(generators_up_to(k, 3)),
                        st.sampled_from(generators_up_to(k, 3)))))
def test_commutator_in_envelope_is_lie_bracket(args):
    # the embedding of the Lie algebra is a Lie homomorphism
    from hvkernel.algebra import bracket
    kind, x, y = args
    comm = normal_form(kind, [x, y]) - normal_form(kind, [y, x])
    assert comm == EnvElement.from_lie(kind, bracket(kind, x, y))


@given(st.sampled_from([MIRROR, TWISTED]).flatmap(lambda k: st.tuples(st.just(k), words(k))))
def test_normal_form_is_homogeneous(args):
    kind, word = args
    total = sum((g.degree for g in word), F(0))
    for mono, _ in normal_form(kind, word).items():
        assert monomial_degree(mono) == total


def test_invalid_generator_in_word():
    with pytest.raises(InvalidGenerator):
        normal_form(MIRROR, [h(1)])


# ---- exponent vectors and orders

exps = st.lists(st.integers(0, 3), max_size=5).map(ExpVec)


def test_expvec_basics():
    assert ExpVec([0, 2, 0, 0]) == ExpVec([0, 2])
    assert ExpVec([1, 0, 2]).weight == 7
    assert ExpVec.eps(2) - ExpVec.eps(2) == ExpVec.zero()
    assert ExpVec([0, 3])[2] == 3 and ExpVec([0, 3])[9] == 0
    assert ExpVec([0, 3, 1]).min_support() == 2
    with pytest.raises(ValueError):
        ExpVec.eps(1) - ExpVec.eps(2)


def test_revlex_examples():
    # first differing position decides
    assert cmp_revlex(ExpVec.eps(2), ExpVec.eps(1)) == -1
    assert cmp_revlex([1, 0, 1], [1, 1]) == -1
    assert cmp_revlex([2], [2]) == 0


def test_pair_order_example():
    # equal total weight; larger w of the second component wins under the pair order
    a = (ExpVec.eps(1), ExpVec.zero())
    b = (ExpVec.zero(), ExpVec.eps(1))
    assert cmp_pair(b, a) == 1
    assert cmp_pair_prime(a, b) == 1


@given(exps, exps)
def test_revlex_total_and_antisymmetric(a, b):
    assert cmp_revlex(a, b) == -cmp_revlex(b, a)
    assert (cmp_revlex(a, b) == 0) == (a == b)


@given(exps, exps, exps)
def test_revlex_transitive(a, b, c):
    if cmp_revlex(a, b) <= 0 and cmp_revlex(b, c) <= 0:
        assert cmp_revlex(a, c) <= 0


@given(exps, exps, exps, exps)
def test_pair_order_total(a, b, c, e):
    x, y = (a, b), (c, e)
    assert cmp_pair(x, y) == -cmp_pair(y, x)
    assert (cmp_pair(x, y) == 0) == (x == y)
    assert (cmp_pair_prime(x, y) == 0) == (x == y)


@given(exps, exps, st.integers(1, 4))
def test_pair_order_compatible_with_adding(a, b, p):
    # adding eps_p to a component strictly increases total weight, hence the order
    assert cmp_pair((a + ExpVec.eps(p), b), (a, b)) == 1
    assert pair_key((a, b + ExpVec.eps(p))) > pair_key((a, b))


# ---- commutator identities

@pytest.mark.parametrize("which", FORMULAS)
def test_formula_single_instances(which):
    for i, js in [(1, ()), (0, (-1,)), (2, (-1, -2)), (-1, (1, 1, -2))]:
        rep = verify_formula(which, i, js)
        assert rep.passed, rep.counterexample


def test_formula_suite_small():
    rep = formula_suite(2, 2)
    assert rep.passed and rep.checked == 4 * 5 * (1 + 5 + 15)


def test_formula_bounds():
    with pytest.raises(BoundExceeded):
        verify_formula("d-on-d", 1, (0, 0, 0, 0, 0))
    with pytest.raises(BoundExceeded):
        verify_formula("h-on-h", 40, ())
    with pytest.raises(InvalidGenerator):
        verify_formula("h-on-h", 1, (), kind=TWISTED)
