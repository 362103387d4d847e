import itertools

import pytest
from hypothesis import given

from conftest import finite_elems, upsets
from limsup_topo.carriers import (
    CarrierMismatch,
    PeriodTooLarge,
    UPFRAG,
    UPSet,
    canonicalize,
    classify,
    complement,
    join,
    leq,
    meet,
    powerset,
)


def raw_member(prefix, cycle, m):
    if m < len(prefix):
        return prefix[m] == "1"
    return cycle[(m - len(prefix)) % len(cycle)] == "1"


def test_finite_examples(p2):
    a0, a1 = p2.atom(0), p2.atom(1)
    assert meet(a0, p2.one) == a0
    assert meet(a0, a1) == p2.zero
    assert join(a0, a1) == p2.one
    assert join(a0, p2.zero) == a0
    assert complement(a0) == a1
    assert complement(p2.one) == p2.zero
    assert not leq(a0, a1)
    assert all(leq(p2.zero, x) for x in p2.elements)


def test_literals_index_atoms(p2):
    assert p2.elem("10") == p2.atom(0)
    assert p2.elem("01").literal == "01"
    with pytest.raises(ValueError):
        p2.elem("101")


def test_trivial_algebra_rejected():
    with pytest.raises(ValueError):
        powerset(0)


def test_up_examples():
    evens = UPSet("", "10")
    assert meet(evens, UPSet("", "110")) == UPSet("", "100010")
    assert join(evens, UPSet("", "01")) == UPFRAG.one
    assert complement(evens) == UPSet("", "01")
    assert leq(evens, UPSet("11", "1"))
    assert not leq(evens, UPSet("0", "1"))
    assert leq(UPSet("", "100010"), evens)


def test_canonical_examples():
    assert UPSet("101", "11") == UPSet("10", "1")
    assert (UPSet("101", "11").prefix, UPSet("101", "11").cycle) == ("10", "1")
    assert UPSet("", "1111").literal == ";1"
    assert UPSet("1", "0").literal == "1;0"
    with pytest.raises(ValueError):
        UPSet("1", "")


def test_classify():
    assert classify(UPSet("11", "0")) == "finite"
    assert classify(UPSet("0", "1")) == "cofinite"
    assert classify(UPSet("", "10")) == "neither"


def test_mixed_carriers_rejected(p2):
    with pytest.raises(CarrierMismatch):
        meet(p2.atom(0), powerset(3).atom(0))
    with pytest.raises(CarrierMismatch):
        leq(p2.one, UPFRAG.one)


def test_period_cap():
    big1 = UPSet("", "1" + "0" * 250)
    big2 = UPSet("", "1" + "0" * 262)
    with pytest.raises(PeriodTooLarge):
        meet(big1, big2)


@given(upsets)
def test_canonicalize_preserves_semantics(s):
    c = canonicalize(s)
    assert c == s
    assert canonicalize(c) == c
    horizon = len(s.prefix) + 2 * s.period + 8
    assert all((m in c) == (m in s) for m in range(horizon))


@given(upsets, upsets)
def test_equality_is_set_equality(s, t):
    horizon = max(len(s.prefix), len(t.prefix)) + 2 * s.period * t.period
    same = all((m in s) == (m in t) for m in range(horizon))
    assert (s == t) == same


@given(upsets, upsets)
def test_up_ops_pointwise(s, t):
    horizon = max(len(s.prefix), len(t.prefix)) + 2 * s.period * t.period + 3
    for m in range(horizon):
        assert (m in (s & t)) == (m in s and m in t)
        assert (m in (s | t)) == (m in s or m in t)
        assert (m in ~s) == (m not in s)
    assert (s <= t) == all(m in t for m in range(horizon) if m in s)


@given(upsets, upsets, upsets)
def test_up_boolean_laws(a, b, c):
    assert a & (b | c) == (a & b) | (a & c)
    assert a | (b & c) == (a | b) & (a | c)
    assert ~(a & b) == ~a | ~b
    assert a | (a & b) == a
    assert (a & b) & c == a & (b & c)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_boolean_axioms_exhaustive(n):
    P = powerset(n)
    E = P.elements
    for a, b, c in itertools.product(E, repeat=3):
        assert a & (b | c) == (a & b) | (a & c)
        assert a | (b & c) == (a | b) & (a | c)
        assert (a | b) | c == a | (b | c)
        assert a | (a & b) == a
    for a in E:
        assert a & ~a == P.zero and a | ~a == P.one
        assert ~~a == a


def test_order_is_lattice_order_on_p3(p3):
    E = p3.elements
    for a, b in itertools.product(E, repeat=2):
        assert (a <= b) == (a & b == a)
        lower = [c for c in E if c <= a and c <= b]
        assert max(lower, key=lambda c: bin(c.bits).count("1")) == a & b
        assert all(c <= a & b for c in lower)
        upper = [c for c in E if a <= c and b <= c]
        assert all(a | b <= c for c in upper)
    for a, b, c in itertools.product(E, repeat=3):
        if a <= b and b <= c:
            assert a <= c
        if a <= b and b <= a:
            assert a == b


@given(finite_elems(3), finite_elems(3))
def test_de_morgan_p3(a, b):
    assert ~(a | b) == ~a & ~b
