import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import upsets
from limsup_topo.carriers import UPFRAG, UPSet, powerset
from limsup_topo.convergence import generate_topology, iterate_u_to_fixpoint, lambda_down, lambda_up, lim_in_topology
from limsup_topo.sequences import AffineMap, BlockDiag, EventuallyPeriodic, SingletonDiag, TailAbove, UnionTail
from limsup_topo.upsets import (
    InfiniteRange,
    NoMatchingClause,
    NotUpwardClosed,
    UnstableSequence,
    UnsupportedUpset,
    UpsetFD,
    closure_special,
    dec_iterate,
    dec_membership,
    dec_operator,
    dualize,
    is_closed,
    lim_closed_form,
    min_elements,
    preimage_join,
    preimage_meet,
    reconstruct,
    stable_orbit_closure,
    t4121_check,
    up_closure,
    zero_limit_witness,
)

P2 = powerset(2)
A, B = P2.atom(0), P2.atom(1)
TAILS = TailAbove(AffineMap(1, 0))


def test_up_closure_examples():
    assert up_closure({A, A | B}).generators == {A}
    assert up_closure({A, B}).generators == {A, B}
    assert up_closure({P2.one}).elements() == {P2.one}
    empty = up_closure(set(), P2)
    assert empty.elements() == frozenset() and is_closed(empty)


def test_min_elements_examples():
    assert min_elements({A, B, P2.one}) == {A, B}
    assert min_elements(P2.elements) == {P2.zero}
    assert min_elements({P2.one}) == {P2.one}
    with pytest.raises(NotUpwardClosed):
        min_elements({A})


def test_min_round_trip_on_all_upsets_p3(p3):
    E = p3.elements
    upsets_found = 0
    for r in range(len(E) + 1):
        for combo in itertools.combinations(E, r):
            F = frozenset(combo)
            if all(p3.up(a) <= F for a in F):
                upsets_found += 1
                assert reconstruct(min_elements(F, p3), p3) == F
                assert min_elements(reconstruct(min_elements(F, p3), p3), p3) == min_elements(F, p3)
    assert upsets_found == 20


def test_is_closed_finite_matches_topology(p3):
    topo = generate_topology(lambda_up(p3))
    for F in topo.closeds:
        assert is_closed(F, p3).closed
        assert is_closed(UpsetFD(p3, min_elements(F, p3))).closed
    verdict = is_closed({p3.atom(0)}, p3)
    assert not verdict and verdict.witness == EventuallyPeriodic.constant(p3.atom(0))


def test_is_closed_up_fragment():
    cof = is_closed(UpsetFD.cofinite())
    assert not cof.closed and cof.witness == TAILS
    assert is_closed(UpsetFD.principal(UPSet("", "10"))).closed
    assert is_closed(up_closure({UPSet("", "10"), UPSet("", "01")})).closed
    with pytest.raises(UnsupportedUpset):
        is_closed(dualize(UpsetFD.principal(UPSet("", "10"))))


def test_cofinite_family_membership():
    cof = UpsetFD.cofinite()
    assert UPSet("0101", "1") in cof
    assert UPSet("", "10") not in cof
    assert dec_membership(UPFRAG.zero, cof)


def test_dec_membership_finite(p2):
    F = UpsetFD(p2, frozenset([A]))
    for b in p2.elements:
        assert dec_membership(b, F) == (b in F)
    assert dec_membership(A, F)


def test_dec_iterate_examples(p2):
    trace = dec_iterate({A, B})
    assert trace.stages[1] == p2.up(A) | p2.up(B) and trace.stable_at == 1
    tails = dec_iterate(TAILS)
    assert UPFRAG.zero in tails.stages[1] and tails.closure == UpsetFD.whole(UPFRAG)
    closed = p2.up(A)
    assert dec_iterate(closed).stable_at == 0


def test_dec_operator_on_chains(p2):
    assert dec_operator({p2.one, A}) == {p2.one, A}
    assert dec_operator({A, B}) == {A, B}


def test_closure_special():
    evens = UPSet("", "10")
    assert closure_special("decreasing", UnionTail(evens, AffineMap(1, 0))) == UpsetFD.principal(evens)
    inc = EventuallyPeriodic((UPSet.finite([2]),), (UPSet.finite([1, 2]),))
    assert closure_special("increasing", inc) == UpsetFD.principal(UPSet.finite([2]))
    assert closure_special("antichain", SingletonDiag(AffineMap(1, 0))) == UpsetFD.whole(UPFRAG)
    assert closure_special("dense", UPFRAG) == UpsetFD.whole(UPFRAG)
    assert closure_special("finite", {A, B}).generators == {A, B}
    with pytest.raises(NoMatchingClause):
        closure_special("increasing", TAILS)


def test_lim_closed_form_examples(p2):
    assert lim_closed_form(EventuallyPeriodic((), (A, B))).elements() == {p2.one}
    assert lim_closed_form(EventuallyPeriodic.constant(B)).elements() == p2.up(B)
    assert lim_closed_form(SingletonDiag(AffineMap(1, 0))) == UpsetFD.whole(UPFRAG)
    with pytest.raises(InfiniteRange) as info:
        lim_closed_form(UnionTail(UPSet("", "10"), AffineMap(1, 0)))
    assert info.value.lower_bound == UpsetFD.principal(UPSet("", "10"))


def test_zero_limit_examples():
    assert zero_limit_witness(SingletonDiag(AffineMap(1, 0))).zero_in_lim
    v = zero_limit_witness(UnionTail(UPSet("01", "0"), AffineMap(2, 0)))
    assert not v.zero_in_lim and v.point == 1 and v.verified
    c = zero_limit_witness(EventuallyPeriodic.constant(UPFRAG.one))
    assert c.point == 0 and c.indices(3) == [0, 1, 2]


def test_preimage_examples(p2):
    F = UpsetFD.principal(A)
    P, closed = preimage_meet(A, F)
    assert P.elements() == p2.up(A) and closed
    P, _ = preimage_meet(A, UpsetFD.principal(p2.one))
    assert P.elements() == frozenset()
    P, _ = preimage_meet(A, UpsetFD.principal(B))
    assert P.elements() == frozenset()
    P, closed = preimage_join(A, UpsetFD.principal(p2.one))
    assert P.elements() == p2.up(B) and closed


@given(upsets, st.lists(upsets, min_size=1, max_size=3), st.lists(upsets, min_size=1, max_size=6))
def test_preimage_up_fragment(a, gens, probes):
    F = UpsetFD(UPFRAG, frozenset(gens))
    for pre, op in ((preimage_meet, lambda x: x & a), (preimage_join, lambda x: x | a)):
        P, closed = pre(a, F)
        assert closed
        for x in probes:
            assert (x in P) == (op(x) in F)


def test_t4121_examples(p2):
    x = EventuallyPeriodic((), (A, B))
    assert t4121_check(x, A | B)
    assert not t4121_check(x, A)
    assert t4121_check(EventuallyPeriodic.constant(B), B)


def test_t4121_matches_topology(p2):
    topo = generate_topology(lambda_up(p2))
    for cyc in itertools.chain.from_iterable(itertools.product(p2.elements, repeat=k) for k in (1, 2, 3)):
        x = EventuallyPeriodic((), cyc)
        lim = lim_in_topology(x, topo)
        for a in p2.elements:
            assert t4121_check(x, a) == (a in lim)


def test_stable_orbit_closure(p2):
    assert stable_orbit_closure(EventuallyPeriodic((p2.one,), (A,))).generators == {A}
    both = stable_orbit_closure(EventuallyPeriodic((B,), (A,)))
    assert both.generators == {A, B}
    assert both.elements() == iterate_u_to_fixpoint({A, B}, lambda_up(p2))[0]
    assert stable_orbit_closure(EventuallyPeriodic.constant(A)).generators == {A}
    with pytest.raises(UnstableSequence):
        stable_orbit_closure(EventuallyPeriodic((), (A, B)))


def test_dualize(p2):
    up_a = UpsetFD.principal(A)
    assert dualize(up_a) == UpsetFD(p2, frozenset([~A]), direction="down")
    assert dualize(up_a).elements() == p2.down(~A)
    for obj in (A, up_a, EventuallyPeriodic((A,), (B, p2.one)), frozenset({A, B})):
        assert dualize(dualize(obj)) == obj
    # dual closure of a singleton is its downset
    for b in p2.elements:
        cl, _ = iterate_u_to_fixpoint({b}, lambda_down(p2))
        assert cl == p2.down(b)
        assert cl == dualize(iterate_u_to_fixpoint({~b}, lambda_up(p2))[0])


def test_domination_p2(p2):
    topo = generate_topology(lambda_up(p2))
    seqs = [EventuallyPeriodic((), c) for k in (1, 2) for c in itertools.product(p2.elements, repeat=k)]
    for x, z in itertools.product(seqs, repeat=2):
        if all(x.term(n) <= z.term(n) for n in range(4)):
            assert lim_in_topology(z, topo) <= lim_in_topology(x, topo)
            assert lim_closed_form(z).elements() <= lim_closed_form(x).elements()


def test_block_antichain_closure():
    assert closure_special("antichain", BlockDiag(AffineMap(2, 0))) == UpsetFD.whole(UPFRAG)
