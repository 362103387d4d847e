"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line with its runtime and
budget, then asserts.
"""

import itertools
import random
import time
import warnings

import pytest

from limsup_topo.carriers import UPFRAG, big_meet, powerset
from limsup_topo.census import enumerate_closed_sets
from limsup_topo.convergence import (
    generate_topology,
    iterate_u_to_fixpoint,
    lambda_up,
    lim_in_topology,
    sequence_types,
    type_of,
    u_operator,
)
from limsup_topo.forcing import BName, bv_infinite_intersection, exists_term_below, t4107_suite
from limsup_topo.sequences import AffineMap, IndexMap, TailAbove, library, limsup
from limsup_topo.suites import ep_sweep, tower_convergences, window_limsup
from limsup_topo.upsets import (
    UpsetFD,
    dec_iterate,
    dec_membership,
    is_closed,
    lim_closed_form,
    min_elements,
    preimage_join,
    preimage_meet,
    reconstruct,
    up_u_operator,
    zero_limit_witness,
)


@pytest.fixture
def verdict(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(number, title, ok, elapsed=None, budget=None):
        timing = ""
        if elapsed is not None:
            timing = f" ({elapsed:.2f} s" + (f", budget {budget} s)" if budget else ")")
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}{timing}"
        if reporter is not None:
            reporter.write_line("\n" + line)
        else:
            print(line)

    return emit


def _clock(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def _closed_family(n):
    carrier = powerset(n)
    mode = "scan" if n <= 4 else "antichain"
    return [reconstruct(a, carrier) for a in enumerate_closed_sets(n, mode).antichains]


def _census_closure(A, family, carrier):
    out = frozenset(carrier.elements)
    for F in family:
        if A <= F:
            out &= F
    return out


def _closure_sweep():
    """Every A in P(3) with |A| <= 3, then 1000 seeded random A in P(4)."""
    p3 = powerset(3)
    for k in range(4):
        for combo in itertools.combinations(p3.elements, k):
            yield p3, frozenset(combo)
    p4 = powerset(4)
    rng = random.Random(20260101)
    for _ in range(1000):
        size = rng.randint(0, 6)
        yield p4, frozenset(rng.sample(p4.elements, size))


def test_criterion_01_census(verdict):
    def run():
        scan = [enumerate_closed_sets(n, "scan").count for n in (1, 2, 3)]
        t0 = time.perf_counter()
        scan4 = enumerate_closed_sets(4, "scan").count
        t_scan4 = time.perf_counter() - t0
        anti4 = enumerate_closed_sets(4, "antichain").count
        t0 = time.perf_counter()
        p5 = [enumerate_closed_sets(5, "antichain", o).count for o in ("natural", "graded-reverse")]
        t_p5 = time.perf_counter() - t0
        return scan + [scan4], anti4, p5, t_scan4, t_p5

    (counts, anti4, p5, t_scan4, t_p5), elapsed = _clock(run)
    ok = counts == [3, 6, 20, 168] and anti4 == 168 and p5 == [7581, 7581] and t_scan4 < 5 and t_p5 < 120
    verdict(1, f"census {counts}, antichain P(4) {anti4}, P(5) {p5}; P(4) scan {t_scan4:.2f} s, "
               f"P(5) {t_p5:.2f} s", ok, elapsed)
    assert counts == [3, 6, 20, 168]
    assert anti4 == 168 and p5 == [7581, 7581]
    assert t_scan4 < 5 and t_p5 < 120


def test_criterion_02_limit_oracle(verdict):
    def run():
        p2 = powerset(2)
        topo = generate_topology(lambda_up(p2))
        assert len(topo.opens) == 6
        seqs = ep_sweep(p2, 2, 3)
        bad = [x for x in seqs if lim_in_topology(x, topo) != frozenset(lim_closed_form(x).elements())]
        return len(seqs), bad

    (swept, bad), elapsed = _clock(run)
    ok = not bad and elapsed < 10
    verdict(2, f"Lim by brute force equals (join C) up on {swept} sequences over P(2)", ok, elapsed, 10)
    assert not bad, [x.literal for x in bad[:5]]
    assert elapsed < 10


def test_criterion_03_closure_agreement(verdict):
    def run():
        families = {n: _closed_family(n) for n in (3, 4)}
        bad, swept = [], 0
        for carrier, A in _closure_sweep():
            swept += 1
            dec = frozenset(dec_iterate(A, carrier).closure)
            fix, _ = iterate_u_to_fixpoint(A, lambda_up(carrier))
            census = _census_closure(A, families[carrier.n], carrier)
            if not (dec == fix == census):
                bad.append((carrier, A))
        return swept, bad

    (swept, bad), elapsed = _clock(run)
    ok = not bad and elapsed < 60
    verdict(3, f"Dec, u-iteration and census closure agree on {swept} sets", ok, elapsed, 60)
    assert not bad
    assert elapsed < 60


def _chain_links(A, carrier, topo_closure):
    up = reconstruct(A, carrier)
    u = u_operator(A, lambda_up(carrier), exhaustive=carrier.n <= 3)
    cl = topo_closure(A)
    meet_up = carrier.up(big_meet(A, carrier))
    return [
        A <= up,
        up <= u,
        u == reconstruct(u, carrier),
        u <= cl,
        cl == reconstruct(cl, carrier),
        cl <= meet_up,
    ]


def test_criterion_04_inclusion_chain(verdict):
    def run():
        families = {n: _closed_family(n) for n in (3, 4)}
        broken = 0
        swept = 0
        for carrier, A in _closure_sweep():
            if not A:
                continue
            swept += 1
            links = _chain_links(A, carrier, lambda S: _census_closure(S, families[carrier.n], carrier))
            broken += not all(links)
        # EX4101: two incomparable atoms of P(2)
        p2 = powerset(2)
        a, b = p2.atom(0), p2.atom(1)
        cl, _ = iterate_u_to_fixpoint({a, b}, lambda_up(p2))
        ex1 = cl == p2.up(a) | p2.up(b) and p2.zero not in cl and cl != p2.up(a & b)
        # EX4102: the tail chain on the ultimately periodic fragment
        tails = TailAbove(AffineMap(1, 0))
        s = limsup(tails)
        ex2 = (
            s == UPFRAG.zero
            and window_limsup(tails.term) == "0" * 48
            and s in up_u_operator(tails)
            and not exists_term_below(tails, s)
            and dec_membership(s, UpsetFD.cofinite())
        )
        return swept, broken, ex1, ex2

    (swept, broken, ex1, ex2), elapsed = _clock(run)
    ok = broken == 0 and ex1 and ex2
    verdict(4, f"six links on {swept} sets; EX4101 {ex1}; EX4102 on upfrag {ex2}", ok, elapsed)
    assert broken == 0
    assert ex1 and ex2


def test_criterion_05_min_round_trip(verdict):
    def run():
        out = {}
        for n in (3, 4):
            carrier = powerset(n)
            family = _closed_family(n)
            out[n] = (len(family), all(reconstruct(min_elements(F, carrier), carrier) == F for F in family))
        return out

    out, elapsed = _clock(run)
    ok = out[3] == (20, True) and out[4] == (168, True)
    verdict(5, f"F = union of b up over Min(F) for {out[3][0]} + {out[4][0]} closed sets", ok, elapsed)
    assert ok


def _space_properties(n):
    carrier = powerset(n)
    topo = generate_topology(lambda_up(carrier))
    everything = frozenset(carrier.elements)
    for O in topo.opens:
        if not all(carrier.down(a) <= O for a in O):
            return False
        if O and carrier.zero not in O:
            return False
    downsets = {
        frozenset(c)
        for k in range(len(everything) + 1)
        for c in itertools.combinations(carrier.elements, k)
        if all(carrier.down(a) <= frozenset(c) for a in c)
    }
    if set(topo.opens) != downsets:
        return False
    closeds = set(topo.closeds)
    connected = {o for o in topo.opens if o in closeds} == {frozenset(), everything}
    pairs = list(itertools.combinations(carrier.elements, 2))
    t0 = all(any((a in o) != (b in o) for o in topo.opens) for a, b in pairs)
    t1 = all(any(a in o and b not in o for o in topo.opens) for a, b in itertools.permutations(carrier.elements, 2))
    compact = [o for o in topo.opens if carrier.one in o] == [everything]
    return connected and t0 and not t1 and compact


def test_criterion_06_space_properties(verdict):
    out, elapsed = _clock(lambda: {n: _space_properties(n) for n in (2, 3)})
    ok = all(out.values())
    verdict(6, "open sets are downsets with 0; connected, T0, not T1, compact on P(2), P(3)", ok, elapsed)
    assert ok


def test_criterion_07_continuity(verdict):
    def run():
        carrier = powerset(3)
        topo = generate_topology(lambda_up(carrier))
        checked, bad = 0, 0
        for a in carrier.elements:
            for F in topo.closeds:
                U = UpsetFD(carrier, min_elements(F, carrier))
                for op, pre in ((lambda x: x & a, preimage_meet), (lambda x: x | a, preimage_join)):
                    members = frozenset(x for x in carrier.elements if op(x) in F)
                    P, closed = pre(a, U)
                    checked += 1
                    bad += not (topo.is_closed(members) and closed and frozenset(P.elements()) == members)
        return checked, bad, len(topo.closeds)

    (checked, bad, nclosed), elapsed = _clock(run)
    ok = bad == 0 and nclosed == 20
    verdict(7, f"{checked} preimages under meet and join with a are closed", ok, elapsed)
    assert ok


def test_criterion_08_forcing(verdict):
    def run():
        carrier = powerset(3)
        nonzero = [e for e in carrier.elements if e != carrier.zero]
        swept, bad = 0, 0
        for k in (1, 2, 3):
            for Q in itertools.combinations(nonzero, k):
                if any(x <= y for x in Q for y in Q if x != y):
                    continue
                swept += 1
                report = t4107_suite(BName.finite({i: q for i, q in enumerate(Q)}))
                truth = is_closed(up_closure_of(Q, carrier), carrier).closed
                bad += not (report.join_condition == report.forcing_condition == truth == report.closed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            tails = BName.of_sequence(TailAbove(AffineMap(1, 0)))
            value = bv_infinite_intersection(tails, IndexMap())
            report = t4107_suite(tails, [IndexMap()])
        negative = value == UPFRAG.zero and not report.forcing_condition and report.closed is False
        return swept, bad, negative

    (swept, bad, negative), elapsed = _clock(run)
    ok = bad == 0 and negative and swept > 0
    verdict(8, f"(c), (e) and is_closed agree on {swept} antichains of P(3); tails give value 0 and fail (e)",
            ok, elapsed)
    assert bad == 0 and swept > 0
    assert negative


def up_closure_of(Q, carrier):
    return frozenset(e for e in carrier.elements if any(q <= e for q in Q))


def test_criterion_09_zero_limit(verdict):
    def run():
        rows = []
        for name, x in library():
            v = zero_limit_witness(x)
            zero = limsup(x) == x.carrier.zero
            ok = v.zero_in_lim == zero
            if not v.zero_in_lim:
                idx = v.indices(25)
                ok &= v.verified and all(v.point in x.term(n) for n in idx)
                ok &= all(a < b for a, b in zip(idx, idx[1:]))
            rows.append((name, ok))
        return rows

    rows, elapsed = _clock(run)
    bad = [name for name, ok in rows if not ok]
    verdict(9, f"zero-limit verdicts match limsup = 0 on {len(rows)} library sequences", not bad, elapsed)
    assert not bad


def test_criterion_10_tower_laws(verdict):
    def run():
        carrier = powerset(2)
        failures = []
        types = sequence_types(carrier)
        for levels in tower_convergences(2):
            for t in types:
                limits = [lam.limits(*t) for lam in levels]
                if not all(a <= b for a, b in zip(limits, limits[1:])):
                    failures.append(("order", levels[0].name, t))
            if len({generate_topology(lam).opens for lam in levels[:4]}) != 1:
                failures.append(("invariance", levels[0].name))
        for x in ep_sweep(carrier, 1, 2):
            assert type_of(x) in types
        lam = lambda_up(carrier)
        topo = generate_topology(lam)
        subsets = [frozenset(c) for k in range(5) for c in itertools.combinations(carrier.elements, k)]
        u = {A: u_operator(A, lam, exhaustive=True) for A in subsets}
        if u[frozenset()] != frozenset():
            failures.append(("u empty",))
        for A in subsets:
            if not A <= u[A]:
                failures.append(("extensive", A))
            if topo.is_closed(A) != (u[A] == A):
                failures.append(("closed iff fixed", A))
            for B in subsets:
                if A <= B and not u[A] <= u[B]:
                    failures.append(("monotone", A, B))
                if u[A | B] != u[A] | u[B]:
                    failures.append(("additive", A, B))
        return failures

    failures, elapsed = _clock(run)
    verdict(10, "tower order, topology invariance, u laws and F closed iff u(F) = F on P(2)", not failures, elapsed)
    assert not failures, failures[:5]
