"""Theorem-tagged verification suites and their reports.

A suite is an input generator plus a per-case check. Every case input is a
parseable object, so a failing case is reported by its rendered literal and
``recheck(tag, literal)`` re-runs exactly that case. Oracles are independent
of the code under test wherever one is cheap: brute-force tail joins for
limsup, the a-posteriori limit of the enumerated topology, exhaustive type
sweeps for ``u``, and the census of closed sets.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .carriers import PowerSet, UPFRAG, UPFragment, UPSet, big_join, big_meet, element_key, powerset
from .census import MAX_SCAN_N, enumerate_closed_sets
from .convergence import (
    Convergence,
    generate_topology,
    is_topological,
    iterate_u_to_fixpoint,
    l1_closure,
    l2_closure,
    l3_closure,
    lambda_down,
    lambda_li,
    lambda_ls,
    lambda_up,
    lim_in_topology,
    open_in_O_lambda,
    representative,
    sequence_types,
    topological_limit,
    type_of,
    u_operator,
)
from .forcing import BName, LabelCycle, bv_infinite_intersection, exists_term_below, t4107_suite, t4108_check
from .literals import Pair, parse_carrier, parse_input, render
from .sequences import (
    AffineMap,
    BlockDiag,
    EventuallyPeriodic,
    IndexMap,
    NotRepresentable,
    TailAbove,
    UnionTail,
    inf_value_set,
    is_decreasing,
    is_increasing,
    is_injective_antichain,
    library,
    liminf,
    limsup,
    subsequence,
    values_of,
)
from .upsets import (
    InfiniteRange,
    UnstableSequence,
    UpsetFD,
    closure_special,
    dec_iterate,
    dec_membership,
    dec_operator,
    dualize,
    is_closed,
    is_upward_closed,
    lim_closed_form,
    lim_lower_bound,
    min_elements,
    preimage_join,
    preimage_meet,
    reconstruct,
    stable_orbit_closure,
    t4121_check,
    up_closure,
    up_u_operator,
    zero_limit_witness,
)


class UnknownSuite(KeyError):
    pass


class LimitViolation(ValueError):
    pass


LIMITS = {"n": (1, 5), "max_cycle": (1, 6), "max_prefix": (0, 4), "max_subset": (0, 6), "samples": (1, 10000)}


@dataclass(frozen=True)
class RunConfig:
    carrier: Optional[str] = None  # selector; None means the suite default
    max_cycle: int = 3
    max_prefix: int = 2
    max_subset: int = 3
    samples: int = 40
    seed: int = 0
    output: str = "table"
    timing: bool = False

    def validate(self) -> None:
        for key, (lo, hi) in LIMITS.items():
            if key == "n":
                continue
            value = getattr(self, key)
            if not lo <= value <= hi:
                raise LimitViolation(f"{key}={value} outside [{lo}, {hi}]")
        if self.output not in ("table", "machine"):
            raise LimitViolation(f"unknown output mode {self.output!r}")


@dataclass
class CaseResult:
    case: str
    status: str  # "pass", "fail" or "error"
    witness: Optional[str] = None
    millis: Optional[float] = None
    note: str = ""


@dataclass
class SuiteReport:
    suite: str
    title: str
    carrier: str
    sampled: bool
    seed: Optional[int]
    cases: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if c.status != "pass"]

    @property
    def passed(self) -> bool:
        return bool(self.cases) and not self.failures

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1


@dataclass(frozen=True)
class Context:
    carrier: object
    config: RunConfig

    @property
    def finite(self) -> bool:
        return isinstance(self.carrier, PowerSet)

    def rng(self) -> random.Random:
        return random.Random(self.config.seed)


@dataclass(frozen=True)
class Suite:
    tag: str
    title: str
    inputs: Callable[[Context], Iterable]
    check: Callable
    default: str
    kinds: tuple
    max_n: int
    sampled_on: tuple = ()


REGISTRY: dict = {}


def register(tag, title, inputs, default="powerset:2", kinds=("finite",), max_n=3, sampled_on=()):
    def wrap(check):
        REGISTRY[tag] = Suite(tag, title, inputs, check, default, kinds, max_n, sampled_on)
        return check

    return wrap


# ---------------------------------------------------------------- oracles


@lru_cache(maxsize=None)
def topology(n: int):
    """The topology generated by ``lambda_up`` on P(n), by full enumeration."""
    return generate_topology(lambda_up(powerset(n)))


@lru_cache(maxsize=None)
def closed_sets(n: int) -> tuple:
    """Closed sets of P(n) as element sets, from the census."""
    carrier = powerset(n)
    mode = "scan" if n <= MAX_SCAN_N else "antichain"
    return tuple(reconstruct(a, carrier) for a in enumerate_closed_sets(n, mode).antichains)


def closure_by_census(A, n: int) -> frozenset:
    """Intersection of the enumerated closed supersets of ``A``."""
    out = frozenset(powerset(n).elements)
    for f in closed_sets(n):
        if A <= f:
            out &= f
    return out


def brute_limsup(x, carrier):
    """``meet_k join_{n >= k} x_n`` over an explicit horizon of terms."""
    start, p = len(x.prefix), len(x.cycle)
    terms = [x.term(n) for n in range(start + 2 * p)]
    return big_meet((big_join(terms[k:], carrier) for k in range(start + p)), carrier)


def brute_liminf(x, carrier):
    start, p = len(x.prefix), len(x.cycle)
    terms = [x.term(n) for n in range(start + 2 * p)]
    return big_join((big_meet(terms[k:], carrier) for k in range(start + p)), carrier)


WINDOW = 48
LATE = 400


def window_limsup(term, period: int = 1) -> str:
    """Points ``m < WINDOW`` lying in ``term(n)`` for some late ``n``.

    Valid for the shipped descriptors: past index ``LATE`` membership of a
    fixed point is periodic in ``n`` with period dividing ``period``, or
    constant.
    """
    span = max(period, 1)
    return "".join(
        "1" if any(m in term(n) for n in range(LATE, LATE + span)) else "0" for m in range(WINDOW)
    )


def _period_of(x) -> int:
    return len(x.cycle) if isinstance(x, EventuallyPeriodic) else 1


def _upset_within(U: UpsetFD, V: UpsetFD) -> bool:
    if U.cofinite_family:
        return V.cofinite_family or UPFRAG.zero in V
    if V.cofinite_family:
        return all(g.is_cofinite() for g in U.generators)
    return all(g in V for g in U.generators)


# ---------------------------------------------------------------- inputs


def ep_sweep(carrier, max_prefix: int, max_cycle: int, values=None) -> list:
    pool = list(carrier.elements if values is None else values)
    out = set()
    for lp in range(max_prefix + 1):
        for pre in itertools.product(pool, repeat=lp):
            for lc in range(1, max_cycle + 1):
                for cyc in itertools.product(pool, repeat=lc):
                    out.add(EventuallyPeriodic(pre, cyc))
    return sorted(out, key=lambda x: x.literal)


def subsets_up_to(carrier, k: int) -> list:
    elems = carrier.elements
    return [frozenset(c) for r in range(k + 1) for c in itertools.combinations(elems, r)]


def all_subsets(carrier) -> list:
    return subsets_up_to(carrier, carrier.size)


def carriers_up_to(ctx: Context) -> list:
    return [powerset(k) for k in range(1, ctx.carrier.n + 1)]


def random_upset_element(rng: random.Random, max_prefix: int, max_cycle: int) -> UPSet:
    pre = "".join(rng.choice("01") for _ in range(rng.randint(0, max_prefix)))
    cyc = "".join(rng.choice("01") for _ in range(rng.randint(1, max_cycle)))
    return UPSet(pre, cyc)


def random_index_map(rng: random.Random, affine_only: bool = False) -> IndexMap:
    c, d = rng.randint(1, 3), rng.randint(0, 3)
    if affine_only or rng.random() < 0.5:
        return IndexMap.affine(c, d)
    # a table of small indices, then the affine rule shifted past them
    head = tuple(sorted(rng.sample(range(4), rng.randint(1, 3))))
    return IndexMap(head, c, d + 4)


def library_sequences(ctx: Context) -> list:
    return [x for _, x in library()]


# ---------------------------------------------------------------- suites


def _closed_upsets(ctx):
    return [UpsetFD(ctx.carrier, min_elements(f, ctx.carrier)) for f in closed_sets(ctx.carrier.n)]


@register("T4106", "closed sets are the union of the upsets of their minimal elements", _closed_upsets,
          default="powerset:3", max_n=5)
def _check_t4106(F, ctx):
    members = frozenset(F.elements())
    ok = (
        min_elements(members, ctx.carrier) == F.generators
        and reconstruct(min_elements(members, ctx.carrier), ctx.carrier) == members
        and reconstruct(F.generators, ctx.carrier) == members
        and members in set(closed_sets(ctx.carrier.n))
    )
    return ok, f"|F| = {len(members)}, |Min F| = {len(F.generators)}"


@register("T4105", "closed iff upward closed and closed under limsup", lambda ctx: all_subsets(ctx.carrier),
          default="powerset:3")
def _check_t4105(F, ctx):
    carrier = ctx.carrier
    upward = is_upward_closed(F, carrier)
    # limsup of a sequence in F is the join of a nonempty C within F
    limsup_closed = all((a | b) in F for a in F for b in F)
    topo_closed = topology(carrier.n).is_closed(F)
    verdict = is_closed(F, carrier).closed
    return topo_closed == (upward and limsup_closed) == verdict, f"closed={topo_closed}"


def _chain_links(A, carrier):
    lam = lambda_up(carrier)
    up = reconstruct(A, carrier)
    u = u_operator(A, lam, exhaustive=True)
    cl = topology(carrier.n).closure(A)
    meet_up = carrier.up(big_meet(A, carrier))
    return [
        ("A <= A up", A <= up),
        ("A up <= u(A)", up <= u),
        ("u(A) = u(A) up", u == reconstruct(u, carrier)),
        ("u(A) <= cl(A)", u <= cl),
        ("cl(A) = cl(A) up", cl == reconstruct(cl, carrier)),
        ("cl(A) <= (meet A) up", cl <= meet_up),
    ]


@register("T4102", "inclusion chain from A to (meet A) up", lambda ctx: subsets_up_to(ctx.carrier, ctx.config.max_subset),
          default="powerset:3")
def _check_t4102(A, ctx):
    broken = [name for name, ok in _chain_links(A, ctx.carrier) if not ok]
    return not broken, "broken: " + ", ".join(broken) if broken else "six links hold"


def _incomparable_pairs(ctx):
    elems = ctx.carrier.elements
    return [frozenset([a, b]) for a, b in itertools.combinations(elems, 2) if not a <= b and not b <= a]


@register("EX4101", "closure of two incomparable elements is strictly below the upset of their meet",
          _incomparable_pairs, default="powerset:2")
def _check_ex4101(A, ctx):
    carrier = ctx.carrier
    a, b = sorted(A, key=element_key)
    cl, _ = iterate_u_to_fixpoint(A, lambda_up(carrier))
    return cl == carrier.up(a) | carrier.up(b) and cl != carrier.up(a & b), f"|cl| = {len(cl)}"


def _decreasing_families(ctx):
    evens = UPSet("", "10")
    return [
        TailAbove(AffineMap(1, 0)),
        TailAbove(AffineMap(2, 1)),
        UnionTail(evens, AffineMap(1, 0)),
        UnionTail(UPSet.finite([0, 3]), AffineMap(3, 2)),
    ]


@register("EX4102", "A up differs from u(A) for a decreasing chain", _decreasing_families,
          default="upfrag", kinds=("upfrag",))
def _check_ex4102(x, ctx):
    s = limsup(x)
    if s.window(WINDOW) != window_limsup(x.term):
        return False, "closed-form limsup disagrees with the window oracle"
    in_u = s in up_u_operator(x)
    in_up = exists_term_below(x, s)
    zero_case = not isinstance(x, TailAbove) or (s == UPFRAG.zero and dec_membership(s, UpsetFD.cofinite()))
    return in_u and not in_up and zero_case, f"limsup {s.literal} in u(A) but not in A up"


def _ex4103_inputs(ctx):
    a, b = ctx.carrier.atom(0), ctx.carrier.atom(1)
    return [EventuallyPeriodic((), (a, b)), EventuallyPeriodic.constant(b), EventuallyPeriodic.constant(a | b)]


def _lim_agrees(x, carrier):
    got = frozenset(lim_closed_form(x).elements())
    want = lim_in_topology(x, topology(carrier.n))
    return got == want, got


@register("EX4103", "limits of a two-value sequence and of a constant", _ex4103_inputs, default="powerset:2")
def _check_ex4103(x, ctx):
    ok, got = _lim_agrees(x, ctx.carrier)
    expected = ctx.carrier.up(big_join(inf_value_set(x), ctx.carrier))
    return ok and got == expected, f"|Lim| = {len(got)}"


def _ep_inputs(ctx):
    return ep_sweep(ctx.carrier, ctx.config.max_prefix, ctx.config.max_cycle)


@register("T4114", "Lim of a finite-range sequence is (join C) up", _ep_inputs, default="powerset:2")
def _check_t4114(x, ctx):
    ok, got = _lim_agrees(x, ctx.carrier)
    return ok, f"|Lim| = {len(got)}"


def _finite_or_library(ctx):
    return _ep_inputs(ctx) if ctx.finite else library_sequences(ctx)


@register("T4113", "(limsup x) up lies within Lim x", _finite_or_library, kinds=("finite", "upfrag"))
def _check_t4113(x, ctx):
    if ctx.finite:
        s = brute_limsup(x, ctx.carrier)
        lim = lim_in_topology(x, topology(ctx.carrier.n))
        return ctx.carrier.up(s) <= lim, f"limsup {s.literal}"
    lower = lim_lower_bound(x)
    try:
        lim = lim_closed_form(x)
    except InfiniteRange as exc:
        return exc.lower_bound == lower, "infinite range: only the lower bound is known"
    return _upset_within(lower, lim), f"Lim = {lim.literal}"


@register("T4115", "limsup 0 puts 0 in Lim x, and then Lim x is everything", _finite_or_library,
          kinds=("finite", "upfrag"))
def _check_t4115(x, ctx):
    carrier = ctx.carrier
    if ctx.finite:
        lim = lim_in_topology(x, topology(carrier.n))
        zero_limsup = brute_limsup(x, carrier) == carrier.zero
        whole = lim == frozenset(carrier.elements)
        return (carrier.zero in lim) == zero_limsup and (whole or not zero_limsup), f"limsup 0: {zero_limsup}"
    zero_limsup = window_limsup(x.term, _period_of(x)) == "0" * WINDOW
    if not zero_limsup:
        return limsup(x) != UPFRAG.zero, "limsup nonzero"
    lim = lim_closed_form(x)
    return lim == UpsetFD.whole(UPFRAG) and zero_limit_witness(x).zero_in_lim, "Lim = everything"


def _t4117_inputs(ctx):
    rng = ctx.rng()
    extra = []
    for _ in range(ctx.config.samples):
        k = rng.randint(1, 3)
        cyc = tuple(random_upset_element(rng, ctx.config.max_prefix, ctx.config.max_cycle) for _ in range(k))
        pre = tuple(random_upset_element(rng, ctx.config.max_prefix, ctx.config.max_cycle)
                    for _ in range(rng.randint(0, ctx.config.max_prefix)))
        extra.append(EventuallyPeriodic(pre, cyc))
    return library_sequences(ctx) + extra


@register("T4117", "0 is a limit iff limsup x = 0 on the ultimately periodic fragment", _t4117_inputs,
          default="upfrag", kinds=("upfrag",), sampled_on=("upfrag",))
def _check_t4117(x, ctx):
    verdict = zero_limit_witness(x)
    oracle = window_limsup(x.term, _period_of(x))
    if verdict.zero_in_lim:
        return oracle == "0" * WINDOW, "0 in Lim x"
    c0 = verdict.point
    idx = verdict.indices(20)
    cofinal = (
        verdict.verified
        and all(c0 in x.term(n) for n in idx)
        and all(a < b for a, b in zip(idx, idx[1:]))
        and c0 < WINDOW
        and oracle[c0] == "1"
    )
    return cofinal, f"point {c0} in x_n for n in {idx[:4]}..."


def _t4118_inputs(ctx):
    if ctx.finite:
        return [Pair(a, F) for a in ctx.carrier.elements for F in _closed_upsets(ctx)]
    rng = ctx.rng()
    out = []
    for _ in range(ctx.config.samples):
        a = random_upset_element(rng, ctx.config.max_prefix, ctx.config.max_cycle)
        gens = [random_upset_element(rng, ctx.config.max_prefix, ctx.config.max_cycle) for _ in range(rng.randint(1, 3))]
        out.append(Pair(a, UpsetFD(UPFRAG, frozenset(gens))))
    return out


@register("T4118", "meets and joins with a fixed element are continuous", _t4118_inputs, default="powerset:3",
          kinds=("finite", "upfrag"), sampled_on=("upfrag",))
def _check_t4118(pair, ctx):
    a, F = pair.first, pair.second
    if not is_closed(F).closed:
        return True, "F not closed; nothing to check"
    ok = True
    for op, pre in (("meet", preimage_meet), ("join", preimage_join)):
        P, closed = pre(a, F)
        ok &= closed
        if ctx.finite:
            members = frozenset(
                x for x in ctx.carrier.elements if ((x & a) if op == "meet" else (x | a)) in F
            )
            ok &= members == frozenset(P.elements()) and topology(ctx.carrier.n).is_closed(members)
        else:
            rng = random.Random(f"{ctx.config.seed}:{a.literal}")
            for _ in range(30):
                x = random_upset_element(rng, ctx.config.max_prefix + 2, ctx.config.max_cycle)
                ok &= (x in P) == (((x & a) if op == "meet" else (x | a)) in F)
    return ok, "both preimages closed"


def _domination_pairs(ctx):
    seqs = ep_sweep(ctx.carrier, 0, min(ctx.config.max_cycle, 2))
    return [Pair(x, z) for x in seqs for z in seqs if _pointwise_leq(x, z)]


def _pointwise_leq(x, z) -> bool:
    horizon = max(len(x.prefix), len(z.prefix)) + 2 * len(x.cycle) * len(z.cycle)
    return all(x.term(n) <= z.term(n) for n in range(horizon))


@register("T4119", "a pointwise larger sequence has fewer limits", _domination_pairs, default="powerset:2")
def _check_t4119(pair, ctx):
    x, z = pair.first, pair.second
    if not _pointwise_leq(x, z):
        raise ValueError("case needs x_n <= z_n for all n")
    topo = topology(ctx.carrier.n)
    lx, lz = lim_in_topology(x, topo), lim_in_topology(z, topo)
    closed_form = frozenset(lim_closed_form(z).elements()) <= frozenset(lim_closed_form(x).elements())
    return lz <= lx and closed_form, f"|Lim z| = {len(lz)} <= |Lim x| = {len(lx)}"


def _t4121_inputs(ctx):
    seqs = ep_sweep(ctx.carrier, min(ctx.config.max_prefix, 1), ctx.config.max_cycle)
    return [Pair(x, a) for x in seqs for a in ctx.carrier.elements]


@register("T4121", "a is a limit iff every subsequence has a further one with limsup below a", _t4121_inputs,
          default="powerset:2")
def _check_t4121(pair, ctx):
    x, a = pair.first, pair.second
    lhs = a in lim_in_topology(x, topology(ctx.carrier.n))
    return t4121_check(x, a) == lhs, f"a in Lim x: {lhs}"


def _is_downset(O, carrier) -> bool:
    return all(carrier.down(a) <= O for a in O)


@register("T4132", "open sets are the downsets; nonempty ones contain 0", lambda ctx: all_subsets(ctx.carrier),
          default="powerset:3")
def _check_t4132(O, ctx):
    carrier = ctx.carrier
    topo = topology(carrier.n)
    is_open = topo.is_open(O)
    rest = frozenset(carrier.elements) - O
    ok = is_open == _is_downset(O, carrier) and topo.is_closed(rest) == is_upward_closed(rest, carrier)
    if is_open and O:
        ok &= carrier.zero in O
    return ok, f"open={is_open}"


@register("T4133", "connected, T0, not T1, compact", carriers_up_to, default="powerset:3", max_n=4)
def _check_t4133(carrier, ctx):
    topo = topology(carrier.n)
    everything = frozenset(carrier.elements)
    clopen = [o for o in topo.opens if o in set(topo.closeds)]
    connected = set(clopen) == {frozenset(), everything}
    pairs = list(itertools.combinations(carrier.elements, 2))
    t0 = all(any((a in o) != (b in o) for o in topo.opens) for a, b in pairs)
    t1 = all(
        any(a in o and b not in o for o in topo.opens) and any(b in o and a not in o for o in topo.opens)
        for a, b in pairs
    )
    around_one = [o for o in topo.opens if carrier.one in o]
    compact = around_one == [everything]
    return connected and t0 and not t1 and compact, f"{len(topo.opens)} open sets"


def _t4107_inputs(ctx):
    if not ctx.finite:
        return [BName.of_sequence(x) for _, x in library()]
    nonzero = [e for e in ctx.carrier.elements if e != ctx.carrier.zero]
    return [
        BName.finite({i: q for i, q in enumerate(sorted(combo, key=element_key))})
        for r in range(1, ctx.config.max_subset + 1)
        for combo in itertools.combinations(nonzero, r)
    ]


@register("T4107", "generator conditions for minimality and closedness agree with forcing", _t4107_inputs,
          default="powerset:3", kinds=("finite", "upfrag"))
def _check_t4107(name, ctx):
    if name.kind == "sequence":
        x = name.seq
        maps = [IndexMap.affine(1, 3)] if isinstance(x, BlockDiag) else [IndexMap(), IndexMap.affine(2, 1)]
        report = t4107_suite(name, maps)
    else:
        report = t4107_suite(name)
        # Min property by brute force: the values are exactly the minimal members of their upset
        values = [q for _, q in name.table]
        up = frozenset(reconstruct(values, ctx.carrier))
        brute_min = frozenset(v for v in up if not any(w < v for w in up))
        if report.distinct and report.min_property != (brute_min == frozenset(values)):
            return False, "Min property disagrees with brute force"
    ok = report.part1_agree and report.part2_agree
    return ok, f"(c)={report.join_condition} (e)={report.forcing_condition} closed={report.closed}"


def _t4108_inputs(ctx):
    if not ctx.finite:
        evens = UPSet("", "10")
        return [
            UpsetFD.cofinite(),
            Pair(UpsetFD.principal(evens), UnionTail(evens, AffineMap(1, 0))),
            Pair(UpsetFD.principal(UPFRAG.zero), TailAbove(AffineMap(1, 0))),
            Pair(UpsetFD.principal(evens), EventuallyPeriodic((), (evens, UPFRAG.one))),
            Pair(UpsetFD.cofinite(), TailAbove(AffineMap(2, 1))),
        ]
    out = []
    cyc = min(ctx.config.max_cycle, 2)
    pre = min(ctx.config.max_prefix, 1)
    for F in _closed_upsets(ctx):
        values = F.elements()
        if values:
            out.extend(Pair(F, x) for x in ep_sweep(ctx.carrier, pre, cyc, values))
    return out


@register("T4108", "a closed set meets every sequence in it at its limsup", _t4108_inputs,
          kinds=("finite", "upfrag"))
def _check_t4108(obj, ctx):
    if isinstance(obj, UpsetFD):
        verdict = is_closed(obj)
        if verdict.closed:
            return True, "closed"
        holds, s = t4108_check(obj, verdict.witness)
        return not holds, f"not closed: {verdict.witness.literal} has limsup {s.literal} outside F"
    F, A = obj.first, obj.second
    holds, s = t4108_check(F, A)
    oracle = brute_limsup(A, ctx.carrier) if isinstance(A, EventuallyPeriodic) and ctx.finite else limsup(A)
    if not ctx.finite and s.window(WINDOW) != window_limsup(A.term, _period_of(A)):
        return False, "limsup disagrees with the window oracle"
    closed = is_closed(F).closed
    ok = s == oracle and holds == (s in F) and (holds or not closed)
    return ok, f"witness {s.literal}" if holds else f"{s.literal} outside F"


@register("T1201", "the maximal topology: literal sweep, topology axioms, fixed point of lim",
          carriers_up_to, default="powerset:2", max_n=3)
def _check_t1201(carrier, ctx):
    ok = True
    for lam in (lambda_ls(carrier), lambda_up(carrier), lambda_li(carrier)):
        topo = generate_topology(lam)
        literal = frozenset(O for O in all_subsets(carrier) if open_in_O_lambda(O, lam))
        ok &= literal == frozenset(topo.opens)
        ok &= generate_topology(topological_limit(topo)).opens == topo.opens
    return ok, f"{len(topology(carrier.n).opens)} open sets for lambda_up"


@register("T1206", "iterating u reaches the topological closure", lambda ctx: all_subsets(ctx.carrier),
          default="powerset:3")
def _check_t1206(A, ctx):
    carrier = ctx.carrier
    cl, steps = iterate_u_to_fixpoint(A, lambda_up(carrier))
    return cl == topology(carrier.n).closure(A) and steps <= carrier.size, f"{steps} steps"


def _empty_rule(values, constant):
    return set()


def _meet_rule(carrier):
    return lambda values, constant: {big_meet(values, carrier)}


@lru_cache(maxsize=None)
def tower_convergences(n: int) -> tuple:
    carrier = powerset(n)
    base = [
        lambda_ls(carrier),
        lambda_li(carrier),
        lambda_up(carrier),
        Convergence("empty", carrier, _empty_rule),
        Convergence("meet", carrier, _meet_rule(carrier)),
    ]
    out = []
    for lam in base:
        prime = l1_closure(lam)
        bar = l2_closure(prime)
        star = l3_closure(bar)
        lim = topological_limit(generate_topology(lam))
        out.append((lam, prime, bar, star, lim))
    return tuple(out)


def _t1247_inputs(ctx):
    carrier = ctx.carrier
    return [carrier] + [representative(v, k, carrier) for v, k in sequence_types(carrier)]


@register("T1247", "closure tower: pointwise order and invariant topology", _t1247_inputs, default="powerset:2")
def _check_t1247(obj, ctx):
    tower = tower_convergences(ctx.carrier.n)
    if isinstance(obj, PowerSet):
        ok = all(
            len({generate_topology(lam).opens for lam in levels[:4]}) == 1 for levels in tower
        )
        return ok, "O_lambda equal along the tower"
    t = type_of(obj)
    for levels in tower:
        limits = [lam.limits(*t) for lam in levels]
        if not all(a <= b for a, b in zip(limits, limits[1:])):
            return False, f"tower order fails for {levels[0].name}"
    return True, "lambda <= lambda' <= bar <= star <= lim"


def _hausdorff_rule(values, constant):
    return set(values) if len(values) == 1 else set()


@register("T1263", "for a Hausdorff convergence the star closure is the topological limit", carriers_up_to,
          default="powerset:2")
def _check_t1263(carrier, ctx):
    lam = Convergence("single-value", carrier, _hausdorff_rule, l1=True, l2=True)
    star = l3_closure(lam)
    lim = topological_limit(generate_topology(lam))
    types = sequence_types(carrier)
    return all(star.limits(*t) == lim.limits(*t) for t in types), f"{len(types)} types"


@register("T1280", "lambda_up is topological on finite algebras", carriers_up_to, default="powerset:2")
def _check_t1280(carrier, ctx):
    up = is_topological(lambda_up(carrier))
    raw = is_topological(lambda_ls(carrier))
    note = "raw lambda_ls " + ("topological" if raw.topological else f"not topological at {raw.witness.literal}")
    return up.topological, note


def _u_pairs(ctx):
    subsets = all_subsets(ctx.carrier)
    return [Pair(A, B) for A in subsets for B in subsets]


@register("T2301", "u is empty on empty, extensive, monotone and finitely additive", _u_pairs,
          default="powerset:2", max_n=2)
def _check_t2301(pair, ctx):
    A, B = pair.first, pair.second
    ok = True
    for lam in (lambda_up(ctx.carrier), lambda_down(ctx.carrier)):
        u = lambda S: u_operator(S, lam, exhaustive=True)  # noqa: E731
        ok &= u(frozenset()) == frozenset()
        ok &= A <= u(A)
        ok &= u(A) <= u(A | B)
        ok &= u(A | B) == u(A) | u(B)
        ok &= u(A) == u_operator(A, lam)
    return ok, "laws hold"


@register("T2403", "F is closed iff u(F) = F", lambda ctx: all_subsets(ctx.carrier), default="powerset:3")
def _check_t2403(F, ctx):
    carrier = ctx.carrier
    u = u_operator(F, lambda_up(carrier), exhaustive=len(F) <= 8)
    return topology(carrier.n).is_closed(F) == (u == F), f"u(F) = F: {u == F}"


@register("T4003s", "the (L2)-closure of lambda_ls is x -> (limsup x) up", _ep_inputs, default="powerset:2")
def _check_t4003s(x, ctx):
    carrier = ctx.carrier
    bar = _ls_bar(carrier.n)
    return bar(x) == carrier.up(brute_limsup(x, carrier)), f"limsup {brute_limsup(x, carrier).literal}"


@lru_cache(maxsize=None)
def _ls_bar(n: int):
    return l2_closure(lambda_ls(powerset(n)))


STABLE_READING = "stable read as: every subsequence keeps the limsup, i.e. |C| = 1"


@register("T1233a", "closure of a limsup-stable orbit, and its dual", _ep_inputs, default="powerset:2")
def _check_t1233a(x, ctx):
    carrier = ctx.carrier
    orbit = frozenset(values_of(x))
    try:
        up = stable_orbit_closure(x)
    except UnstableSequence:
        return len(inf_value_set(x)) > 1, f"not limsup-stable; rejected ({STABLE_READING})"
    cl, _ = iterate_u_to_fixpoint(orbit, lambda_up(carrier))
    down = dualize(stable_orbit_closure(dualize(x)))
    dual_cl, _ = iterate_u_to_fixpoint(orbit, lambda_down(carrier))
    expected_down = frozenset().union(*(carrier.down(v) for v in orbit)) | carrier.down(brute_liminf(x, carrier))
    ok = frozenset(up.elements()) == cl and frozenset(down.elements()) == dual_cl == expected_down
    return ok, f"|closure| = {len(cl)} ({STABLE_READING})"


def _t1287_inputs(ctx):
    if ctx.finite:
        elems = [e for e in ctx.carrier.elements if e != ctx.carrier.zero]
        out = []
        for r in (1, 2):
            for combo in itertools.combinations(elems, r):
                name = BName.finite({i: q for i, q in enumerate(combo)})
                labels = list(range(r))
                out.append(Pair(name, LabelCycle((), tuple(labels))))
                out.append(Pair(name, LabelCycle((labels[-1],), (labels[0],))))
        return out
    rng = ctx.rng()
    seqs = library_sequences(ctx)
    out = []
    for _ in range(ctx.config.samples):
        x = rng.choice(seqs)
        f = random_index_map(rng, affine_only=not isinstance(x, EventuallyPeriodic))
        if isinstance(x, BlockDiag):
            f = IndexMap.affine(1, f.d)
        out.append(Pair(BName.of_sequence(x), f))
    return out


@register("T1287", "Boolean value of infinite intersection is the limsup along the enumeration", _t1287_inputs,
          kinds=("finite", "upfrag"), sampled_on=("upfrag",))
def _check_t1287(pair, ctx):
    name, enum = pair.first, pair.second
    value = bv_infinite_intersection(name, enum)
    if ctx.finite:
        q = dict(name.table)
        seq = EventuallyPeriodic(tuple(q[k] for k in enum.prefix), tuple(q[k] for k in enum.cycle))
        oracle = brute_limsup(seq, ctx.carrier)
        upper = big_join(q.values(), ctx.carrier)
        ok = value == oracle and brute_liminf(seq, ctx.carrier) <= value <= upper
        return ok, f"value {value.literal}"
    try:
        sub = subsequence(name.seq, enum)
    except NotRepresentable:
        return False, "enumeration not representable"
    oracle = window_limsup(lambda n: name.seq.term(enum(n)), _period_of(sub))
    return value.window(WINDOW) == oracle and liminf(sub) <= value, f"value {value.literal}"


def _t4101_inputs(ctx):
    return [A for A in subsets_up_to(ctx.carrier, ctx.config.max_subset) if A]


@register("T4101", "closure of a finite set is its upset", _t4101_inputs, default="powerset:3")
def _check_t4101(A, ctx):
    carrier = ctx.carrier
    cl, _ = iterate_u_to_fixpoint(A, lambda_up(carrier))
    ok = cl == closure_by_census(A, carrier.n) == reconstruct(A, carrier)
    if len(A) == 1:
        (b,) = A
        ok &= cl == carrier.up(b)
    return ok, f"|cl| = {len(cl)}"


def _t4103_inputs(ctx):
    extra = [
        EventuallyPeriodic((UPSet("", "100"),), (UPSet("", "110"),)),
        EventuallyPeriodic((UPSet.finite([2]), UPSet.finite([1, 2])), (UPFRAG.one,)),
        EventuallyPeriodic((UPFRAG.one, UPSet("", "10")), (UPSet.finite([0]),)),
    ]
    return library_sequences(ctx) + extra


def _special_kind(x) -> Optional[str]:
    if is_decreasing(x):
        return "decreasing"
    if is_increasing(x):
        return "increasing"
    if is_injective_antichain(x):
        return "antichain"
    return None


@register("T4103", "closures of decreasing chains, increasing chains and antichains", _t4103_inputs,
          default="upfrag", kinds=("upfrag",))
def _check_t4103(x, ctx):
    kind = _special_kind(x)
    if kind is None:
        try:
            closure_special("decreasing", x)
        except ValueError:
            return True, "no clause applies; rejected"
        return False, "a clause accepted a sequence of no special kind"
    got = closure_special(kind, x)
    if kind == "decreasing":
        meet = window_limsup(x.term, _period_of(x))
        trace = dec_iterate(x if not isinstance(x, EventuallyPeriodic) else frozenset(values_of(x)))
        ok = got.sorted_generators()[0].window(WINDOW) == meet and trace.closure == got
    elif kind == "increasing":
        ok = got == up_closure(values_of(x), UPFRAG) == UpsetFD.principal(x.term(0))
    else:
        ok = got == UpsetFD.whole(UPFRAG) and zero_limit_witness(x).zero_in_lim
    return ok, f"{kind}: {got.literal}"


def _t4111_inputs(ctx):
    return subsets_up_to(ctx.carrier, ctx.config.max_subset)


def dec_against_closure(A, carrier) -> tuple:
    """Stage-by-stage comparison of Dec iteration with iterated ``u``."""
    lam = lambda_up(carrier)
    trace = dec_iterate(A, carrier) if A else None
    cl_stages = [A]
    while True:
        nxt = u_operator(cl_stages[-1], lam)
        if nxt == cl_stages[-1]:
            break
        cl_stages.append(nxt)
    if trace is None:
        return cl_stages == [frozenset()], frozenset()
    stages = list(trace.stages)
    depth = max(len(stages), len(cl_stages))
    stages += [stages[-1]] * (depth - len(stages))
    cl_stages += [cl_stages[-1]] * (depth - len(cl_stages))
    census = closure_by_census(A, carrier.n)
    ok = stages[1:] == cl_stages[1:] and trace.closure == cl_stages[-1] == census
    return ok, trace.closure


@register("T4111", "Dec iteration equals the closure iteration stage by stage", _t4111_inputs,
          default="powerset:3", max_n=4)
def _check_t4111(A, ctx):
    ok, cl = dec_against_closure(A, ctx.carrier)
    return ok, f"|cl| = {len(cl)}"


def _t4109_inputs(ctx):
    if ctx.finite:
        return [A for A in subsets_up_to(ctx.carrier, ctx.config.max_subset) if A]
    return _decreasing_families(ctx) + [UpsetFD.cofinite()]


@register("T4109", "u(A) = Dec(A up)", _t4109_inputs, default="powerset:3", kinds=("finite", "upfrag"))
def _check_t4109(A, ctx):
    if ctx.finite:
        u = u_operator(A, lambda_up(ctx.carrier), exhaustive=True)
        return u == dec_operator(reconstruct(A, ctx.carrier), ctx.carrier), f"|u(A)| = {len(u)}"
    trace = dec_iterate(A)
    u = up_u_operator(A)
    ok = trace.stages[1] == u
    if isinstance(A, TailAbove) or A == UpsetFD.cofinite():
        ok &= UPFRAG.zero in u
    return ok, f"u(A) = {u.literal}"


@register("CENSUS", "closed-set census by subset scan and by antichain search", carriers_up_to,
          default="powerset:4", max_n=5)
def _check_census(carrier, ctx):
    n = carrier.n
    by_order = {}
    for ordering in ("natural", "graded-reverse"):
        found = enumerate_closed_sets(n, "antichain", ordering)
        by_order[ordering] = frozenset(found.antichains)
        if len(by_order[ordering]) != found.count:
            return False, f"duplicate antichains in {ordering} order"
    ok = by_order["natural"] == by_order["graded-reverse"]
    count = len(by_order["natural"])
    if n <= MAX_SCAN_N:
        scan = enumerate_closed_sets(n, "scan")
        ok &= frozenset(scan.antichains) == by_order["natural"] and scan.count == count
    return ok, f"{count} closed sets"


# ---------------------------------------------------------------- running


def suite_tags() -> list:
    return sorted(REGISTRY)


def _resolve(tag: str) -> Suite:
    try:
        return REGISTRY[tag]
    except KeyError:
        raise UnknownSuite(f"unknown suite {tag!r}; known: {', '.join(suite_tags())}") from None


def _context(suite: Suite, config: RunConfig, carrier=None) -> Context:
    config.validate()
    if carrier is None:
        selector = config.carrier or suite.default
        carrier = parse_carrier(selector)
        if carrier is None:
            raise LimitViolation(f"bad carrier selector {selector!r}")
    kind = "finite" if isinstance(carrier, PowerSet) else "upfrag"
    if kind not in suite.kinds:
        raise LimitViolation(f"suite {suite.tag} does not run on {carrier}")
    if kind == "finite" and carrier.n > suite.max_n:
        raise LimitViolation(f"suite {suite.tag} is limited to powerset:n with n <= {suite.max_n}")
    return Context(carrier, config)


def _run_case(suite: Suite, obj, ctx: Context) -> CaseResult:
    bare = isinstance(obj, (PowerSet, UPFragment))
    case = render(obj, None if bare else ctx.carrier)
    start = time.perf_counter()
    try:
        ok, note = suite.check(obj, ctx)
        status = "pass" if ok else "fail"
    except (ValueError, KeyError, ArithmeticError, AssertionError) as exc:
        status, note = "error", f"{type(exc).__name__}: {exc}"
    millis = round((time.perf_counter() - start) * 1000, 3) if ctx.config.timing else None
    return CaseResult(case, status, None if status == "pass" else case, millis, note)


def run_suite(tag: str, config: Optional[RunConfig] = None) -> SuiteReport:
    """Run every case of a suite; cases are reported in generation order."""
    config = config or RunConfig()
    suite = _resolve(tag)
    ctx = _context(suite, config)
    sampled = ("finite" if ctx.finite else "upfrag") in suite.sampled_on
    report = SuiteReport(tag, suite.title, str(ctx.carrier), sampled, config.seed if sampled else None)
    for obj in suite.inputs(ctx):
        report.cases.append(_run_case(suite, obj, ctx))
    return report


def recheck(tag: str, text: str, config: Optional[RunConfig] = None) -> CaseResult:
    """Re-run one case from its literal, e.g. a reported witness."""
    config = config or RunConfig()
    suite = _resolve(tag)
    obj = parse_input(text)
    carrier = obj if isinstance(obj, (PowerSet, UPFragment)) else None
    if carrier is None:
        head, sep, _ = text.partition(";")
        carrier = parse_carrier(head) if sep else None
    if carrier is None:
        carrier = parse_carrier(config.carrier or suite.default)
    return _run_case(suite, obj, _context(suite, config, carrier))


# ---------------------------------------------------------------- rendering


def _summary(report: SuiteReport) -> str:
    n = len(report.cases)
    if n == 0:
        return "0 cases: nothing was checked"
    how = f"sampled, seed {report.seed}" if report.sampled else f"exhaustive, {n} swept"
    return f"{n} cases ({how}), {len(report.failures)} failed"


def emit_report(report: SuiteReport, mode: str = "table") -> str:
    if mode == "machine":
        payload = {
            "suite": report.suite,
            "carrier": report.carrier,
            "seed": report.seed,
            "swept": len(report.cases),
            "status": "pass" if report.passed else "fail",
            "summary": _summary(report),
            "cases": [
                {
                    "suite": report.suite,
                    "case": c.case,
                    "status": c.status,
                    "witness": c.witness,
                    "millis": c.millis,
                    "note": c.note,
                }
                for c in report.cases
            ],
        }
        return json.dumps(payload, indent=2, ensure_ascii=False)
    if mode != "table":
        raise ValueError(f"unknown output mode {mode!r}")
    head = f"{report.suite} on {report.carrier}: {report.title}"
    rows = [(c.status.upper(), c.case, c.note + (f" [{c.millis} ms]" if c.millis is not None else "")) for c in report.cases]
    width = [max([len(r[i]) for r in rows] + [len(h)]) for i, h in enumerate(("STATUS", "CASE"))]
    lines = [head, f"{'STATUS':<{width[0]}}  {'CASE':<{width[1]}}  NOTE"]
    lines += [f"{s:<{width[0]}}  {c:<{width[1]}}  {n}".rstrip() for s, c, n in rows]
    verdict = "PASS" if report.passed else "FAIL"
    lines.append(f"{verdict}: {_summary(report)}")
    return "\n".join(lines)
