"""Convergences on finite carriers and the topologies they generate.

On a finite carrier every sequence has finite range, so it is described up to
everything that matters here by its *type*: the set C of values occurring
infinitely often, plus whether the sequence is literally constant (the only
thing (L1) can see beyond C). A convergence is a rule on types.

Subsequences of a sequence of type (C, const):

* literally constant: only itself;
* otherwise: (C', False) for every nonempty C' within C (a non-constant
  subsequence keeps one of the early off-values), and the constants
  (``{c}``, True) for ``c`` in C.

Supersequences of (C, False) are exactly the (D, False) with D containing C
(interleave the extra values); a constant ``<a>`` additionally has itself.
These two relations turn every quantifier over subsequences into a finite
sweep, which is how (L2), (L3), the closure tower and the maximal topology
are evaluated below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Optional

from .carriers import PowerSet, UPFRAG, UPFragment, element_key
from .sequences import EventuallyPeriodic, inf_value_set, representative

MAX_TOPOLOGY_N = 4
MAX_TOWER_N = 3


class CarrierTooLarge(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class UnsupportedConvergence(ValueError):
    pass


class OracleDisagreement(AssertionError):
    pass


def nonempty_subsets(values) -> list:
    """Nonempty subsets as frozensets, ordered by size then element order."""
    values = sorted(values, key=element_key)
    return [
        frozenset(combo)
        for k in range(1, len(values) + 1)
        for combo in itertools.combinations(values, k)
    ]


def sequence_types(carrier: PowerSet, within=None) -> list:
    """All types of sequences valued in ``within`` (default: the carrier)."""
    pool = carrier.elements if within is None else within
    types = []
    for c in nonempty_subsets(pool):
        if len(c) == 1:
            types.append((c, True))
            # a non-constant sequence with one recurring value needs a second value
            if len(pool) > 1:
                types.append((c, False))
        else:
            types.append((c, False))
    return types


def subtypes(t) -> list:
    values, constant = t
    if constant:
        return [t]
    return [(c, False) for c in nonempty_subsets(values)] + [
        (frozenset([v]), True) for v in sorted(values, key=element_key)
    ]


def supertypes(t, carrier: PowerSet) -> list:
    values, constant = t
    rest = [v for v in carrier.elements if v not in values]
    sup = [(values | frozenset(extra), False) for extra in _all_subsets(rest)]
    return [t] + sup if constant else sup


def _all_subsets(values) -> list:
    return [frozenset()] + nonempty_subsets(values)


def type_of(x: EventuallyPeriodic):
    if not isinstance(x, EventuallyPeriodic):
        raise UnsupportedConvergence("finite-carrier convergences take eventually periodic sequences")
    return inf_value_set(x), x.is_constant


class Convergence:
    """A limit rule ``(values, constant) -> set of limits`` on a finite carrier.

    ``l1``/``l2`` are declared properties; ``verify_l1``/``verify_l2`` check
    them exhaustively.
    """

    def __init__(self, name: str, carrier, rule: Optional[Callable], l1=False, l2=False):
        self.name = name
        self.carrier = carrier
        self.rule = rule
        self.l1 = l1
        self.l2 = l2
        self._cache = {}

    def limits(self, values, constant=False) -> frozenset:
        if isinstance(self.carrier, UPFragment):
            raise UnsupportedConvergence(f"{self.name} has no finite rule on the UP fragment")
        key = (frozenset(values), constant)
        if key not in self._cache:
            self._cache[key] = frozenset(self.rule(*key))
        return self._cache[key]

    def __call__(self, x: EventuallyPeriodic) -> frozenset:
        return self.limits(*type_of(x))

    def __repr__(self):
        return f"Convergence({self.name!r}, {self.carrier})"


def _join(values, carrier):
    return reduce(lambda a, b: a | b, values, carrier.zero)


def _meet(values, carrier):
    return reduce(lambda a, b: a & b, values, carrier.one)


def lambda_ls(carrier) -> Convergence:
    """``x -> {limsup x}``."""
    return Convergence("lambda_ls", carrier, lambda c, k: {_join(c, carrier)}, l1=True)


def lambda_up(carrier) -> Convergence:
    """``x -> (limsup x) up``, the (L2)-closure of ``lambda_ls``."""
    if isinstance(carrier, UPFragment):
        return Convergence("lambda_up", UPFRAG, None, l1=True, l2=True)
    return Convergence("lambda_up", carrier, lambda c, k: carrier.up(_join(c, carrier)), l1=True, l2=True)


def dual_convergence(lam: Convergence, name=None) -> Convergence:
    """Conjugate of ``lam`` by complementation."""

    def rule(values, constant):
        return {~a for a in lam.limits(frozenset(~v for v in values), constant)}

    return Convergence(name or f"dual({lam.name})", lam.carrier, rule, l1=lam.l1, l2=lam.l2)


def lambda_li(carrier) -> Convergence:
    """``x -> {liminf x}``, obtained by dualizing ``lambda_ls``."""
    return dual_convergence(lambda_ls(carrier), "lambda_li")


def lambda_down(carrier) -> Convergence:
    return dual_convergence(lambda_up(carrier), "lambda_down")


def _finite(lam: Convergence) -> PowerSet:
    if not isinstance(lam.carrier, PowerSet):
        raise UnsupportedConvergence(f"{lam.name} is not on a finite carrier")
    return lam.carrier


def verify_l1(lam: Convergence):
    """First constant ``<a>`` with ``a`` not a limit, or None."""
    carrier = _finite(lam)
    for a in carrier.elements:
        if a not in lam.limits(frozenset([a]), True):
            return EventuallyPeriodic.constant(a)
    return None


def verify_l2(lam: Convergence):
    """First pair ``(x, y)`` with ``y`` a subsequence of ``x`` and
    ``lam(x)`` not within ``lam(y)``, or None."""
    carrier = _finite(lam)
    for t in sequence_types(carrier):
        for s in subtypes(t):
            if not lam.limits(*t) <= lam.limits(*s):
                return representative(t[0], t[1], carrier), representative(s[0], s[1], carrier)
    return None


def _tower_carrier(lam: Convergence) -> PowerSet:
    carrier = _finite(lam)
    if carrier.n > MAX_TOWER_N:
        raise CarrierTooLarge(f"closure tower is swept on P(n) for n <= {MAX_TOWER_N}")
    return carrier


def l1_closure(lam: Convergence) -> Convergence:
    def rule(values, constant):
        out = set(lam.limits(values, constant))
        if constant:
            out |= values
        return out

    return Convergence(f"{lam.name}'", lam.carrier, rule, l1=True, l2=lam.l2)


def l2_closure(lam: Convergence) -> Convergence:
    """Union of ``lam(x)`` over all ``x`` having the argument as a subsequence."""
    carrier = _tower_carrier(lam)
    if verify_l1(lam) is not None:
        raise PreconditionError(f"{lam.name} does not satisfy (L1)")

    def rule(values, constant):
        out = set()
        for t in supertypes((values, constant), carrier):
            out |= lam.limits(*t)
        return out

    return Convergence(f"{lam.name}-bar", carrier, rule, l1=True, l2=True)


def l3_closure(lam: Convergence) -> Convergence:
    """``lam*(y) = meet over y o f of join over y o f o g of lam``.

    Types of ``y o f`` are the subtypes of ``y``, so both quantifiers become
    finite sweeps.
    """
    carrier = _tower_carrier(lam)
    if verify_l1(lam) is not None or verify_l2(lam) is not None:
        raise PreconditionError(f"{lam.name} must satisfy (L1) and (L2)")

    def rule(values, constant):
        result = None
        for s in subtypes((values, constant)):
            reach = set()
            for r in subtypes(s):
                reach |= lam.limits(*r)
            result = reach if result is None else result & reach
        return result

    return Convergence(f"{lam.name}*", carrier, rule, l1=True, l2=True)


def open_in_O_lambda(opens, lam: Convergence) -> bool:
    """Every sequence with a limit in ``opens`` eventually stays in it."""
    carrier = _finite(lam)
    o = frozenset(opens)
    for values, constant in sequence_types(carrier):
        if o & lam.limits(values, constant) and not values <= o:
            return False
    return True


@dataclass(frozen=True)
class FiniteTopology:
    carrier: PowerSet
    opens: tuple
    closeds: tuple = field(init=False)

    def __post_init__(self):
        everything = frozenset(self.carrier.elements)
        object.__setattr__(self, "closeds", tuple(everything - o for o in self.opens))

    def is_open(self, s) -> bool:
        return frozenset(s) in set(self.opens)

    def is_closed(self, s) -> bool:
        return frozenset(s) in set(self.closeds)

    def closure(self, s) -> frozenset:
        s = frozenset(s)
        out = frozenset(self.carrier.elements)
        for f in self.closeds:
            if s <= f:
                out &= f
        return out

    def check_axioms(self) -> None:
        opens = set(self.opens)
        everything = frozenset(self.carrier.elements)
        if frozenset() not in opens or everything not in opens:
            raise OracleDisagreement("topology misses the empty set or the whole carrier")
        for a in self.opens:
            for b in self.opens:
                if a & b not in opens or a | b not in opens:
                    raise OracleDisagreement("open family not closed under union/intersection")


def _set_key(s) -> tuple:
    return (len(s), sorted(element_key(a) for a in s))


def generate_topology(lam: Convergence, carrier=None) -> FiniteTopology:
    """The maximal topology ``O_lambda`` by full enumeration (n <= 4).

    ``O`` is open iff every type with a limit in ``O`` has all its values in
    ``O``; grouping by limit point, iff ``O`` contains ``R(a)`` for each of its
    points ``a``, where ``R(a)`` joins the value sets of all types that have
    ``a`` as a limit. That makes the sweep linear in the number of subsets.
    """
    carrier = carrier or _finite(lam)
    if carrier != lam.carrier:
        raise UnsupportedConvergence("convergence lives on another carrier")
    if carrier.n > MAX_TOPOLOGY_N:
        raise CarrierTooLarge(f"topology enumeration is limited to n <= {MAX_TOPOLOGY_N}")
    elems = carrier.elements
    need = [0] * len(elems)
    for values, constant in sequence_types(carrier):
        vmask = 0
        for v in values:
            vmask |= 1 << v.bits
        for a in lam.limits(values, constant):
            need[a.bits] |= vmask
    opens = []
    for mask in range(1 << len(elems)):
        m, ok = mask, True
        while m:
            low = m & -m
            a = low.bit_length() - 1
            if need[a] & ~mask:
                ok = False
                break
            m ^= low
        if ok:
            opens.append(frozenset(e for e in elems if mask >> e.bits & 1))
    topo = FiniteTopology(carrier, tuple(sorted(opens, key=_set_key)))
    topo.check_axioms()
    return topo


def u_operator(A, lam: Convergence, exhaustive: bool = False):
    """``u(A)``: the union of the limits of all sequences valued in ``A``.

    For a convergence satisfying (L2) every sequence in ``A`` has a constant
    subsequence ``<a>``, whose limits contain its own, so the union over the
    types ``({a}, True)``/``({a}, False)`` is already everything. Otherwise,
    or with ``exhaustive``, all types inside ``A`` are swept.
    """
    if isinstance(lam.carrier, UPFragment):
        if lam.name != "lambda_up":
            raise UnsupportedConvergence("only lambda_up is supported on the UP fragment")
        from .upsets import up_u_operator

        return up_u_operator(A)
    carrier = _finite(lam)
    A = frozenset(A)
    if not A:
        return frozenset()
    if lam.l2 and not exhaustive:
        types = [(frozenset([a]), True) for a in A]
        if len(A) > 1:
            types += [(frozenset([a]), False) for a in A]
    else:
        if len(A) > 16:
            raise CarrierTooLarge("exhaustive u sweep limited to |A| <= 16")
        types = sequence_types(carrier, A)
    out = set()
    for t in types:
        out |= lam.limits(*t)
    return frozenset(out)


def iterate_u_to_fixpoint(A, lam: Convergence):
    """Least fixpoint of ``u`` above ``A`` and the number of steps that changed it."""
    _finite(lam)
    current, steps = frozenset(A), 0
    while True:
        nxt = u_operator(current, lam)
        if nxt == current:
            return current, steps
        current, steps = nxt, steps + 1


def lim_by_closed_sets(values, topo: FiniteTopology) -> frozenset:
    """Intersection of the closed sets met by infinitely many terms."""
    out = frozenset(topo.carrier.elements)
    for f in topo.closeds:
        if f & values:
            out &= f
    return out


def lim_by_neighborhoods(values, topo: FiniteTopology) -> frozenset:
    """Points whose every open neighbourhood contains all but finitely many terms."""
    return frozenset(
        a for a in topo.carrier.elements if all(values <= o for o in topo.opens if a in o)
    )


def lim_in_topology(x, topo: FiniteTopology) -> frozenset:
    values = x if isinstance(x, frozenset) else type_of(x)[0]
    by_closed = lim_by_closed_sets(values, topo)
    if by_closed != lim_by_neighborhoods(values, topo):
        raise OracleDisagreement(f"closed-set and neighbourhood limits differ for {set(values)}")
    return by_closed


@dataclass
class TopologyVerdict:
    topological: bool
    witness: Optional[EventuallyPeriodic] = None
    expected: frozenset = frozenset()
    actual: frozenset = frozenset()


def is_topological(lam: Convergence, carrier=None) -> TopologyVerdict:
    """Compare ``lam`` with the a-posteriori limit of ``O_lambda`` on every type."""
    carrier = carrier or _finite(lam)
    topo = generate_topology(lam, carrier)
    for values, constant in sequence_types(carrier):
        got = lam.limits(values, constant)
        want = lim_in_topology(values, topo)
        if got != want:
            return TopologyVerdict(False, representative(values, constant, carrier), want, got)
    return TopologyVerdict(True)


def convergence_leq(small: Convergence, big: Convergence, carrier: PowerSet):
    """First type where ``small`` has a limit ``big`` lacks, or None."""
    for t in sequence_types(carrier):
        if not small.limits(*t) <= big.limits(*t):
            return t
    return None


def topological_limit(topo: FiniteTopology) -> Convergence:
    """``lim`` of a topology, as a convergence."""
    return Convergence(
        "lim", topo.carrier, lambda c, k: lim_in_topology(c, topo), l1=True, l2=True
    )
