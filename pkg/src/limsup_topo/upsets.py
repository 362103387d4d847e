"""Closed sets of the topology generated by ``lambda_up``.

Closed sets are upward closed and closed under limsup. They are stored by
their minimal elements (``UpsetFD``): on a ccc algebra, and in particular on
every finite one, a closed set is the union of the principal upsets of its
minimal elements.

On the ultimately periodic fragment two upset representations are decidable
and supported: finitely generated upsets and the family of all cofinite sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .carriers import FiniteElem, PowerSet, UPFRAG, UPFragment, UPSet, big_join, element_key
from .convergence import nonempty_subsets
from .sequences import (
    AffineMap,
    EventuallyPeriodic,
    TailAbove,
    UnionTail,
    has_finite_range,
    inf_value_set,
    is_decreasing,
    is_increasing,
    is_injective_antichain,
    is_limsup_stable,
    limsup,
    values_of,
)


class NotUpwardClosed(ValueError):
    pass


class UnsupportedUpset(ValueError):
    pass


class InfiniteRange(ValueError):
    """Only ``(limsup x) up`` within ``Lim x`` is known for this sequence."""

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound


class NoMatchingClause(ValueError):
    pass


class UnstableSequence(ValueError):
    pass


def minimal(values) -> frozenset:
    values = set(values)
    return frozenset(a for a in values if not any(b < a for b in values))


def maximal(values) -> frozenset:
    values = set(values)
    return frozenset(a for a in values if not any(a < b for b in values))


@dataclass(frozen=True)
class UpsetFD:
    """Upset (or, after dualizing, downset) given by an antichain.

    ``direction == "up"``: members are the ``b`` above some generator.
    ``direction == "down"``: members are the ``b`` below some generator.
    ``cofinite_family`` replaces the generators by the family of all cofinite
    subsets of omega (its dual is the family of all finite subsets).
    """

    carrier: object
    generators: frozenset = frozenset()
    cofinite_family: bool = False
    direction: str = "up"

    def __post_init__(self):
        gens = frozenset(self.generators)
        gens = minimal(gens) if self.direction == "up" else maximal(gens)
        object.__setattr__(self, "generators", gens)
        if self.cofinite_family and (gens or not isinstance(self.carrier, UPFragment)):
            raise UnsupportedUpset("the cofinite family lives on the UP fragment and has no generators")

    @classmethod
    def principal(cls, a) -> "UpsetFD":
        return cls(a.carrier, frozenset([a]))

    @classmethod
    def whole(cls, carrier) -> "UpsetFD":
        return cls(carrier, frozenset([carrier.zero]))

    @classmethod
    def cofinite(cls) -> "UpsetFD":
        return cls(UPFRAG, frozenset(), cofinite_family=True)

    def __contains__(self, b) -> bool:
        if self.cofinite_family:
            return b.is_cofinite() if self.direction == "up" else b.is_finite()
        if self.direction == "up":
            return any(q <= b for q in self.generators)
        return any(b <= q for q in self.generators)

    def elements(self) -> frozenset:
        if not isinstance(self.carrier, PowerSet):
            raise UnsupportedUpset("only finite-carrier upsets can be listed")
        return frozenset(b for b in self.carrier.elements if b in self)

    def sorted_generators(self) -> list:
        return sorted(self.generators, key=element_key)

    @property
    def literal(self) -> str:
        if self.cofinite_family:
            return "cofinite-family" if self.direction == "up" else "finite-family"
        body = ",".join(g.literal for g in self.sorted_generators())
        return f"{self.direction}{{{body}}}"

    def __str__(self):
        return self.literal


def _carrier_of(values, carrier=None):
    if carrier is not None:
        return carrier
    for v in values:
        return v.carrier
    raise ValueError("cannot infer the carrier of an empty set; pass carrier=")


def up_closure(A, carrier=None) -> UpsetFD:
    """``A up`` stored by the minimal members of ``A``."""
    A = list(A)
    return UpsetFD(_carrier_of(A, carrier), frozenset(A))


def is_upward_closed(F, carrier: PowerSet) -> bool:
    F = frozenset(F)
    return all(carrier.up(a) <= F for a in F)


def min_elements(F, carrier: Optional[PowerSet] = None) -> frozenset:
    F = frozenset(F)
    if F:
        carrier = _carrier_of(F, carrier)
        if not is_upward_closed(F, carrier):
            raise NotUpwardClosed("min_elements expects an upward closed set")
    return minimal(F)


def reconstruct(antichain, carrier: PowerSet) -> frozenset:
    """Union of the principal upsets of ``antichain``."""
    out = set()
    for b in antichain:
        out |= carrier.up(b)
    return frozenset(out)


@dataclass
class ClosedVerdict:
    closed: bool
    note: str = ""
    witness: object = None

    def __bool__(self):
        return self.closed


def is_closed(F, carrier=None) -> ClosedVerdict:
    """Closedness in the topology generated by ``lambda_up``.

    Finite carriers: a decreasing sequence is eventually constant, so its
    meet is one of its terms and upward closure alone decides. UP fragment,
    finitely generated by Q: a sequence in ``Q up`` lies above a Q-valued
    sequence, one value of which recurs, so closedness reduces to every
    nonempty C in Q having a generator below ``join C``; that always holds.
    The cofinite family is not closed: the tails ``[n, oo)`` have limsup
    ``{}``.
    """
    if isinstance(F, UpsetFD):
        if F.direction != "up":
            raise UnsupportedUpset("closedness is decided for upsets")
        if isinstance(F.carrier, PowerSet):
            return ClosedVerdict(True, "finite carrier: upsets are closed, decreasing chains stabilize")
        if F.cofinite_family:
            return ClosedVerdict(False, "tails of omega have limsup {} outside the family", TailAbove(AffineMap(1, 0)))
        gens = F.sorted_generators()
        if len(gens) > 12:
            raise UnsupportedUpset("generator sweep limited to 12 generators")
        for c in nonempty_subsets(gens):
            top = big_join(c, UPFRAG)
            if not any(q <= top for q in gens):
                return ClosedVerdict(False, "no generator below a join", EventuallyPeriodic((), tuple(sorted(c, key=element_key))))
        return ClosedVerdict(True, "every nonempty join of generators lies above a generator")
    F = frozenset(F)
    if not F:
        return ClosedVerdict(True, "empty set")
    carrier = _carrier_of(F, carrier)
    if not isinstance(carrier, PowerSet):
        raise UnsupportedUpset("explicit element sets are only decided on finite carriers")
    for a in sorted(F, key=element_key):
        for b in sorted(carrier.up(a) - F, key=element_key):
            # the constant sequence <a> has b among its lambda_up limits
            return ClosedVerdict(False, f"{b.literal} is above {a.literal} but missing", EventuallyPeriodic.constant(a))
    return ClosedVerdict(True, "finite carrier: upward closed, decreasing chains stabilize")


def chains(A) -> list:
    """All nonempty chains of ``A``, each listed top-down."""
    A = sorted(A, key=element_key)
    out = []

    def extend(chain, rest):
        out.append(tuple(chain))
        for i, b in enumerate(rest):
            if b < chain[-1]:
                extend(chain + [b], rest[:i] + rest[i + 1:])

    for i, a in enumerate(A):
        extend([a], A[:i] + A[i + 1:])
    return out


def dec_operator(A, carrier=None) -> frozenset:
    """Meets of decreasing sequences in a finite-carrier set.

    A decreasing sequence in a finite algebra runs through a chain and
    stops at its bottom, so its meet is the meet of that chain.
    """
    A = frozenset(A)
    if not A:
        return frozenset()
    carrier = _carrier_of(A, carrier)
    out = set()
    for chain in chains(A):
        m = carrier.one
        for b in chain:
            m = m & b
        out.add(m)
    return frozenset(out)


@dataclass(frozen=True)
class RangeSet:
    """The set of terms ``{x_n}`` of a decreasing generator sequence."""

    seq: object

    def __contains__(self, b) -> bool:
        x = self.seq
        if isinstance(x, TailAbove):
            bound = len(b.prefix) + 1
        elif isinstance(x, UnionTail):
            bound = len(b.prefix) + len(x.base.prefix) + x.base.period + 1
        else:
            raise UnsupportedUpset(f"range of {x.literal} is not supported")
        n = 0
        while x.g(n) <= bound:
            if x.term(n) == b:
                return True
            n += 1
        return False

    @property
    def literal(self) -> str:
        return f"range({self.seq.literal})"


def dec_membership(b, A) -> bool:
    """Whether ``b`` is the meet of a decreasing sequence in ``A``."""
    if isinstance(A, UpsetFD):
        if A.direction != "up":
            raise UnsupportedUpset("Dec is evaluated on upsets")
        if isinstance(A.carrier, PowerSet):
            return b in dec_operator(A.elements(), A.carrier)
        if A.cofinite_family:
            # b is the meet of the cofinite sets b | [n, oo)
            return True
        return any(q <= b for q in A.generators)
    A = frozenset(A)
    if A and isinstance(_carrier_of(A), PowerSet):
        return b in dec_operator(A)
    raise UnsupportedUpset("unsupported set for Dec membership")


@dataclass
class DecTrace:
    stages: list
    stable_at: int

    @property
    def closure(self):
        return self.stages[-1]


MAX_STAGES = 64


def dec_iterate(A, carrier=None) -> DecTrace:
    """Stages ``A, Dec(A up), Dec(Dec(A up)), ...`` until nothing changes.

    Finite carrier: ``A`` is an element set; stages are element sets.
    UP fragment: ``A`` is a finite set of UPSets, an ``UpsetFD`` or a
    decreasing generator sequence (``TailAbove``/``UnionTail``), and stages
    are upsets after stage 0.
    """
    if isinstance(A, (TailAbove, UnionTail)):
        # A up = sets containing the base and cofinitely many points;
        # Dec of that adds every superset of the base
        stage1 = UpsetFD.principal(limsup(A))
        return DecTrace([RangeSet(A), stage1], 1)
    if isinstance(A, UpsetFD):
        if isinstance(A.carrier, PowerSet):
            return dec_iterate(A.elements(), A.carrier)
        if A.cofinite_family:
            return DecTrace([A, UpsetFD.whole(UPFRAG)], 1)
        return DecTrace([A], 0)
    A = frozenset(A)
    carrier = _carrier_of(A, carrier) if A else carrier
    if isinstance(carrier, UPFragment):
        up = up_closure(A, UPFRAG)
        return DecTrace([A, up], 1)
    if carrier is None:
        return DecTrace([A], 0)
    stages = [A]
    current = reconstruct(A, carrier)
    while True:
        nxt = dec_operator(current, carrier)
        if nxt == stages[-1]:
            return DecTrace(stages, len(stages) - 1)
        stages.append(nxt)
        current = nxt
        if len(stages) > MAX_STAGES:
            raise RuntimeError("Dec iteration did not stabilize")


def up_u_operator(A) -> UpsetFD:
    """``u(A)`` for ``lambda_up`` on the UP fragment."""
    if isinstance(A, (TailAbove, UnionTail)):
        return UpsetFD.principal(limsup(A))
    if isinstance(A, UpsetFD):
        if A.cofinite_family:
            return UpsetFD.whole(UPFRAG)
        return A
    # sequences in a finite A have finite range, so limsup = join C >= each c
    return up_closure(A, UPFRAG)


def closure_special(kind: str, data) -> UpsetFD:
    """Closed forms for the closure of special families.

    ``finite``: ``A up``. ``decreasing``: ``(meet a_n) up``, the meet being
    the limsup. ``increasing``: ``a_0 up``. ``antichain`` (injective,
    infinite) and ``dense`` (infinite algebra): the whole algebra.
    """
    if kind == "finite":
        values = list(data)
        return up_closure(values)
    if kind == "decreasing" and is_decreasing(data):
        return UpsetFD.principal(limsup(data))
    if kind == "increasing" and is_increasing(data):
        return UpsetFD.principal(data.term(0))
    if kind == "antichain" and is_injective_antichain(data):
        return UpsetFD.whole(data.carrier)
    if kind == "dense" and isinstance(data, UPFragment):
        return UpsetFD.whole(UPFRAG)
    raise NoMatchingClause(f"no closure clause for {kind!r} with {getattr(data, 'literal', data)}")


def lim_lower_bound(x) -> UpsetFD:
    return UpsetFD.principal(limsup(x))


def lim_closed_form(x) -> UpsetFD:
    """``Lim x`` in the topology generated by ``lambda_up``.

    Finite range: ``(join C) up`` with C the infinitely occurring values.
    Infinite range with limsup 0: the whole algebra, since ``0 up`` is
    already inside ``Lim x``.
    """
    if has_finite_range(x):
        return UpsetFD.principal(big_join(inf_value_set(x), x.carrier))
    s = limsup(x)
    if s == x.carrier.zero:
        return UpsetFD.whole(x.carrier)
    raise InfiniteRange(f"{x.literal} has infinite range; only (limsup x) up is known", lim_lower_bound(x))


@dataclass
class ZeroLimitVerdict:
    zero_in_lim: bool
    point: Optional[int] = None
    start: int = 0
    period: int = 1
    residues: tuple = ()
    verified: bool = True

    def indices(self, count: int) -> list:
        """First ``count`` indices ``n`` with ``point`` in ``x_n``."""
        out, k = [], 0
        while len(out) < count:
            out.extend(self.start + k * self.period + r for r in self.residues)
            k += 1
        return sorted(out)[:count]


def zero_limit_witness(x) -> ZeroLimitVerdict:
    """Decide ``{} in Lim x`` on the UP fragment.

    ``{}`` is a limit iff ``limsup x = {}``. Otherwise a point ``c0`` of the
    limsup is returned with the residue classes of indices ``n`` at which
    ``c0 in x_n``; ``omega minus (c0 up)`` is then an open set around ``{}``
    that the sequence leaves infinitely often.
    """
    if x.carrier != UPFRAG:
        raise UnsupportedUpset("zero-limit lemma is stated for the UP fragment")
    s = limsup(x)
    c0 = s.min_point()
    if c0 is None:
        return ZeroLimitVerdict(True)
    if isinstance(x, EventuallyPeriodic):
        start, p = len(x.prefix), len(x.cycle)
        residues = tuple(j for j in range(p) if c0 in x.cycle[j])
        # x_{start + j + k p} is literally cycle[j]
        verified = bool(residues) and all(c0 in x.term(start + j) for j in residues)
        return ZeroLimitVerdict(False, c0, start, p, residues, verified)
    if isinstance(x, UnionTail):
        return ZeroLimitVerdict(False, c0, 0, 1, (0,), c0 in x.base)
    raise UnsupportedUpset(f"unexpected nonzero limsup for {x.literal}")


def preimage_meet(a, F: UpsetFD):
    """``{x : x & a in F}`` and whether it is closed."""
    return _preimage(a, F, "meet")


def preimage_join(a, F: UpsetFD):
    """``{x : x | a in F}`` and whether it is closed."""
    return _preimage(a, F, "join")


def _preimage(a, F: UpsetFD, op: str):
    if isinstance(F.carrier, PowerSet):
        carrier = F.carrier
        members = frozenset(
            x for x in carrier.elements if ((x & a) if op == "meet" else (x | a)) in F
        )
        verdict = is_closed(members, carrier)
        return UpsetFD(carrier, minimal(members)), verdict.closed
    if F.cofinite_family:
        if op == "meet":
            # x & a cofinite iff a and x are
            if a.is_cofinite():
                return UpsetFD.cofinite(), False
            return UpsetFD(UPFRAG), True
        if a.is_cofinite():
            return UpsetFD.whole(UPFRAG), True
        if a.is_finite():
            return UpsetFD.cofinite(), False
        raise UnsupportedUpset("join preimage of the cofinite family is not representable here")
    if op == "meet":
        # x & a >= q iff q <= a and x >= q
        gens = [q for q in F.generators if q <= a]
    else:
        # x | a >= q iff x >= q & ~a
        gens = [q & ~a for q in F.generators]
    out = UpsetFD(UPFRAG, frozenset(gens))
    return out, is_closed(out).closed


def t4121_check(x, a) -> bool:
    """``for all y < x exists z < y: limsup z <= a`` for eventually periodic ``x``.

    A subsequence ``y`` keeps a nonempty part C' of the recurring values and
    the constant subsequences ``<c>``, ``c`` in C', are its subsequences with
    limsup ``c``; other ``z`` have larger limsup. So the condition is: every
    nonempty C' contains some ``c <= a``.
    """
    if not isinstance(x, EventuallyPeriodic):
        raise UnsupportedUpset("the limit characterization is checked on eventually periodic sequences")
    values = sorted(inf_value_set(x), key=element_key)
    return all(any(c <= a for c in part) for part in nonempty_subsets(values))


def stable_orbit_closure(x) -> UpsetFD:
    """``(limsup x) up`` joined with every ``x_n up``, for limsup-stable ``x``."""
    if not is_limsup_stable(x):
        raise UnstableSequence(f"{x.literal} is not limsup-stable")
    return up_closure(values_of(x) + [limsup(x)], x.carrier)


def dualize(obj):
    """Image under complementation; an involution."""
    from .convergence import Convergence, dual_convergence

    if isinstance(obj, (FiniteElem, UPSet)):
        return ~obj
    if isinstance(obj, UpsetFD):
        return UpsetFD(
            obj.carrier,
            frozenset(~g for g in obj.generators),
            obj.cofinite_family,
            "down" if obj.direction == "up" else "up",
        )
    if isinstance(obj, EventuallyPeriodic):
        return EventuallyPeriodic(tuple(~v for v in obj.prefix), tuple(~v for v in obj.cycle))
    if isinstance(obj, Convergence):
        return dual_convergence(obj)
    if isinstance(obj, (frozenset, set)):
        return frozenset(~v for v in obj)
    raise UnsupportedUpset(f"cannot dualize {obj!r}")
