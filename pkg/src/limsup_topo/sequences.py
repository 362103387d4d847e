"""Finitely presented infinite sequences with exact limsup and liminf.

A sequence is one of five closed descriptor kinds:

* ``EventuallyPeriodic(prefix, cycle)`` over any carrier,
* ``TailAbove(g)``: ``x_n = [g(n), oo)``,
* ``UnionTail(S, g)``: ``x_n = S | [g(n), oo)``,
* ``SingletonDiag(g)``: ``x_n = {g(n)}``,
* ``BlockDiag(g)``: ``x_n = [g(n), g(n+1))``,

the last four over the ultimately periodic fragment only, with ``g`` a
strictly increasing affine map. Every kind has a closed form for
``limsup x = meet_k join_{n>=k} x_n`` and its dual:

* eventually periodic: the tail joins ``join_{n>=k} x_n`` are all equal to
  the join of the cycle once ``k`` passes the prefix, so limsup is that join;
  dually liminf is the meet of the cycle. Equivalently both depend only on the
  set C of values that occur infinitely often.
* ``TailAbove``/``UnionTail`` are decreasing, so every tail join is ``x_k`` and
  limsup = liminf = ``meet_n x_n`` which is ``{}`` resp. ``S``.
* ``SingletonDiag``/``BlockDiag`` are pairwise disjoint, so a point lies in at
  most one term; limsup and liminf are both empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .carriers import UPFRAG, UPSet, big_join, big_meet, element_key


class NotRepresentable(ValueError):
    """Composition leaves the class of representable sequences."""


class UnsupportedSequence(ValueError):
    pass


@dataclass(frozen=True)
class AffineMap:
    """``n -> c*n + d`` with ``c >= 1`` and ``d >= 0``."""

    c: int
    d: int

    def __post_init__(self):
        if self.c < 1 or self.d < 0:
            raise ValueError(f"affine map {self.literal} is not strictly increasing on omega")

    def __call__(self, n: int) -> int:
        return self.c * n + self.d

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """``self o inner``."""
        return AffineMap(self.c * inner.c, self.c * inner.d + self.d)

    @property
    def literal(self) -> str:
        return f"{self.c}*n+{self.d}"


@dataclass(frozen=True)
class IndexMap:
    """Strictly increasing ``f : omega -> omega`` given by a finite table.

    ``f(n) = head[n]`` for ``n < len(head)`` and ``c*n + d`` afterwards.
    """

    head: tuple = ()
    c: int = 1
    d: int = 0

    def __post_init__(self):
        head = tuple(self.head)
        if self.c < 1:
            raise ValueError("index map must have slope >= 1")
        # entries agreeing with the affine rule are redundant
        while head and head[-1] == self.c * (len(head) - 1) + self.d:
            head = head[:-1]
        object.__setattr__(self, "head", head)
        values = list(head) + [self.c * len(head) + self.d]
        if values[0] < 0 or any(a >= b for a, b in zip(values, values[1:])):
            raise ValueError(f"index map {self} is not strictly increasing")

    @classmethod
    def affine(cls, c: int, d: int = 0) -> "IndexMap":
        return cls((), c, d)

    def __call__(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        return self.c * n + self.d

    @property
    def is_affine(self) -> bool:
        return not self.head

    def as_affine(self) -> AffineMap:
        if self.head:
            raise NotRepresentable(f"index map {self} is not affine")
        return AffineMap(self.c, self.d)

    def compose(self, inner: "IndexMap") -> "IndexMap":
        """``self o inner``, again eventually affine."""
        m = len(inner.head)
        while inner(m) < len(self.head):
            m += 1
        return IndexMap(
            tuple(self(inner(n)) for n in range(m)),
            self.c * inner.c,
            self.c * inner.d + self.d,
        )

    def __str__(self):
        if self.head:
            return f"[{' '.join(map(str, self.head))}] then {self.c}*n+{self.d}"
        return f"{self.c}*n+{self.d}"


IDENTITY = IndexMap()


def _min_cycle(cycle: tuple) -> tuple:
    p = len(cycle)
    for d in range(1, p + 1):
        if p % d == 0 and cycle[:d] * (p // d) == cycle:
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class EventuallyPeriodic:
    """``prefix`` followed by ``cycle`` repeated forever.

    Stored canonically (shortest cycle, then shortest prefix) so that equal
    sequences compare equal.
    """

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        prefix, cycle = tuple(self.prefix), tuple(self.cycle)
        if not cycle:
            raise ValueError("eventually periodic sequence needs a nonempty cycle")
        carriers = {v.carrier for v in prefix + cycle}
        if len(carriers) != 1 or len({type(v) for v in prefix + cycle}) != 1:
            raise ValueError("sequence values must come from one carrier")
        cycle = _min_cycle(cycle)
        while prefix and prefix[-1] == cycle[-1]:
            prefix, cycle = prefix[:-1], cycle[-1:] + cycle[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def constant(cls, a) -> "EventuallyPeriodic":
        return cls((), (a,))

    @property
    def carrier(self):
        return self.cycle[0].carrier

    def term(self, n: int):
        if n < len(self.prefix):
            return self.prefix[n]
        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]

    @property
    def is_constant(self) -> bool:
        return not self.prefix and len(self.cycle) == 1

    @property
    def literal(self) -> str:
        pre = " ".join(v.literal for v in self.prefix)
        cyc = " ".join(v.literal for v in self.cycle)
        return f"ep:[{pre} | {cyc}]".replace("[ |", "[|")


@dataclass(frozen=True)
class TailAbove:
    g: AffineMap
    carrier = UPFRAG

    def term(self, n: int) -> UPSet:
        return UPSet.tail(self.g(n))

    @property
    def literal(self) -> str:
        return f"tail:{self.g.literal}"


@dataclass(frozen=True)
class UnionTail:
    base: UPSet
    g: AffineMap
    carrier = UPFRAG

    def __post_init__(self):
        # a cofinite base makes the sequence eventually constant
        if self.base.is_cofinite():
            raise ValueError("uniontail base must not be cofinite; use an ep: descriptor")

    def term(self, n: int) -> UPSet:
        return self.base | UPSet.tail(self.g(n))

    @property
    def literal(self) -> str:
        return f"uniontail:{self.base.literal},{self.g.literal}"


@dataclass(frozen=True)
class SingletonDiag:
    g: AffineMap
    carrier = UPFRAG

    def term(self, n: int) -> UPSet:
        return UPSet.finite([self.g(n)])

    @property
    def literal(self) -> str:
        return f"diag:{self.g.literal}"


@dataclass(frozen=True)
class BlockDiag:
    g: AffineMap
    carrier = UPFRAG

    def term(self, n: int) -> UPSet:
        return UPSet.interval(self.g(n), self.g(n + 1))

    @property
    def literal(self) -> str:
        return f"block:{self.g.literal}"


SeqDescriptor = Union[EventuallyPeriodic, TailAbove, UnionTail, SingletonDiag, BlockDiag]
GENERATOR_KINDS = (TailAbove, UnionTail, SingletonDiag, BlockDiag)


def _check(x):
    if not isinstance(x, (EventuallyPeriodic,) + GENERATOR_KINDS):
        raise UnsupportedSequence(f"malformed sequence descriptor {x!r}")


def limsup(x: SeqDescriptor):
    _check(x)
    if isinstance(x, EventuallyPeriodic):
        return big_join(x.cycle, x.carrier)
    if isinstance(x, UnionTail):
        return x.base
    return UPFRAG.zero


def liminf(x: SeqDescriptor):
    _check(x)
    if isinstance(x, EventuallyPeriodic):
        return big_meet(x.cycle, x.carrier)
    if isinstance(x, UnionTail):
        return x.base
    return UPFRAG.zero


def inf_value_set(x: SeqDescriptor) -> frozenset:
    """Values taken infinitely often; empty for the injective families."""
    _check(x)
    if isinstance(x, EventuallyPeriodic):
        return frozenset(x.cycle)
    return frozenset()


def has_finite_range(x: SeqDescriptor) -> bool:
    _check(x)
    return isinstance(x, EventuallyPeriodic)


def subsequence(x: SeqDescriptor, f: IndexMap) -> SeqDescriptor:
    """The sequence ``x o f``."""
    _check(x)
    if isinstance(x, EventuallyPeriodic):
        start, p = len(x.prefix), len(x.cycle)
        m = len(f.head)
        while f(m) < start:
            m += 1
        # past m, x(f(n)) depends on (c*n + d - start) mod p only
        q = p // math.gcd(f.c, p)
        return EventuallyPeriodic(
            tuple(x.term(f(n)) for n in range(m)),
            tuple(x.term(f(n)) for n in range(m, m + q)),
        )
    g = f.as_affine() if f.is_affine else None
    if g is None:
        raise NotRepresentable(f"{x.literal} composed with non-affine {f}")
    if isinstance(x, TailAbove):
        return TailAbove(x.g.compose(g))
    if isinstance(x, UnionTail):
        return UnionTail(x.base, x.g.compose(g))
    if isinstance(x, SingletonDiag):
        return SingletonDiag(x.g.compose(g))
    if g.c != 1:
        raise NotRepresentable(f"{x.literal} composed with {f}: blocks are no longer contiguous")
    return BlockDiag(x.g.compose(g))


def is_limsup_stable(x: SeqDescriptor) -> bool:
    """Whether every subsequence of ``x`` has the same limsup as ``x``.

    A subsequence of an eventually periodic ``x`` may keep any nonempty part
    C' of the infinitely occurring values C, and has limsup ``join C'``. All of
    these equal ``join C`` iff every singleton does, i.e. iff C has exactly
    one value.
    """
    if not isinstance(x, EventuallyPeriodic):
        raise UnsupportedSequence("limsup-stability is decided for eventually periodic sequences only")
    top = limsup(x)
    return all(c == top for c in inf_value_set(x))


def is_decreasing(x: SeqDescriptor) -> bool:
    _check(x)
    if isinstance(x, (TailAbove, UnionTail)):
        return True
    if isinstance(x, EventuallyPeriodic):
        terms = list(x.prefix) + list(x.cycle) * 2
        return all(b <= a for a, b in zip(terms, terms[1:]))
    return False


def is_increasing(x: SeqDescriptor) -> bool:
    _check(x)
    if isinstance(x, EventuallyPeriodic):
        terms = list(x.prefix) + list(x.cycle) * 2
        return all(a <= b for a, b in zip(terms, terms[1:]))
    return False


def is_injective_antichain(x: SeqDescriptor) -> bool:
    """Pairwise distinct, pairwise incomparable terms."""
    _check(x)
    # nonempty pairwise disjoint terms
    return isinstance(x, (SingletonDiag, BlockDiag))


def values_of(x: EventuallyPeriodic) -> list:
    """Distinct values in order of first occurrence."""
    seen = []
    for v in x.prefix + x.cycle:
        if v not in seen:
            seen.append(v)
    return seen


def sorted_values(values) -> list:
    return sorted(values, key=element_key)


def representative(values, constant: bool, carrier) -> EventuallyPeriodic:
    """A sequence whose infinitely occurring value set is ``values``.

    With ``constant`` the result is the literal constant sequence; otherwise
    it is guaranteed not to be literally constant.
    """
    cyc = tuple(sorted_values(values))
    if constant:
        if len(cyc) != 1:
            raise ValueError("a constant sequence has exactly one value")
        return EventuallyPeriodic((), cyc)
    if len(cyc) > 1:
        return EventuallyPeriodic((), cyc)
    other = carrier.one if cyc[0] != carrier.one else carrier.zero
    return EventuallyPeriodic((other,), cyc)


def library() -> list:
    """Named sequences over the ultimately periodic fragment."""
    evens, odds = UPSet("", "10"), UPSet("", "01")
    thirds = UPSet("", "100")
    return [
        ("tails", TailAbove(AffineMap(1, 0))),
        ("tails-odd-start", TailAbove(AffineMap(2, 1))),
        ("evens-plus-tail", UnionTail(evens, AffineMap(1, 0))),
        ("finite-plus-tail", UnionTail(UPSet.finite([0, 3]), AffineMap(3, 2))),
        ("singletons", SingletonDiag(AffineMap(1, 0))),
        ("sparse-singletons", SingletonDiag(AffineMap(3, 1))),
        ("blocks", BlockDiag(AffineMap(2, 0))),
        ("unit-blocks", BlockDiag(AffineMap(1, 5))),
        ("evens-odds", EventuallyPeriodic((), (evens, odds))),
        ("constant-all", EventuallyPeriodic.constant(UPFRAG.one)),
        ("constant-empty", EventuallyPeriodic.constant(UPFRAG.zero)),
        ("finite-then-empty", EventuallyPeriodic((UPSet.finite([1, 2]),), (UPFRAG.zero,))),
        ("thirds-and-cofinite", EventuallyPeriodic((UPFRAG.zero,), (thirds, UPSet("0101", "1")))),
        ("finite-cycle", EventuallyPeriodic((), (UPSet.finite([4]), UPSet.finite([7]), UPFRAG.zero))),
    ]
