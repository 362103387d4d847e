"""Computable carrier algebras.

Two carriers are supported:

* ``PowerSet(n)``: the finite power-set algebra on ``n`` atoms. Elements are
  ``FiniteElem`` values wrapping an ``n``-bit integer; atom ``i`` is bit ``i``
  and is written as character ``i`` of the bit-string literal, so ``"10"`` is
  the first atom of P(2).
* ``UPFRAG``: the ultimately periodic subsets of omega, a Boolean subalgebra of
  P(omega). Elements are ``UPSet`` values ``prefix;cycle``.

Both element types support ``&`` (meet), ``|`` (join), ``~`` (complement) and
``<=`` (lattice order), so generic code can be written against either.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Union

MAX_ALIGNED_PERIOD = 1 << 16


class CarrierMismatch(ValueError):
    pass


class PeriodTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class PowerSet:
    """The finite algebra P(n) of subsets of ``n`` atoms."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("the trivial algebra (n = 0) is not a carrier")

    @property
    def size(self) -> int:
        return 1 << self.n

    @cached_property
    def elements(self) -> tuple:
        # indexed by bit vector, so elements[b].bits == b
        return tuple(FiniteElem(self.n, b) for b in range(self.size))

    @property
    def zero(self) -> "FiniteElem":
        return self.elements[0]

    @property
    def one(self) -> "FiniteElem":
        return self.elements[-1]

    def atom(self, i: int) -> "FiniteElem":
        return self.elements[1 << i]

    def elem(self, value) -> "FiniteElem":
        """Element from a bit vector int or a bit-string literal."""
        if isinstance(value, FiniteElem):
            if value.n != self.n:
                raise CarrierMismatch(f"{value} is not in {self}")
            return value
        if isinstance(value, str):
            if len(value) != self.n or set(value) - {"0", "1"}:
                raise ValueError(f"{value!r} is not a {self.n}-bit literal")
            return self.elements[sum(1 << i for i, ch in enumerate(value) if ch == "1")]
        if not 0 <= value < self.size:
            raise ValueError(f"bit vector {value} out of range for {self}")
        return self.elements[value]

    def up(self, a: "FiniteElem") -> frozenset:
        return frozenset(b for b in self.elements if a.bits & ~b.bits == 0)

    def down(self, a: "FiniteElem") -> frozenset:
        return frozenset(b for b in self.elements if b.bits & ~a.bits == 0)

    def __str__(self):
        return f"powerset:{self.n}"


@lru_cache(maxsize=None)
def powerset(n: int) -> PowerSet:
    """Shared ``PowerSet`` instance, so its element table is built once."""
    return PowerSet(n)


@dataclass(frozen=True)
class UPFragment:
    """The algebra of ultimately periodic subsets of omega."""

    @property
    def zero(self) -> "UPSet":
        return UPSet("", "0")

    @property
    def one(self) -> "UPSet":
        return UPSet("", "1")

    def __str__(self):
        return "upfrag"


UPFRAG = UPFragment()
Carrier = Union[PowerSet, UPFragment]


@dataclass(frozen=True, eq=True)
class FiniteElem:
    n: int
    bits: int

    @property
    def carrier(self) -> PowerSet:
        return powerset(self.n)

    def _check(self, other):
        if not isinstance(other, FiniteElem) or other.n != self.n:
            raise CarrierMismatch(f"{self} and {other} live in different carriers")

    def __and__(self, other):
        self._check(other)
        return FiniteElem(self.n, self.bits & other.bits)

    def __or__(self, other):
        self._check(other)
        return FiniteElem(self.n, self.bits | other.bits)

    def __invert__(self):
        return FiniteElem(self.n, ~self.bits & ((1 << self.n) - 1))

    def __le__(self, other):
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other):
        return self <= other and self != other

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    @property
    def literal(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.n))

    def __str__(self):
        return self.literal

    def __repr__(self):
        return f"FiniteElem({self.literal!r})"


def _min_period(cycle: str) -> str:
    p = len(cycle)
    for d in range(1, p + 1):
        if p % d == 0 and cycle[:d] * (p // d) == cycle:
            return cycle[:d]
    return cycle


@dataclass(frozen=True, eq=False)
class UPSet:
    """Ultimately periodic subset of omega.

    ``m`` is a member iff ``prefix[m] == "1"`` for ``m < len(prefix)``, and
    otherwise iff ``cycle[(m - len(prefix)) % len(cycle)] == "1"``. Instances
    are always stored in canonical form (minimal period, then minimal prefix),
    so structural equality is set equality.
    """

    prefix: str
    cycle: str

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("UPSet cycle must be nonempty")
        if set(self.prefix + self.cycle) - {"0", "1"}:
            raise ValueError(f"bad UPSet bits {self.prefix!r};{self.cycle!r}")
        prefix, cycle = canonical_form(self.prefix, self.cycle)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def parse(cls, text: str) -> "UPSet":
        prefix, sep, cycle = text.strip().partition(";")
        if not sep:
            raise ValueError(f"UPSet literal {text!r} needs 'prefix;cycle'")
        return cls(prefix.strip(), cycle.strip())

    @classmethod
    def finite(cls, points: Iterable[int]) -> "UPSet":
        points = set(points)
        if not points:
            return cls("", "0")
        top = max(points)
        return cls("".join("1" if m in points else "0" for m in range(top + 1)), "0")

    @classmethod
    def tail(cls, start: int) -> "UPSet":
        """The final segment [start, oo)."""
        return cls("0" * start, "1")

    @classmethod
    def interval(cls, lo: int, hi: int) -> "UPSet":
        return cls("0" * lo + "1" * max(hi - lo, 0), "0")

    @property
    def carrier(self) -> UPFragment:
        return UPFRAG

    @property
    def period(self) -> int:
        return len(self.cycle)

    def __contains__(self, m: int) -> bool:
        n = len(self.prefix)
        if m < n:
            return self.prefix[m] == "1"
        return self.cycle[(m - n) % len(self.cycle)] == "1"

    def window(self, length: int) -> str:
        return "".join("1" if m in self else "0" for m in range(length))

    def _aligned(self, other):
        if not isinstance(other, UPSet):
            raise CarrierMismatch(f"{self} and {other} live in different carriers")
        p = math.lcm(self.period, other.period)
        if p > MAX_ALIGNED_PERIOD:
            raise PeriodTooLarge(f"aligned period {p} exceeds {MAX_ALIGNED_PERIOD}")
        n = max(len(self.prefix), len(other.prefix))
        return n, p, self.window(n + p), other.window(n + p)

    def _pointwise(self, other, op):
        n, _, a, b = self._aligned(other)
        bits = "".join("1" if op(x == "1", y == "1") else "0" for x, y in zip(a, b))
        return UPSet(bits[:n], bits[n:])

    def __and__(self, other):
        return self._pointwise(other, lambda x, y: x and y)

    def __or__(self, other):
        return self._pointwise(other, lambda x, y: x or y)

    def __invert__(self):
        flip = str.maketrans("01", "10")
        return UPSet(self.prefix.translate(flip), self.cycle.translate(flip))

    def __le__(self, other):
        _, _, a, b = self._aligned(other)
        return all(y == "1" for x, y in zip(a, b) if x == "1")

    def __lt__(self, other):
        return self <= other and self != other

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __eq__(self, other):
        return isinstance(other, UPSet) and (self.prefix, self.cycle) == (other.prefix, other.cycle)

    def __hash__(self):
        return hash((self.prefix, self.cycle))

    def is_finite(self) -> bool:
        return set(self.cycle) == {"0"}

    def is_cofinite(self) -> bool:
        return set(self.cycle) == {"1"}

    def min_point(self):
        """Least member, or None for the empty set."""
        if "1" in self.prefix:
            return self.prefix.index("1")
        if "1" in self.cycle:
            return len(self.prefix) + self.cycle.index("1")
        return None

    @property
    def literal(self) -> str:
        return f"{self.prefix};{self.cycle}"

    def __str__(self):
        return self.literal

    def __repr__(self):
        return f"UPSet({self.literal!r})"


def canonical_form(prefix: str, cycle: str) -> tuple:
    cycle = _min_period(cycle)
    # absorb trailing prefix bits into the cycle by rotation
    while prefix and prefix[-1] == cycle[-1]:
        prefix, cycle = prefix[:-1], cycle[-1] + cycle[:-1]
    return prefix, cycle


def canonicalize(s: UPSet) -> UPSet:
    """Minimal-(prefix, period) representative; ``UPSet`` already stores it."""
    return UPSet(*canonical_form(s.prefix, s.cycle))


def classify(s: UPSet) -> str:
    if s.is_finite():
        return "finite"
    if s.is_cofinite():
        return "cofinite"
    return "neither"


Element = Union[FiniteElem, UPSet]


def same_carrier(a, b) -> None:
    if type(a) is not type(b) or a.carrier != b.carrier:
        raise CarrierMismatch(f"{a} and {b} live in different carriers")


def meet(a, b):
    same_carrier(a, b)
    return a & b


def join(a, b):
    same_carrier(a, b)
    return a | b


def complement(a):
    return ~a


def leq(a, b) -> bool:
    same_carrier(a, b)
    return a <= b


def carrier_of(a) -> Carrier:
    return a.carrier


def big_join(values: Iterable, carrier: Carrier):
    return reduce(lambda x, y: x | y, values, carrier.zero)


def big_meet(values: Iterable, carrier: Carrier):
    return reduce(lambda x, y: x & y, values, carrier.one)


def element_key(a) -> tuple:
    """Deterministic sort key; the lattice order is only partial."""
    if isinstance(a, FiniteElem):
        return (a.n, a.bits)
    return (len(a.prefix), a.prefix, len(a.cycle), a.cycle)
