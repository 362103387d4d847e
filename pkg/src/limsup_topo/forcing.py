"""Boolean values of the few name formulas that reduce to lattice terms.

A name ``tau = {(x, q_x) : x in X}`` is given by a finite table, by a
sequence (labels are the naturals, ``q_n = x_n``), or is the canonical name
``Gamma = {(b, b) : b > 0}``. The supported values are

* ``||x in tau|| = q_x``,
* ``||tau meets A infinitely often||``: the limsup of the ``q`` values along
  an enumeration of ``A``,
* ``||omega is almost contained in tau_x|| = liminf x``,
* ``1 forces (phi => psi)`` iff ``||phi|| <= ||psi||``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .carriers import PowerSet, UPFRAG, big_join, same_carrier
from .sequences import (
    BlockDiag,
    EventuallyPeriodic,
    IndexMap,
    SingletonDiag,
    TailAbove,
    UnionTail,
    liminf,
    limsup,
    subsequence,
    values_of,
)
from .upsets import UpsetFD, is_closed, minimal, up_closure


class UnknownLabel(KeyError):
    pass


class UnsupportedPresentation(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class LabelCycle:
    """Enumeration of labels: ``prefix`` once, then ``cycle`` forever."""

    prefix: tuple
    cycle: tuple

    @property
    def literal(self) -> str:
        return f"labels:[{' '.join(map(str, self.prefix))} | {' '.join(map(str, self.cycle))}]"


@dataclass(frozen=True)
class BName:
    kind: str  # "table", "sequence" or "gamma"
    table: tuple = ()
    seq: object = None
    carrier: object = None

    @classmethod
    def finite(cls, mapping: dict) -> "BName":
        if not mapping:
            raise ValueError("a name needs at least one label")
        values = list(mapping.values())
        for v in values[1:]:
            same_carrier(values[0], v)
        for label, q in mapping.items():
            if q == q.carrier.zero:
                warnings.warn(f"label {label!r} has Boolean value 0")
        return cls("table", tuple(mapping.items()), carrier=values[0].carrier)

    @classmethod
    def of_sequence(cls, seq) -> "BName":
        """``tau_x = {(n, x_n)}``."""
        return cls("sequence", seq=seq, carrier=seq.carrier)

    @classmethod
    def gamma(cls, carrier) -> "BName":
        return cls("gamma", carrier=carrier)

    @property
    def labels(self) -> list:
        if self.kind != "table":
            raise UnsupportedPresentation("only finite names list their labels")
        return [label for label, _ in self.table]

    @property
    def literal(self) -> str:
        if self.kind == "table":
            return "name:{" + ", ".join(f"{k}:{v.literal}" for k, v in self.table) + "}"
        if self.kind == "sequence":
            return f"name-of:{self.seq.literal}"
        return "gamma"


def bv_membership(name: BName, label):
    """``||label in name||``."""
    if name.kind == "table":
        for k, q in name.table:
            if k == label:
                return q
        raise UnknownLabel(label)
    if name.kind == "sequence":
        if not isinstance(label, int) or label < 0:
            raise UnknownLabel(label)
        return name.seq.term(label)
    same_carrier(label, name.carrier.zero)
    return label


def values_along(name: BName, enum):
    """The sequence of Boolean values ``q`` along an enumeration of labels."""
    if isinstance(enum, IndexMap):
        if name.kind != "sequence":
            raise UnsupportedPresentation("index maps enumerate subsets of omega")
        return subsequence(name.seq, enum)
    if isinstance(enum, LabelCycle):
        return EventuallyPeriodic(
            tuple(bv_membership(name, k) for k in enum.prefix),
            tuple(bv_membership(name, k) for k in enum.cycle),
        )
    if name.kind == "gamma":
        # labels of Gamma are the elements themselves
        if enum.carrier != name.carrier:
            raise UnsupportedPresentation("enumeration lives in another carrier")
        return enum
    raise UnsupportedPresentation(f"unsupported enumeration {enum!r}")


def bv_infinite_intersection(name: BName, enum):
    """``||name meets A infinitely often||`` for ``A`` enumerated by ``enum``.

    For an injective enumeration this is exactly the Boolean value of
    ``|tau & A| = omega``; for a repeating one it is the limsup of the
    values along the enumeration.
    """
    return limsup(values_along(name, enum))


def bv_liminf_superset(x):
    """``||omega is almost contained in tau_x||``."""
    return liminf(x)


def forces_implication(phi_value, psi_value) -> bool:
    """``1 forces phi => psi``."""
    same_carrier(phi_value, psi_value)
    return phi_value <= psi_value


def exists_term_below(x, s) -> bool:
    """Whether some term ``x_n`` lies below ``s``.

    For the generator families past the prefix of ``s`` the answer depends
    only on ``g(n)`` modulo the period of ``s``, which repeats with period at
    most ``len(s.cycle)`` in ``n``, so a bounded search decides it.
    """
    if isinstance(x, EventuallyPeriodic):
        return any(v <= s for v in values_of(x))
    if isinstance(x, TailAbove):
        return s.is_cofinite()
    if isinstance(x, UnionTail):
        return x.base <= s and s.is_cofinite()
    if isinstance(x, (SingletonDiag, BlockDiag)):
        n0 = 0
        while x.g(n0) < len(s.prefix):
            n0 += 1
        return any(x.term(n) <= s for n in range(n0 + len(s.cycle) + 1))
    raise UnsupportedPresentation(f"unsupported sequence {x!r}")


def terms_within(F: UpsetFD, x) -> bool:
    """Whether every term of ``x`` lies in the upset ``F``."""
    if isinstance(x, EventuallyPeriodic):
        return all(v in F for v in values_of(x))
    if F.cofinite_family:
        return isinstance(x, (TailAbove, UnionTail))
    if isinstance(x, (TailAbove, UnionTail)):
        # decreasing: one generator must serve all terms, i.e. sit below the meet
        return any(q <= limsup(x) for q in F.generators)
    # pairwise disjoint nonempty terms: a nonempty generator covers at most one
    return UPFRAG.zero in F.generators


@dataclass
class T4107Report:
    distinct: bool
    incomparable: bool
    positive_differences: bool
    min_property: bool
    join_condition: bool
    forcing_condition: bool
    closed: Optional[bool]
    failing: list = field(default_factory=list)

    @property
    def part1_agree(self) -> bool:
        if not self.distinct:
            return True
        return self.incomparable == self.positive_differences == self.min_property

    @property
    def part2_agree(self) -> bool:
        if self.join_condition != self.forcing_condition:
            return False
        return self.closed is None or self.closed == self.join_condition


def _part1(labels, q):
    distinct = len({q(x) for x in labels}) == len(labels)
    pairs = [(x, y) for x in labels for y in labels if x != y]
    incomparable = all(not q(x) <= q(y) for x, y in pairs)
    # ||x in tau and y not in tau|| = q_x & ~q_y
    zero = q(labels[0]).carrier.zero
    positive = all((q(x) & ~q(y)) != zero for x, y in pairs)
    values = {q(x) for x in labels}
    if isinstance(q(labels[0]).carrier, PowerSet):
        members = up_closure(values).elements()
        min_property = values == minimal(members)
    else:
        min_property = values == set(up_closure(values).generators)
    return distinct, incomparable, positive, min_property


def t4107_suite(name: BName, enumerations=None, sample: int = 8) -> T4107Report:
    """Check the generator characterizations of minimality and closedness.

    Finite names: every nonempty label set C is visited; the join side
    computes ``join {q_y : y in C}`` directly, the forcing side computes
    ``||tau meets C infinitely often||`` along the cyclic enumeration of C and
    asks for ``x`` with ``1 forces (x in tau => ...)``. Names given by a
    sequence are checked on its first ``sample`` labels for part (1) and on
    the given index-map enumerations for part (2).
    """
    if name.kind == "table":
        labels = name.labels
        q = lambda x: bv_membership(name, x)  # noqa: E731
        distinct, incomparable, positive, min_prop = _part1(labels, q)
        join_ok = forcing_ok = True
        failing = []
        ordered = sorted(labels, key=str)
        if len(ordered) > 12:
            raise UnsupportedPresentation("label sweep limited to 12 labels")
        for part in nonempty_subsets_labels(ordered):
            top = big_join((q(y) for y in part), name.carrier)
            j = any(q(x) <= top for x in labels)
            s = bv_infinite_intersection(name, LabelCycle((), tuple(part)))
            f = any(forces_implication(bv_membership(name, x), s) for x in labels)
            join_ok &= j
            forcing_ok &= f
            if not (j and f):
                failing.append(tuple(part))
        closed = is_closed(up_closure(q(x) for x in labels)).closed
        return T4107Report(distinct, incomparable, positive, min_prop, join_ok, forcing_ok, closed, failing)
    if name.kind != "sequence":
        raise UnsupportedPresentation("t4107 suite needs a finite or sequence-presented name")
    seq = name.seq
    labels = list(range(sample))
    q = lambda n: seq.term(n)  # noqa: E731
    distinct, incomparable, positive, min_prop = _part1(labels, q)
    enumerations = enumerations or [IndexMap()]
    join_ok = forcing_ok = True
    failing = []
    for f in enumerations:
        sub = subsequence(seq, f)
        j = exists_term_below(seq, limsup(sub))
        s = bv_infinite_intersection(name, f)
        fc = exists_term_below(seq, s)
        join_ok &= j
        forcing_ok &= fc
        if not (j and fc):
            failing.append(str(f))
    closed = None
    if isinstance(seq, TailAbove):
        closed = is_closed(UpsetFD.cofinite()).closed
    elif isinstance(seq, EventuallyPeriodic):
        closed = is_closed(up_closure(values_of(seq))).closed
    return T4107Report(distinct, incomparable, positive, min_prop, join_ok, forcing_ok, closed, failing)


def nonempty_subsets_labels(labels) -> list:
    return [
        combo
        for k in range(1, len(labels) + 1)
        for combo in itertools.combinations(labels, k)
    ]


def t4108_check(F: UpsetFD, A):
    """``exists a in F: a forces Gamma meets A infinitely often``.

    The value ``s`` of that formula is ``limsup A``; for an upset some
    ``a in F`` lies below ``s`` iff ``s`` itself is in ``F``, which is the
    witness returned.
    """
    if not terms_within(F, A):
        raise PreconditionError(f"{A.literal} is not a sequence in {F.literal}")
    s = bv_infinite_intersection(BName.gamma(F.carrier), A)
    return s in F, s
