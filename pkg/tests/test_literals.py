import pytest
from hypothesis import given, strategies as st

from conftest import upsets
from limsup_topo.carriers import UPFRAG, UPSet, powerset
from limsup_topo.forcing import BName, LabelCycle
from limsup_topo.literals import Pair, ParseError, literal, parse_carrier, parse_input, render
from limsup_topo.sequences import AffineMap, BlockDiag, EventuallyPeriodic, IndexMap, SingletonDiag, TailAbove, UnionTail
from limsup_topo.upsets import UpsetFD

P2 = powerset(2)


def test_carriers():
    assert parse_carrier("powerset:3") == powerset(3)
    assert parse_carrier("upfrag") is UPFRAG
    assert parse_carrier("bogus") is None
    with pytest.raises(ParseError):
        parse_carrier("powerset:0")


def test_parse_examples():
    assert parse_input("powerset:2 ; 10") == P2.atom(0)
    assert parse_input("01", P2) == P2.atom(1)
    assert parse_input("powerset:2 ; {10,01}") == frozenset({P2.atom(0), P2.atom(1)})
    assert parse_input("powerset:2 ; ep:[ | 10 01]") == EventuallyPeriodic((), (P2.atom(0), P2.atom(1)))
    assert parse_input("0;1") == UPSet("0", "1")
    assert parse_input("tail:2*n+1") == TailAbove(AffineMap(2, 1))
    assert parse_input("diag:1*n+0") == SingletonDiag(AffineMap(1, 0))
    assert parse_input("block:3*n+0") == BlockDiag(AffineMap(3, 0))
    assert parse_input("uniontail:;10,1*n+0") == UnionTail(UPSet("", "10"), AffineMap(1, 0))
    assert parse_input("cofinite-family") == UpsetFD.cofinite()
    assert parse_input("up{;10}") == UpsetFD.principal(UPSet("", "10"))
    assert parse_input("map:[0 2] 1*n+5") == IndexMap((0, 2), 1, 5)
    assert parse_input("labels:[a | b c]") == LabelCycle(("a",), ("b", "c"))
    assert parse_input("powerset:2 ; gamma") == BName.gamma(P2)
    pair = parse_input("cofinite-family :: tail:1*n+0")
    assert isinstance(pair, Pair) and pair.second == TailAbove(AffineMap(1, 0))


def test_name_literal():
    name = parse_input("powerset:2 ; name:{a:10, b:01}")
    assert name == BName.finite({"a": P2.atom(0), "b": P2.atom(1)})
    assert parse_input(render(name)) == name


@pytest.mark.parametrize(
    "text,column",
    [
        ("powerset:2 ; 102", 14),
        ("tail:0*n+1", 6),
        ("tail:n+1", 6),
        ("powerset:2 ; ep:[10 01]", 18),
        ("powerset:2 ; name:{a:10, a:01}", 25),
    ],
)
def test_error_columns(text, column):
    with pytest.raises(ParseError) as info:
        parse_input(text)
    assert f"column {column} " in str(info.value)


def test_errors():
    for bad in ("", "10", "gamma", "ep:[ | ]", "powerset:2 ; {10,01", "labels:[a b]"):
        with pytest.raises(ParseError):
            parse_input(bad)


SAMPLES = [
    P2.one,
    frozenset({P2.atom(0), P2.atom(1)}),
    EventuallyPeriodic((P2.one,), (P2.atom(0), P2.zero)),
    UpsetFD.principal(P2.atom(1)),
    TailAbove(AffineMap(2, 3)),
    UnionTail(UPSet("01", "0"), AffineMap(1, 1)),
    UpsetFD.cofinite(),
    IndexMap((1, 3), 2, 7),
    Pair(UpsetFD.cofinite(), TailAbove(AffineMap(1, 0))),
    BName.of_sequence(SingletonDiag(AffineMap(1, 0))),
]


@pytest.mark.parametrize("obj", SAMPLES, ids=lambda o: literal(o))
def test_render_round_trip(obj):
    assert parse_input(render(obj)) == obj


@given(upsets, st.lists(upsets, max_size=3), st.lists(upsets, min_size=1, max_size=3))
def test_up_round_trip(a, prefix, cycle):
    assert parse_input(render(a)) == a
    seq = EventuallyPeriodic(tuple(prefix), tuple(cycle))
    assert parse_input(render(seq)) == seq
    assert parse_input(render(frozenset(cycle))) == frozenset(cycle)
