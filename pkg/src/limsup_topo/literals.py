"""Text literals for carriers, elements, sets, sequences and names.

Grammar (whitespace is insignificant around separators)::

    input     := [carrier ";"] object
    carrier   := "powerset:" N | "upfrag"
    object    := pair | single
    pair      := single "::" single
    single    := carrier | element | set | upset | sequence | name | indexmap
    element   := bits                       (finite carrier, width n)
               | bits? ";" bits             (UP fragment, prefix;cycle)
    set       := "{" [element ("," element)*] "}"
    upset     := ("up" | "down") set | "cofinite-family" | "finite-family"
    sequence  := "ep:[" element* "|" element+ "]"
               | "tail:" affine | "diag:" affine | "block:" affine
               | "uniontail:" element "," affine
    affine    := C "*n+" D
    name      := "name:{" label ":" element ("," label ":" element)* "}"
               | "name-of:" sequence | "gamma"
    indexmap  := "map:" ["[" N* "]"] affine
    labels    := "labels:[" label* "|" label+ "]"

``render`` produces text that ``parse_input`` maps back to an equal object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .carriers import FiniteElem, PowerSet, UPFRAG, UPFragment, UPSet, element_key, powerset
from .forcing import BName, LabelCycle
from .sequences import (
    AffineMap,
    BlockDiag,
    EventuallyPeriodic,
    IndexMap,
    SingletonDiag,
    TailAbove,
    UnionTail,
)
from .upsets import UpsetFD

AFFINE = re.compile(r"\s*(\d+)\s*\*\s*n\s*\+\s*(\d+)\s*$")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        super().__init__(f"{message} (column {pos + 1} of {text!r})" if text else message)
        self.pos = pos


@dataclass(frozen=True)
class Pair:
    first: object
    second: object


def parse_carrier(text: str):
    t = text.strip()
    if t == "upfrag":
        return UPFRAG
    m = re.fullmatch(r"powerset:(\d+)", t)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ParseError("the trivial algebra powerset:0 is excluded", text, 0)
        return powerset(n)
    return None


class _Parser:
    def __init__(self, text: str, carrier):
        self.text = text
        self.carrier = carrier

    def fail(self, message, pos):
        raise ParseError(message, self.text, pos)

    def element(self, tok: str, pos: int):
        tok = tok.strip()
        if isinstance(self.carrier, UPFragment) or (self.carrier is None and ";" in tok):
            if ";" not in tok:
                self.fail(f"UP element {tok!r} needs 'prefix;cycle'", pos)
            try:
                return UPSet.parse(tok)
            except ValueError as exc:
                self.fail(str(exc), pos)
        if self.carrier is None:
            self.fail("finite elements need a carrier selector such as 'powerset:2 ;'", pos)
        try:
            return self.carrier.elem(tok)
        except ValueError as exc:
            self.fail(str(exc), pos)

    def affine(self, tok: str, pos: int) -> AffineMap:
        m = AFFINE.match(tok)
        if not m:
            self.fail(f"expected an affine map 'c*n+d', got {tok!r}", pos)
        c, d = int(m.group(1)), int(m.group(2))
        if c < 1:
            self.fail(f"affine map {tok.strip()!r} is not strictly increasing", pos)
        return AffineMap(c, d)

    def bracket_split(self, body: str, pos: int):
        if body.count("|") != 1:
            self.fail("expected exactly one '|' between prefix and cycle", pos)
        left, right = body.split("|")
        return left.split(), right.split()

    def single(self, text: str, pos: int):
        t = text.strip()
        pos += len(text) - len(text.lstrip())
        carrier = parse_carrier(t)
        if carrier is not None:
            return carrier
        if t in ("cofinite-family", "finite-family"):
            out = UpsetFD.cofinite()
            return out if t == "cofinite-family" else UpsetFD(UPFRAG, frozenset(), True, "down")
        if t == "gamma":
            if self.carrier is None:
                self.fail("gamma needs a carrier selector", pos)
            return BName.gamma(self.carrier)
        if t.startswith("{"):
            return self.element_set(t, pos)
        for direction in ("up", "down"):
            if t.startswith(direction + "{"):
                values = self.element_set(t[len(direction):], pos + len(direction))
                carrier = self.carrier if self.carrier is not None else UPFRAG
                return UpsetFD(carrier, values, False, direction)
        if t.startswith("ep:["):
            if not t.endswith("]"):
                self.fail("unterminated 'ep:[' sequence", pos + len(t))
            pre, cyc = self.bracket_split(t[4:-1], pos + 4)
            if not cyc:
                self.fail("eventually periodic sequence needs a nonempty cycle", pos)
            try:
                return EventuallyPeriodic(
                    tuple(self.element(e, pos) for e in pre), tuple(self.element(e, pos) for e in cyc)
                )
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                self.fail(str(exc), pos)
        for prefix, kind in (("tail:", TailAbove), ("diag:", SingletonDiag), ("block:", BlockDiag)):
            if t.startswith(prefix):
                return kind(self.affine(t[len(prefix):], pos + len(prefix)))
        if t.startswith("uniontail:"):
            base, sep, rule = t[len("uniontail:"):].rpartition(",")
            if not sep:
                self.fail("uniontail needs 'S,c*n+d'", pos)
            old, self.carrier = self.carrier, UPFRAG
            try:
                s = self.element(base, pos + 10)
            finally:
                self.carrier = old
            try:
                return UnionTail(s, self.affine(rule, pos + 10 + len(base) + 1))
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                self.fail(str(exc), pos)
        if t.startswith("name-of:"):
            return BName.of_sequence(self.single(t[len("name-of:"):], pos + 8))
        if t.startswith("name:{"):
            return self.name(t, pos)
        if t.startswith("map:"):
            return self.index_map(t[4:], pos + 4)
        if t.startswith("labels:["):
            if not t.endswith("]"):
                self.fail("unterminated 'labels:[' enumeration", pos + len(t))
            pre, cyc = self.bracket_split(t[8:-1], pos + 8)
            if not cyc:
                self.fail("label enumeration needs a nonempty cycle", pos)
            return LabelCycle(tuple(map(_label, pre)), tuple(map(_label, cyc)))
        if not t:
            self.fail("empty input", pos)
        return self.element(t, pos)

    def element_set(self, t: str, pos: int) -> frozenset:
        if not t.endswith("}"):
            self.fail("unterminated '{' set", pos + len(t))
        body = t[1:-1].strip()
        if not body:
            return frozenset()
        out, offset = [], pos + 1
        for tok in t[1:-1].split(","):
            out.append(self.element(tok, offset))
            offset += len(tok) + 1
        return frozenset(out)

    def name(self, t: str, pos: int) -> BName:
        if not t.endswith("}"):
            self.fail("unterminated name literal", pos + len(t))
        mapping, offset = {}, pos + 6
        for entry in t[6:-1].split(","):
            label, sep, value = entry.partition(":")
            if not sep:
                self.fail(f"name entry {entry.strip()!r} needs 'label:element'", offset)
            key = _label(label.strip())
            if key in mapping:
                self.fail(f"duplicate label {key!r}", offset)
            mapping[key] = self.element(value, offset + len(label) + 1)
            offset += len(entry) + 1
        return BName.finite(mapping)

    def index_map(self, t: str, pos: int) -> IndexMap:
        t = t.strip()
        head = ()
        if t.startswith("["):
            close = t.find("]")
            if close < 0:
                self.fail("unterminated index table", pos)
            try:
                head = tuple(int(v) for v in t[1:close].split())
            except ValueError:
                self.fail("index table must list naturals", pos)
            t = t[close + 1:]
        rule = self.affine(t, pos)
        try:
            return IndexMap(head, rule.c, rule.d)
        except ValueError as exc:
            self.fail(str(exc), pos)


def _label(tok: str):
    return int(tok) if tok.isdigit() else tok


def parse_input(text: str, carrier=None):
    """Parse ``[carrier ;] object``; see the module grammar."""
    body, pos = text, 0
    head, sep, rest = text.partition(";")
    selected = parse_carrier(head) if sep else None
    if selected is not None:
        carrier, body, pos = selected, rest, len(head) + 1
    parser = _Parser(text, carrier)
    if "::" in body:
        left, _, right = body.partition("::")
        return Pair(parser.single(left, pos), parser.single(right, pos + len(left) + 2))
    return parser.single(body, pos)


def carrier_of_object(obj):
    if isinstance(obj, (PowerSet, UPFragment)):
        return None
    if isinstance(obj, Pair):
        return carrier_of_object(obj.first) or carrier_of_object(obj.second)
    if isinstance(obj, (FiniteElem, UPSet)):
        return obj.carrier
    if isinstance(obj, frozenset):
        for v in obj:
            return v.carrier
        return None
    if isinstance(obj, (LabelCycle, IndexMap)):
        return None
    return getattr(obj, "carrier", None)


def literal(obj) -> str:
    """Object literal without a carrier selector."""
    if isinstance(obj, (PowerSet, UPFragment)):
        return str(obj)
    if isinstance(obj, Pair):
        return f"{literal(obj.first)} :: {literal(obj.second)}"
    if isinstance(obj, frozenset):
        return "{" + ",".join(v.literal for v in sorted(obj, key=element_key)) + "}"
    if isinstance(obj, IndexMap):
        head = f"[{' '.join(map(str, obj.head))}] " if obj.head else ""
        return f"map:{head}{obj.c}*n+{obj.d}"
    return obj.literal


def render(obj, carrier=None) -> str:
    """``carrier ; literal``, re-parseable by ``parse_input``."""
    carrier = carrier or carrier_of_object(obj)
    text = literal(obj)
    return f"{carrier} ; {text}" if carrier is not None else text
