"""``alg``: command-line front end.

Examples::

    alg info
    alg calc limsup "powerset:2 ; ep:[ | 10 01]"
    alg calc closure --carrier powerset:3 "{100,010}"
    alg enum closed --n 4 --mode scan
    alg verify --suite T4111 --output machine
    alg force check-t4108 "upfrag ; cofinite-family :: tail:1*n+0"
"""

from __future__ import annotations

import argparse
import json
import sys

from . import census, convergence
from .carriers import PowerSet, powerset
from .convergence import iterate_u_to_fixpoint, lambda_up
from .forcing import BName, t4107_suite, t4108_check
from .literals import Pair, ParseError, literal, parse_carrier, parse_input, render
from .sequences import GENERATOR_KINDS, EventuallyPeriodic, liminf, limsup
from .suites import REGISTRY, LimitViolation, RunConfig, UnknownSuite, emit_report, recheck, run_suite, suite_tags
from .upsets import UpsetFD, dec_iterate, min_elements, up_closure


class UsageError(ValueError):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--carrier", help="carrier selector: powerset:N or upfrag")
    p.add_argument("--output", choices=("table", "machine"), default="table")
    p.add_argument("--max-cycle", type=int, default=3, help="longest cycle in sequence sweeps")
    p.add_argument("--max-prefix", type=int, default=2, help="longest prefix in sequence sweeps")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="alg", description="limsup topology verification lab")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="carriers, limits and suite tags")

    calc = sub.add_parser("calc", parents=[common], help="evaluate an operator on a literal")
    calc.add_argument("op", choices=("limsup", "liminf", "closure", "min", "dec-trace"))
    calc.add_argument("text", help="input literal, optionally prefixed by 'carrier ;'")

    enum = sub.add_parser("enum", parents=[common], help="enumerate closed sets")
    enum.add_argument("what", choices=("closed",))
    enum.add_argument("--n", type=int, required=True)
    enum.add_argument("--mode", choices=("scan", "antichain"), default="scan")
    enum.add_argument("--ordering", choices=census.ORDERINGS, default="natural")
    enum.add_argument("--list", action="store_true", help="print every closed set")

    verify = sub.add_parser("verify", parents=[common], help="run a theorem suite")
    verify.add_argument("--suite", required=True, help="suite tag, e.g. T4111")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--samples", type=int, default=40)
    verify.add_argument("--max-subset", type=int, default=3)
    verify.add_argument("--case", help="re-run a single case literal")
    verify.add_argument("--timing", action="store_true", help="record per-case milliseconds")

    force = sub.add_parser("force", parents=[common], help="forcing characterizations of closedness")
    force.add_argument("check", choices=("check-t4107", "check-t4108"))
    force.add_argument("text", help="a name literal, or 'F :: A' for check-t4108")
    force.add_argument("--enum", action="append", default=[], help="index map enumerating A (sequence names)")
    return parser


def _emit(args, text_lines, payload) -> None:
    if args.output == "machine":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print("\n".join(text_lines))


def _carrier(args):
    if args.carrier is None:
        return None
    carrier = parse_carrier(args.carrier)
    if carrier is None:
        raise UsageError(f"bad carrier selector {args.carrier!r}")
    return carrier


def cmd_info(args) -> int:
    lines = [
        "carriers: powerset:N (N >= 1), upfrag (ultimately periodic subsets of omega)",
        f"topology enumeration: n <= {convergence.MAX_TOPOLOGY_N}; closure tower: n <= {convergence.MAX_TOWER_N}",
        f"closed-set census: scan n <= {census.MAX_SCAN_N}, antichain n <= {census.MAX_ANTICHAIN_N}",
        "suites:",
    ]
    suites = []
    for tag in suite_tags():
        s = REGISTRY[tag]
        lines.append(f"  {tag:<7} {s.default:<11} {s.title}")
        suites.append({"tag": tag, "default": s.default, "carriers": list(s.kinds), "title": s.title})
    carrier = _carrier(args)
    payload = {"suites": suites}
    if carrier is not None:
        size = carrier.size if isinstance(carrier, PowerSet) else "countable"
        lines.insert(0, f"{carrier}: {size} elements")
        payload["carrier"] = str(carrier)
    _emit(args, lines, payload)
    return 0


def _set_literal(values) -> str:
    return literal(frozenset(values))


def cmd_calc(args) -> int:
    obj = parse_input(args.text, _carrier(args))
    op = args.op
    if op in ("limsup", "liminf"):
        if not isinstance(obj, (EventuallyPeriodic,) + GENERATOR_KINDS):
            raise UsageError(f"{op} needs a sequence literal")
        value = limsup(obj) if op == "limsup" else liminf(obj)
        result = value.literal
    elif op == "closure":
        result = _closure(obj)
    elif op == "min":
        if isinstance(obj, UpsetFD):
            result = _set_literal(obj.generators)
        elif isinstance(obj, frozenset):
            result = _set_literal(min_elements(obj))
        else:
            raise UsageError("min needs an upward closed set")
    else:
        trace = _dec_trace(obj)
        stages = [_stage_literal(s) for s in trace.stages]
        lines = [f"stage {i}: {s}" for i, s in enumerate(stages)] + [f"stable at stage {trace.stable_at}"]
        _emit(args, lines, {"op": op, "input": args.text, "stages": stages, "stable_at": trace.stable_at})
        return 0
    _emit(args, [result], {"op": op, "input": args.text, "result": result})
    return 0


def _closure(obj) -> str:
    if isinstance(obj, frozenset):
        if not obj:
            return "{}"
        carrier = next(iter(obj)).carrier
        if isinstance(carrier, PowerSet):
            cl, _ = iterate_u_to_fixpoint(obj, lambda_up(carrier))
            return UpsetFD(carrier, min_elements(cl, carrier)).literal
        return dec_iterate(obj).closure.literal
    if isinstance(obj, UpsetFD) or isinstance(obj, GENERATOR_KINDS):
        return dec_iterate(obj).closure.literal
    if isinstance(obj, EventuallyPeriodic):
        return up_closure(obj.prefix + obj.cycle).literal
    raise UsageError("closure needs a set, an upset or a decreasing sequence")


def _dec_trace(obj):
    if isinstance(obj, (frozenset, UpsetFD)) or isinstance(obj, GENERATOR_KINDS):
        return dec_iterate(obj)
    raise UsageError("dec-trace needs a set, an upset or a tail sequence")


def _stage_literal(stage) -> str:
    if isinstance(stage, frozenset):
        return _set_literal(stage)
    return stage.literal


def cmd_enum(args) -> int:
    found = census.enumerate_closed_sets(args.n, args.mode, args.ordering)
    lines = [f"powerset:{args.n}: {found.count} closed sets ({args.mode} mode)"]
    payload = {"n": args.n, "mode": args.mode, "count": found.count}
    if args.list:
        listed = sorted(UpsetFD(powerset(args.n), a).literal for a in found.antichains)
        lines += listed
        payload["closed_sets"] = listed
    _emit(args, lines, payload)
    return 0


def _config(args) -> RunConfig:
    return RunConfig(
        carrier=args.carrier,
        max_cycle=args.max_cycle,
        max_prefix=args.max_prefix,
        max_subset=args.max_subset,
        samples=args.samples,
        seed=args.seed,
        output=args.output,
        timing=args.timing,
    )


def cmd_verify(args) -> int:
    config = _config(args)
    if args.case:
        result = recheck(args.suite, args.case, config)
        lines = [f"{result.status.upper()}  {result.case}  {result.note}"]
        payload = {
            "suite": args.suite,
            "case": result.case,
            "status": result.status,
            "witness": result.witness,
            "millis": result.millis,
            "note": result.note,
        }
        _emit(args, lines, payload)
        return 0 if result.status == "pass" else 1
    report = run_suite(args.suite, config)
    print(emit_report(report, args.output))
    return report.exit_status


def cmd_force(args) -> int:
    obj = parse_input(args.text, _carrier(args))
    if args.check == "check-t4107":
        if not isinstance(obj, BName):
            raise UsageError("check-t4107 needs a name literal")
        enums = [parse_input(f"map:{e}") for e in args.enum] or None
        report = t4107_suite(obj, enums)
        fields = {
            "incomparable": report.incomparable,
            "positive_differences": report.positive_differences,
            "min_property": report.min_property,
            "join_condition": report.join_condition,
            "forcing_condition": report.forcing_condition,
            "closed": report.closed,
            "part1_agree": report.part1_agree,
            "part2_agree": report.part2_agree,
        }
        lines = [f"{k:<21} {v}" for k, v in fields.items()]
        if report.failing:
            lines.append("failing label sets: " + ", ".join(map(str, report.failing)))
        _emit(args, lines, dict(fields, name=obj.literal, failing=[list(map(str, f)) for f in report.failing]))
        return 0 if report.part1_agree and report.part2_agree else 1
    if not isinstance(obj, Pair) or not isinstance(obj.first, UpsetFD):
        raise UsageError("check-t4108 needs 'F :: A' with F an upset and A a sequence")
    holds, s = t4108_check(obj.first, obj.second)
    lines = [f"exists a in F forcing infinite intersection: {holds}", f"Boolean value (limsup A): {s.literal}"]
    _emit(args, lines, {"input": render(obj), "holds": holds, "value": s.literal})
    return 0


COMMANDS = {"info": cmd_info, "calc": cmd_calc, "enum": cmd_enum, "verify": cmd_verify, "force": cmd_force}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, UsageError, LimitViolation, UnknownSuite) as exc:
        print(f"alg: error: {exc.args[0] if isinstance(exc, KeyError) else exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"alg: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
