"""Command-line front end.

Exit codes: 0 success, 1 a check or lemma validation failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Sequence

from .dimension import entropy_scan, lemma_predicates, max_cell, max_cell_to_json
from .tropical import (
    CASE1,
    CASE2,
    HolonomicSystem,
    argmin_set,
    case1_free_count,
    case2_block_count,
    classify_system,
    first_violation,
    sequence_from_json,
    sequence_to_json,
    witness_case1,
    witness_case2,
)

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def _load_system(path: str) -> HolonomicSystem:
    try:
        return HolonomicSystem.from_json(_load_json(path))
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_sequence(path: str) -> tuple[Fraction, ...]:
    try:
        return sequence_from_json(_load_json(path))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _require_order2(system: HolonomicSystem, command: str) -> None:
    if system.order != 2:
        raise InputError(f"{command} needs an order-2 system, got order {system.order}")


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def random_slacks(rng: random.Random, count: int) -> list[Fraction]:
    return [Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(count)]


def cmd_classify(args) -> int:
    system = _load_system(args.system)
    _require_order2(system, "classify")
    _emit(classify_system(system).to_json())
    return OK


def cmd_check(args) -> int:
    system = _load_system(args.system)
    if not args.sequence:
        raise InputError("check needs --sequence")
    w = _load_sequence(args.sequence)
    bad = first_violation(system, w)
    report: dict[str, Any] = {"ok": bad is None, "failing_window": bad, "length": len(w)}
    if bad is not None:
        report["argmin"] = sorted(argmin_set(system, w, bad))
        report["window_values"] = sequence_to_json(system.window_values(w, bad))
    _emit(report)
    return OK if bad is None else FAILED


def cmd_witness(args) -> int:
    system = _load_system(args.system)
    _require_order2(system, "witness")
    N = _need_n(args)
    cls = classify_system(system)
    A, B, C = system.coeffs
    rng = random.Random(args.seed)
    if cls.case_id == CASE1:
        count = case1_free_count(N)
        slacks = _load_sequence(args.slacks) if args.slacks else random_slacks(rng, count)
        w = _call(witness_case1, A, B, C, N, 0, slacks)
    elif cls.case_id == CASE2:
        prefix = _load_sequence(args.prefix) if args.prefix else (Fraction(0),) * (4 * cls.j0 + 1)
        count = case2_block_count(N, cls.j0)
        slacks = _load_sequence(args.slacks) if args.slacks else random_slacks(rng, count)
        w = _call(witness_case2, A, B, C, N, prefix, slacks)
    else:
        raise InputError("Case3 systems have no free witness family")
    bad = first_violation(system, w)
    _emit({
        "case": cls.case_id,
        "N": N,
        "slacks": sequence_to_json(slacks),
        "sequence": sequence_to_json(w),
        "ok": bad is None,
    })
    return OK if bad is None else FAILED


def _call(fn, *args):
    try:
        return fn(*args)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _need_n(args) -> int:
    if args.n is None:
        raise InputError("--n is required")
    if args.n < 0:
        raise InputError(f"--n must be nonnegative, got {args.n}")
    return args.n


def cmd_dim(args) -> int:
    system = _load_system(args.system)
    N = _need_n(args)
    cell = max_cell(system, N, jobs=args.jobs)
    if args.format == "csv":
        ratio = Fraction(cell.dimension, N) if N else Fraction(0)
        print("N,dim,ratio_num,ratio_den")
        print(f"{N},{cell.dimension},{ratio.numerator},{ratio.denominator}")
    else:
        payload = max_cell_to_json(cell)
        payload["N"] = N
        _emit(payload)
    return OK


def cmd_scan(args) -> int:
    system = _load_system(args.system)
    if args.n_min is None or args.n_max is None:
        raise InputError("scan needs --n-min and --n-max")
    if args.n_min < 2 or args.n_max < args.n_min:
        raise InputError(f"need 2 <= n-min <= n-max, got {args.n_min}..{args.n_max}")
    report = entropy_scan(system, args.n_min, args.n_max, jobs=args.jobs)
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        _emit(report.to_json())
    return OK


def cmd_lemmas(args) -> int:
    system = _load_system(args.system)
    _require_order2(system, "lemmas")
    N = _need_n(args)
    report = lemma_predicates(system, N)
    _emit(report.to_json())
    return FAILED if report.violations else OK


COMMANDS = {
    "classify": cmd_classify,
    "check": cmd_check,
    "witness": cmd_witness,
    "dim": cmd_dim,
    "scan": cmd_scan,
    "lemmas": cmd_lemmas,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", required=True, help="HolonomicSystem JSON file")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--n", type=int)
    common.add_argument("--n-min", type=int)
    common.add_argument("--n-max", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sequence", help="sequence JSON file (check)")
    common.add_argument("--slacks", help="slack JSON file (witness)")
    common.add_argument("--prefix", help="prefix JSON file (witness, Case2)")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(
        prog="tropical-holonomic",
        description="Tropical holonomic sequences: classification, witnesses and dim(W_N).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    if args.format == "csv" and args.command not in ("dim", "scan"):
        print("error: --format csv is only available for dim and scan", file=sys.stderr)
        return BAD_INPUT
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return BAD_INPUT
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
