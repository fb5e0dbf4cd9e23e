"""Command-line driver.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 model or
sentence parse error.  Every error prints one line to stderr.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from typing import Sequence

from contscope.fragment import FragmentError, format_rows, interpret, parse_sentence
from contscope.laws import check_all, format_reports
from contscope.model import MAX_UNIVERSE, Model, ModelError, parse_model, serialize_model
from contscope.oracle import Bounds, nested_scope, separating_model_search
from contscope.spaces import CapExceeded
from contscope.strategies import (
    GOLDEN_READINGS,
    SHAPES,
    STRATEGIES,
    ReadingError,
    parse_reading,
    reading_label,
    readings_of,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ParseFailure(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="contscope", description="Continuation semantics for quantifier scope.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    e = sub.add_parser("eval", help="evaluate a sentence under a strategy")
    e.add_argument("--model", required=True)
    e.add_argument("--sentence", required=True)
    e.add_argument("--strategy", required=True, choices=STRATEGIES)
    e.add_argument("--variant")

    r = sub.add_parser("readings", help="map each strategy variant to the reading it computes")
    r.add_argument("--shape", required=True, choices=tuple(SHAPES))
    r.add_argument("--strategy", required=True, choices=STRATEGIES)
    _bounds_args(r)

    o = sub.add_parser("oracle", help="evaluate one scope order directly")
    o.add_argument("--model", required=True)
    o.add_argument("--sentence", required=True)
    o.add_argument("--order", required=True)

    law = sub.add_parser("laws", help="check the monad and strength laws")
    law.add_argument("--max-size", type=int, default=2)
    law.add_argument("--samples", type=int, default=200)
    law.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("separate", help="find a model separating two readings")
    s.add_argument("--shape", required=True, choices=("S2", "S3"))
    s.add_argument("--perm-a", required=True)
    s.add_argument("--perm-b", required=True)
    _bounds_args(s)

    d = sub.add_parser("dump", help="print a model in canonical form")
    d.add_argument("--model", required=True)
    return p


def _bounds_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-size", type=int, default=2)
    p.add_argument("--samples", type=int, help="sample this many relations instead of all (needs --seed)")
    p.add_argument("--seed", type=int)


def _bounds(args) -> Bounds:
    if args.max_size < 1:
        raise UsageError("--max-size must be at least 1")
    if args.samples is not None:
        if args.seed is None:
            raise UsageError("--samples requires --seed")
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        return Bounds(args.max_size, args.samples, args.seed)
    return Bounds(args.max_size)


def _load(path: str) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read model {path}: {exc.strerror}") from None
    try:
        return parse_model(text)
    except ModelError as exc:
        raise ParseFailure(f"{path}: {exc}") from None


def _cmd_eval(args, out) -> int:
    model = _load(args.model)
    try:
        parse_sentence(args.sentence, model)
    except FragmentError as exc:
        raise ParseFailure(str(exc)) from None
    try:
        rows = interpret(args.sentence, model, args.strategy, args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(format_rows(rows))
    return EXIT_OK


def _cmd_readings(args, out) -> int:
    bounds = _bounds(args)
    found = readings_of(args.strategy, args.shape, bounds)
    out.write("variant\treading\n")
    for v, sigma in found.items():
        out.write(f"{v.label}\t{reading_label(sigma)}\n")
    realized = set(found.values())
    n = SHAPES[args.shape]
    missing = [p for p in _perms(n) if p not in realized]
    if missing:
        out.write("# unrealized: " + ", ".join(map(reading_label, missing)) + "\n")
    golden = GOLDEN_READINGS[args.strategy][args.shape]
    if any(golden.get(v.label) != s for v, s in found.items()):
        print("readings differ from the frozen table", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _perms(n: int):
    return list(itertools.permutations(range(1, n + 1)))


def _cmd_oracle(args, out) -> int:
    model = _load(args.model)
    try:
        tree = parse_sentence(args.sentence, model).tree
    except FragmentError as exc:
        raise ParseFailure(str(exc)) from None
    try:
        sigma = parse_reading(args.order)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(sigma) != len(tree.qps):
        raise UsageError(f"--order has {len(sigma)} positions, sentence has {len(tree.qps)} QPs")
    truth = nested_scope(sigma, tree.quantifiers(), tree.relation())
    out.write("reading\ttruth\n")
    out.write(f"{reading_label(sigma)}\t{'true' if truth else 'false'}\n")
    return EXIT_OK


def _cmd_laws(args, out) -> int:
    if args.max_size < 1 or args.samples < 1:
        raise UsageError("--max-size and --samples must be positive")
    reports = check_all(args.max_size, args.samples, args.seed)
    out.write(format_reports(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_separate(args, out) -> int:
    n = SHAPES[args.shape]
    try:
        a, b = parse_reading(args.perm_a), parse_reading(args.perm_b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(a) != n or len(b) != n:
        raise UsageError(f"permutations must have {n} positions for {args.shape}")
    bounds = _bounds(args)
    if n * bounds.size > MAX_UNIVERSE:
        raise UsageError(f"{n} sorts of {bounds.size} elements exceed the {MAX_UNIVERSE}-element universe cap")
    inst = separating_model_search(a, b, bounds)
    if inst is None:
        out.write(f"# no instance separates {reading_label(a)} and {reading_label(b)} within bounds\n")
        return EXIT_OK
    out.write(inst.describe())
    return EXIT_OK


def _cmd_dump(args, out) -> int:
    out.write(serialize_model(_load(args.model)))
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "readings": _cmd_readings,
    "oracle": _cmd_oracle,
    "laws": _cmd_laws,
    "separate": _cmd_separate,
    "dump": _cmd_dump,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseFailure as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReadingError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
