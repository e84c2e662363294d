"""milnor-verify: run verification suites and emit pass/fail reports.

Exit codes: 0 all assertions pass (skips allowed), 1 some assertion failed,
2 invalid input, 3 required data unavailable.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import suites
from .errors import (
    DataUnavailable, KappaTooLarge, NotSimpleElliptic, UnknownFamily, UnsupportedCase,
)
from .report import EXIT_INVALID, EXIT_UNAVAILABLE

INVALID = (KappaTooLarge, NotSimpleElliptic, UnknownFamily, UnsupportedCase, ValueError)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--no-timing", action="store_true",
                        help="omit wall-clock durations so reports are byte-stable")

    parser = argparse.ArgumentParser(prog="milnor-verify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def triple(sp, required=True):
        for name in ("p", "q", "r"):
            sp.add_argument(f"--{name}", type=int, required=required)

    sp = sub.add_parser("tpqr", parents=[common], help="invariants of one T_pqr lattice")
    triple(sp)
    sp = sub.add_parser("exceptional", parents=[common], help="one exceptional family")
    sp.add_argument("--name", required=True)
    sp.add_argument("--stokes-file", help="JSON lattice file with provenance, for families without built-in data")
    sp = sub.add_parser("lemma42", parents=[common], help="hermitian norm equations over ℤ[ξ]")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--target", type=int, default=2)
    sp = sub.add_parser("gamma", parents=[common], help="congruence criterion for lifts")
    triple(sp)
    sp.add_argument("--bound", type=int, default=6)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sub.add_parser("kaenders", parents=[common], help="branch Grams of curve singularities")
    sp = sub.add_parser("all", parents=[common], help="every suite over the canonical family list")
    sp.add_argument("--bound", type=int, default=6)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    return parser


def run(args: argparse.Namespace):
    c = args.command
    if c == "tpqr":
        return suites.cmd_tpqr(args.p, args.q, args.r)
    if c == "exceptional":
        return suites.cmd_exceptional(args.name, args.stokes_file)
    if c == "lemma42":
        return suites.cmd_lemma42(args.m, args.l, args.target)
    if c == "gamma":
        return suites.cmd_gamma(args.p, args.q, args.r, args.bound, args.samples, args.seed)
    if c == "kaenders":
        return suites.cmd_kaenders()
    return suites.cmd_all(args.seed, args.samples, args.bound)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except DataUnavailable as e:
        print(f"milnor-verify: data unavailable: {e}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    except INVALID as e:
        print(f"milnor-verify: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    timing = not args.no_timing
    text = report.to_json(timing) if args.format == "json" else report.to_text(timing)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
