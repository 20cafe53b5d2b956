"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 a checked inequality or identity failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from functools import lru_cache
from pathlib import Path

from . import chang, info
from . import fourier as fr

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _add_set_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--set", metavar="FILE", help="JSON set spec file")
    g.add_argument("--inline", metavar="JSON", help="inline JSON set spec")


def _add_output_args(p: argparse.ArgumentParser, csv_ok: bool = False) -> None:
    choices = ["json", "csv"] if csv_ok else ["json"]
    p.add_argument("--format", choices=choices, default="json")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


@lru_cache(maxsize=None)
def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="changcube", description="Chang's lemma and KL-divergence checks")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="check W1 <= 2 a^2 ln(1/a) for one set")
    _add_set_args(p)
    _add_output_args(p)

    p = sub.add_parser("trace", help="replay the entropy/Pinsker chain for one set")
    _add_set_args(p)
    _add_output_args(p)

    p = sub.add_parser("level-k", help="evaluate the level-k inequality for one set")
    _add_set_args(p)
    p.add_argument("--k", type=int, required=True)
    _add_output_args(p)

    p = sub.add_parser("exhaustive", help="check every nonempty subset, n <= 4")
    p.add_argument("--n", type=int, required=True)
    _add_output_args(p, csv_ok=True)

    p = sub.add_parser("sample", help="check random nonempty subsets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_output_args(p, csv_ok=True)

    p = sub.add_parser("extremal", help="maximize W1/bound over all subsets, n <= 4")
    p.add_argument("--n", type=int, required=True)
    _add_output_args(p)

    p = sub.add_parser("counterexample", help="divergence breakdown of the 2x2 pair")
    p.add_argument("--eps", type=float, required=True)
    _add_output_args(p)
    return ap


def _load_set(args) -> fr.CubeFunction:
    try:
        text = Path(args.set).read_text() if args.set else args.inline
        A = fr.parse_set_spec(text)
    except OSError as e:
        raise InputError(f"cannot read set file: {e}") from None
    except (ValueError, TypeError) as e:
        raise InputError(str(e)) from None
    if not A.is_indicator() or fr.set_size(A) == 0:
        raise InputError("empty set")
    return A


def _emit(text: str, out: str | None, stdout) -> None:
    if out:
        Path(out).write_text(text)
    else:
        stdout.write(text)


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _run(args, stdout) -> int:
    cmd = args.command
    if cmd == "verify":
        rep = chang.verify_chang(_load_set(args))
        _emit(_dump(rep.to_dict()), args.out, stdout)
        return EXIT_OK if rep.holds else EXIT_VIOLATION

    if cmd == "trace":
        A = _load_set(args)
        try:
            trace = chang.proof_trace(A)
        except chang.TraceInvariantError as e:
            print(f"trace invariant violated: {e}", file=sys.stderr)
            return EXIT_VIOLATION
        _emit(_dump(trace.to_dict()), args.out, stdout)
        return EXIT_OK

    if cmd == "level-k":
        A = _load_set(args)
        if not 1 <= args.k <= A.n:
            raise InputError(f"--k must be in [1, {A.n}]")
        rep = chang.level_k_report(A, args.k)
        _emit(_dump(rep.to_dict()), args.out, stdout)
        return EXIT_VIOLATION if rep.applicable and not rep.holds else EXIT_OK

    if cmd in ("exhaustive", "extremal"):
        if args.n > chang.EXHAUSTIVE_MAX_N:
            raise InputError(f"n={args.n} too large for exhaustive enumeration: use sample")
        if args.n < 1:
            raise InputError("--n must be positive")
        if cmd == "extremal":
            _emit(_dump(chang.extremal_search(args.n).to_dict()), args.out, stdout)
            return EXIT_OK
        summary = chang.exhaustive_verify(args.n, keep_rows=args.format == "csv")
        return _emit_summary(summary, args, stdout)

    if cmd == "sample":
        if not 1 <= args.n <= fr.MAX_N:
            raise InputError(f"--n must be in [1, {fr.MAX_N}]")
        if args.trials < 1:
            raise InputError("--trials must be positive")
        summary = chang.sampled_verify(
            args.n, args.trials, args.seed, keep_rows=args.format == "csv"
        )
        return _emit_summary(summary, args, stdout)

    if cmd == "counterexample":
        try:
            p, q = info.counterexample_pair(args.eps)
        except ValueError as e:
            raise InputError(str(e)) from None
        bd = info.raw_breakdown(p, q)
        _emit(_dump({"eps": args.eps, **bd.to_dict()}), args.out, stdout)
        return EXIT_OK

    raise InputError(f"unknown command {cmd!r}")  # pragma: no cover


def _emit_summary(summary: chang.SweepSummary, args, stdout) -> int:
    if args.format == "csv":
        if args.out:
            with open(args.out, "w", newline="") as fh:
                chang.write_sweep_csv(summary, fh)
            stdout.write(_dump(summary.to_dict()))
        else:
            chang.write_sweep_csv(summary, stdout)
    else:
        _emit(_dump(summary.to_dict()), args.out, stdout)
    return EXIT_OK if summary.violations == 0 else EXIT_VIOLATION


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return _run(args, stdout)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
