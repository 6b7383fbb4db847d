"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 corpus/parse error, 3 oracle or
protocol error.  Defaults mirror the reference configuration: --max 3,
--threshold 0.4, all ten operators enabled.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .ast_core import ParseError, parse
from .coverage import DEFAULT_THRESHOLD, ExecOracle, OracleError, ProtocolError, SyntheticOracle
from .fuzz_engine import EmptyCorpus, FuzzConfig, baseline_corpus, fuzz_corpus, sweep_max
from .mutators import OPERATORS, NotApplicable, OperatorId, Rng, apply
from .reporting import ReportWriteError, UsageError, export, render_csv, render_json, write_mutants

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CORPUS = 2
EXIT_ORACLE = 3

log = logging.getLogger("cocofuzz")


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1
        raise _CliError(f"{self.prog}: {message}", EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cocofuzz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, oracle=True):
        p.add_argument("--corpus", required=True, help="directory of .java method files")
        p.add_argument("--seed-rng", type=int, default=0, metavar="S", help="master seed")
        if oracle:
            p.add_argument(
                "--oracle",
                default="synthetic",
                help="'synthetic' or 'exec:CMD' (JSONL child process)",
            )
            p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
            p.add_argument("--jobs", type=int, default=1, help="parallel seeds")
            p.add_argument("--out", help="directory for report and mutant files")
            p.add_argument("--format", default="json", help="stdout report format: json|csv")
            p.add_argument("--operators", help="comma-separated subset, e.g. Op1,Op5")

    p = sub.add_parser("mutate", help="apply one operator to one method")
    p.add_argument("--op", required=True, help="operator name, Op1..Op10")
    p.add_argument("--seed-rng", type=int, default=0, metavar="S")
    p.add_argument("file", help="path to a .java method file")

    p = sub.add_parser("fuzz", help="run the coverage-guided campaign")
    common(p)
    p.add_argument("--max", type=int, default=3, help="max mutations per seed")

    p = sub.add_parser("baseline", help="run the Random@K baseline")
    common(p)
    p.add_argument("--k", type=int, default=3, help="mutations per seed")

    p = sub.add_parser("sweep-max", help="mean noise fraction per mutation budget")
    common(p, oracle=False)
    p.add_argument("--from", dest="lo", type=int, default=1)
    p.add_argument("--to", dest="hi", type=int, default=10)
    p.add_argument("--out", help="write the table as CSV to this file")

    p = sub.add_parser("oracle-check", help="validate an oracle's handshake and determinism")
    p.add_argument("--oracle", required=True)

    return parser


def _load_corpus(directory: str) -> list[tuple[str, str]]:
    root = Path(directory)
    if not root.is_dir():
        raise _CliError(f"corpus directory not found: {directory}", EXIT_CORPUS)
    sources = []
    for path in sorted(root.glob("*.java")):
        try:
            sources.append((path.stem, path.read_text(encoding="utf-8")))
        except OSError as exc:
            raise _CliError(f"cannot read {path}: {exc}", EXIT_CORPUS)
    if not sources:
        raise _CliError(f"no .java files in {directory}", EXIT_CORPUS)
    return sources


def _parse_operators(spec: str | None) -> tuple[OperatorId, ...]:
    if not spec:
        return OPERATORS
    try:
        ops = tuple(OperatorId.from_name(name.strip()) for name in spec.split(","))
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_USAGE)
    if not ops:
        raise _CliError("empty operator set", EXIT_USAGE)
    return ops


def _make_oracle(spec: str):
    if spec == "synthetic":
        return SyntheticOracle()
    if spec.startswith("exec:"):
        command = spec[len("exec:") :]
        if not command.strip():
            raise _CliError("exec: oracle needs a command", EXIT_USAGE)
        try:
            return ExecOracle(command)
        except ProtocolError as exc:
            raise _CliError(f"oracle failed to start: {exc}", EXIT_ORACLE)
    raise _CliError(f"unknown oracle {spec!r} (expected synthetic or exec:CMD)", EXIT_USAGE)


def _make_config(args, max_mutations: int) -> FuzzConfig:
    try:
        return FuzzConfig(
            master_seed=args.seed_rng,
            max_mutations=max_mutations,
            activation_threshold=args.threshold,
            operator_set=_parse_operators(args.operators),
        )
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_USAGE)


def _emit_report(report, args) -> None:
    if args.out:
        out = Path(args.out)
        export(report, "json", out / "report.json")
        export(report, "csv", out / "report.csv")
        write_mutants(report.tests, out / "mutants")
        print(
            f"{report.kind}: {report.emitted} tests from {report.seed_count} seeds "
            f"-> {out}"
        )
    else:
        sys.stdout.write(render_json(report) if args.format == "json" else render_csv(report))


def _cmd_mutate(args) -> int:
    try:
        op = OperatorId.from_name(args.op)
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_USAGE)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read {args.file}: {exc}", EXIT_CORPUS)
    try:
        unit = parse(text)
    except ParseError as exc:
        raise _CliError(f"{args.file}: {exc}", EXIT_CORPUS)
    try:
        outcome = apply(unit, op, Rng(args.seed_rng))
    except NotApplicable as exc:
        raise _CliError(f"{args.file}: {exc}", EXIT_CORPUS)
    print(outcome.mutant.text)
    return EXIT_OK


def _check_format(args) -> None:
    if args.format not in ("json", "csv"):
        raise _CliError(f"unknown report format {args.format!r}", EXIT_USAGE)


def _cmd_fuzz(args) -> int:
    _check_format(args)
    cfg = _make_config(args, args.max)
    sources = _load_corpus(args.corpus)
    oracle = _make_oracle(args.oracle)
    try:
        report = fuzz_corpus(
            sources, oracle, cfg, jobs=max(1, args.jobs), oracle_label=args.oracle
        )
    finally:
        if hasattr(oracle, "close"):
            oracle.close()
    _emit_report(report, args)
    return EXIT_OK


def _cmd_baseline(args) -> int:
    _check_format(args)
    if args.k < 1:
        raise _CliError("--k must be >= 1", EXIT_USAGE)
    cfg = _make_config(args, args.k)
    sources = _load_corpus(args.corpus)
    oracle = _make_oracle(args.oracle)
    try:
        report = baseline_corpus(
            sources, oracle, cfg, k=args.k, jobs=max(1, args.jobs), oracle_label=args.oracle
        )
    finally:
        if hasattr(oracle, "close"):
            oracle.close()
    _emit_report(report, args)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.lo < 1 or args.hi < args.lo:
        raise _CliError("--from/--to must satisfy 1 <= from <= to", EXIT_USAGE)
    sources = _load_corpus(args.corpus)
    rows = sweep_max(sources, list(range(args.lo, args.hi + 1)), Rng(args.seed_rng))
    lines = ["max_mutations,mean_noise_fraction"]
    lines += [f"{m},{noise}" for m, noise in rows]
    table = "\n".join(lines) + "\n"
    if args.out:
        try:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
            Path(args.out).write_text(table, encoding="utf-8")
        except OSError as exc:
            raise _CliError(f"cannot write {args.out}: {exc}", EXIT_CORPUS)
    sys.stdout.write(table)
    return EXIT_OK


_PROBE_PROGRAM = "int probe(int a){ int x = a + 1; return x; }"


def _cmd_oracle_check(args) -> int:
    oracle = _make_oracle(args.oracle)
    try:
        first = oracle.activations(_PROBE_PROGRAM)
        second = oracle.activations(_PROBE_PROGRAM)
        if first != second:
            raise _CliError("oracle is not deterministic: identical queries differ", EXIT_ORACLE)
        sizes = tuple(len(layer) for layer in first.layers)
        if sizes != tuple(oracle.topology):
            raise _CliError(
                f"layer sizes {sizes} do not match topology {tuple(oracle.topology)}",
                EXIT_ORACLE,
            )
    finally:
        if hasattr(oracle, "close"):
            oracle.close()
    print(f"oracle ok: topology {list(oracle.topology)}, deterministic")
    return EXIT_OK


_COMMANDS = {
    "mutate": _cmd_mutate,
    "fuzz": _cmd_fuzz,
    "baseline": _cmd_baseline,
    "sweep-max": _cmd_sweep,
    "oracle-check": _cmd_oracle_check,
}


def run(argv=None) -> int:
    level = os.environ.get("COCOFUZZ_LOG", "WARNING").upper()
    if level not in ("CRITICAL", "FATAL", "ERROR", "WARN", "WARNING", "INFO", "DEBUG", "NOTSET"):
        level = "WARNING"
    logging.basicConfig(level=level)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _CliError as exc:
        print(f"cocofuzz: {exc}", file=sys.stderr)
        return exc.code
    except UsageError as exc:
        print(f"cocofuzz: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmptyCorpus as exc:
        print(f"cocofuzz: {exc}", file=sys.stderr)
        return EXIT_CORPUS
    except ProtocolError as exc:
        print(f"cocofuzz: protocol error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except OracleError as exc:
        print(f"cocofuzz: oracle error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except ReportWriteError as exc:
        print(f"cocofuzz: {exc}", file=sys.stderr)
        return EXIT_CORPUS


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
