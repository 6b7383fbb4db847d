"""Campaign reports: aggregation, JSON/CSV export, mutant files.

Reports are deterministic: field order is fixed at construction, no
timestamps are embedded, and re-exporting the same report is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .coverage import coverage_ratio

__all__ = [
    "FuzzReport",
    "UsageError",
    "ReportWriteError",
    "summarize",
    "export",
    "write_mutants",
    "corpus_fingerprint",
]

CSV_HEADER = "seed_id,generation,operator,new_neurons,jaccard,noise_fraction"


class UsageError(ValueError):
    """The caller asked for something the reporting contract does not offer."""


class ReportWriteError(OSError):
    """An export failed; the message carries the offending path."""


def corpus_fingerprint(sources) -> str:
    """Content hash over (seed id, program text) pairs, order-independent."""
    h = hashlib.sha256()
    for seed_id, text in sorted(sources, key=lambda item: item[0]):
        h.update(seed_id.encode("utf-8"))
        h.update(b"\x00")
        h.update(hashlib.sha256(text.encode("utf-8")).digest())
    return h.hexdigest()


@dataclass(frozen=True)
class FuzzReport:
    schema: int
    kind: str  # "nc-guided" | "random-at-k"
    config: dict
    corpus_fingerprint: str
    topology: tuple[int, ...]
    seed_count: int
    emitted: int
    mean_coverage_ratio: float | None
    mean_new_neurons: float | None
    mean_jaccard: float | None
    mean_noise_fraction: float | None
    operator_counts: dict[str, int]
    operator_histogram: dict[str, float]  # fractions of emitted tests
    per_seed: tuple[dict, ...]
    errors: tuple[dict, ...] = ()
    tests: tuple = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "kind": self.kind,
            "config": self.config,
            "corpus_fingerprint": self.corpus_fingerprint,
            "topology": list(self.topology),
            "seed_count": self.seed_count,
            "emitted": self.emitted,
            "mean_coverage_ratio": self.mean_coverage_ratio,
            "mean_new_neurons": self.mean_new_neurons,
            "mean_jaccard": self.mean_jaccard,
            "mean_noise_fraction": self.mean_noise_fraction,
            "operator_counts": self.operator_counts,
            "operator_histogram": self.operator_histogram,
            "per_seed": list(self.per_seed),
            "errors": list(self.errors),
        }

    def csv_rows(self):
        for seed in self.per_seed:
            for test in seed["tests"]:
                yield (
                    seed["seed_id"],
                    test["generation"],
                    test["operator"],
                    test["new_neurons"],
                    test["jaccard"],
                    test["noise_fraction"],
                )


def summarize(
    tests,
    baselines,
    *,
    topology=(),
    config=None,
    fingerprint="",
    errors=(),
    seed_order=(),
    kind="nc-guided",
) -> FuzzReport:
    """Aggregate emitted tests into a report.

    All campaign statistics are arithmetic means over the test list; an empty
    list yields null aggregates (still a successful report).
    """
    by_seed: dict[str, list] = {}
    for test in tests:
        by_seed.setdefault(test.outcome.seed_id, []).append(test)

    order = list(seed_order) if seed_order else sorted(baselines)
    per_seed = []
    for seed_id in order:
        if seed_id not in baselines:
            continue  # recorded under errors
        baseline = baselines[seed_id]
        seed_tests = by_seed.get(seed_id, [])
        before = coverage_ratio(baseline, topology)
        after = (
            coverage_ratio(seed_tests[-1].nc_after, topology) if seed_tests else before
        )
        per_seed.append(
            {
                "seed_id": seed_id,
                "coverage_before": before,
                "coverage_after": after,
                "tests": [
                    {
                        "generation": t.outcome.generation,
                        "operator": str(t.outcome.operator),
                        "operator_trace": [str(op) for op in t.operator_trace],
                        "new_neurons": t.new_neuron_count,
                        "new_vs_seed": t.new_vs_seed,
                        "coverage": coverage_ratio(t.activated, topology),
                        "jaccard": t.jaccard_vs_seed,
                        "noise_fraction": t.noise_vs_seed,
                    }
                    for t in seed_tests
                ],
            }
        )

    test_list = list(tests)
    emitted = len(test_list)
    counts: dict[str, int] = {}
    for t in test_list:
        name = str(t.outcome.operator)
        counts[name] = counts.get(name, 0) + 1
    counts = dict(sorted(counts.items(), key=lambda kv: int(kv[0][2:])))

    def mean(values) -> float | None:
        values = list(values)
        return sum(values) / len(values) if values else None

    return FuzzReport(
        schema=1,
        kind=kind,
        config=dict(config or {}),
        corpus_fingerprint=fingerprint,
        topology=tuple(topology),
        seed_count=len(per_seed),
        emitted=emitted,
        mean_coverage_ratio=mean(coverage_ratio(t.activated, topology) for t in test_list),
        mean_new_neurons=mean(t.new_neuron_count for t in test_list),
        mean_jaccard=mean(t.jaccard_vs_seed for t in test_list),
        mean_noise_fraction=mean(t.noise_vs_seed for t in test_list),
        operator_counts=counts,
        operator_histogram={op: n / emitted for op, n in counts.items()} if emitted else {},
        per_seed=tuple(per_seed),
        errors=tuple(errors),
        tests=tuple(test_list),
    )


def render_json(report: FuzzReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def render_csv(report: FuzzReport) -> str:
    lines = [CSV_HEADER]
    for row in report.csv_rows():
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def export(report: FuzzReport, format: str, path) -> None:
    """Write the report to path as json or csv (stable field ordering)."""
    if format == "json":
        payload = render_json(report)
    elif format == "csv":
        payload = render_csv(report)
    else:
        raise UsageError(f"unknown report format {format!r} (expected json or csv)")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(payload, encoding="utf-8")
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {path}: {exc}") from exc


def write_mutants(tests, outdir) -> list[Path]:
    """Write each mutant as <outdir>/<seed_id>/gen<k>_<op>.java."""
    outdir = Path(outdir)
    written = []
    for test in tests:
        outcome = test.outcome
        target = outdir / outcome.seed_id / f"gen{outcome.generation}_{outcome.operator}.java"
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(outcome.mutant.text, encoding="utf-8")
        except OSError as exc:
            raise ReportWriteError(f"cannot write mutant to {target}: {exc}") from exc
        written.append(target)
    return written
