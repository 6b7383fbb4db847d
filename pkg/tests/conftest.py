from __future__ import annotations

from pathlib import Path

import pytest

from cocofuzz import OperatorId, Rng, apply, parse

CORPUS_DIR = Path(__file__).parent / "corpus"
FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_sources() -> list[tuple[str, str]]:
    sources = [
        (path.stem, path.read_text(encoding="utf-8"))
        for path in sorted(CORPUS_DIR.glob("*.java"))
    ]
    assert len(sources) >= 50
    return sources


@pytest.fixture(scope="session")
def corpus_units(corpus_sources):
    return [(seed_id, parse(text)) for seed_id, text in corpus_sources]


def extend_corpus(base: list[tuple[str, str]], n: int) -> list[tuple[str, str]]:
    """Grow a corpus to n seeds with deterministic dead-store variants."""
    out = list(base)
    i = 0
    while len(out) < n:
        seed_id, text = base[i % len(base)]
        variant = apply(parse(text), OperatorId.Op1, Rng(9000 + i)).mutant.text
        out.append((f"{seed_id}__v{i:03d}", variant))
        i += 1
    return out[:n]


# ---- acceptance summary: one pass/fail line per criterion -------------------

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE_RESULTS.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in _ACCEPTANCE_RESULTS:
            status = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"[{status}] {name}")
