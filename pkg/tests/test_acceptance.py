"""Acceptance suite: one test per release criterion.

The conftest terminal hook prints one PASS/FAIL line per criterion at the
end of the run.  Quantitative anchors use wide tolerances because the
fixture corpus differs from any particular external dataset; structural
criteria are exact.
"""

import itertools
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

from cocofuzz import (
    ExecOracle,
    FuzzConfig,
    OperatorId,
    Rng,
    SeedEntry,
    SyntheticOracle,
    applicable,
    apply,
    fuzz_corpus,
    fuzz_seed,
    jaccard_distance,
    new_neurons,
    parse,
    random_at_k,
    scale_and_threshold,
    summarize,
    sweep_max,
    token_count,
)
from cocofuzz.coverage import ActivationVector
from cocofuzz.fuzz_engine import _CachedOracle
from cocofuzz.reporting import render_json

from conftest import extend_corpus
from test_fuzz_engine import MICRO_METHODS, brute_force_greedy

ADAPTER_SRC = Path(__file__).resolve().parents[1] / "adapter" / "src"


def test_semantic_preservation_suite(corpus_units):
    started = time.monotonic()
    assert len(corpus_units) >= 50
    mutants = 0
    for index, (_, unit) in enumerate(corpus_units):
        original = Counter(t.lexeme for t in unit.tokens)
        for op in OperatorId:
            if not applicable(unit, op):
                continue
            outcome = apply(unit, op, Rng(500 + index))  # apply re-parses or raises
            mutants += 1
            mutated = Counter(t.lexeme for t in outcome.mutant.tokens)
            if op is OperatorId.Op10:
                assert token_count(outcome.mutant) == token_count(unit)
            else:
                assert not original - mutated  # original multiset is preserved
    elapsed = time.monotonic() - started
    assert mutants >= 450  # 50+ methods x mostly-applicable operators
    assert elapsed < 10.0, f"suite took {elapsed:.1f}s"


def test_noise_sweep_anchor(corpus_sources):
    rows = sweep_max(corpus_sources, list(range(1, 11)), Rng(7))
    means = [mean for _, mean in rows]
    assert all(a < b for a, b in zip(means, means[1:])), means
    assert 0.05 <= means[0] <= 0.20, f"MAX=1 mean noise {means[0]:.4f}"
    assert means[2] < 0.35, f"MAX=3 mean noise {means[2]:.4f}"


def test_guided_search_invariants_on_100_seeds(corpus_sources):
    started = time.monotonic()
    sources = extend_corpus(corpus_sources, 100)
    cfg = FuzzConfig(master_seed=7)
    oracle = SyntheticOracle()
    report = fuzz_corpus(sources, oracle, cfg)
    assert not report.errors
    by_seed = {}
    for test in report.tests:
        by_seed.setdefault(test.outcome.seed_id, []).append(test)
    assert by_seed
    for seed_id, tests in by_seed.items():
        assert len(tests) <= cfg.max_mutations
        previous = None
        for test in tests:
            assert test.new_neuron_count >= 1
            if previous is not None:
                assert previous < test.nc_after  # strictly growing accumulation
            previous = test.nc_after
    replay = fuzz_corpus(sources, oracle, cfg)
    assert render_json(report) == render_json(replay)
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"runs took {elapsed:.1f}s"


def test_greedy_equivalence_on_micro_corpora():
    operator_set = (OperatorId.Op1, OperatorId.Op5)
    oracle = SyntheticOracle(neurons=32, layers=2, seed=5)
    cfg = FuzzConfig(master_seed=21, operator_set=operator_set)
    agreements = 0
    for index, text in enumerate(MICRO_METHODS):
        unit = parse(text)
        cache = _CachedOracle(oracle, cfg.activation_threshold)
        seed = SeedEntry(f"micro{index}", unit, cache.activated(unit.text))
        engine = [
            (t.outcome.operator, t.outcome.mutant.text)
            for t in fuzz_seed(seed, oracle, cfg, Rng(100 + index), cache=cache)
        ]
        expected = brute_force_greedy(
            unit, oracle, operator_set, cfg.max_mutations, Rng(100 + index)
        )
        if engine == expected:
            agreements += 1
    assert agreements == len(MICRO_METHODS) == 10


def test_metric_unit_anchors():
    assert jaccard_distance({1, 2, 3}, {2, 3, 4}) == 0.5
    raw = ActivationVector(((0.0, 5.0, 10.0),))
    assert scale_and_threshold(raw, 0.4) == {(0, 1), (0, 2)}
    universe = list(range(5))
    subsets = [
        frozenset(c) for n in range(6) for c in itertools.combinations(universe, n)
    ]
    for current in subsets:
        for baseline in subsets:
            gained = new_neurons(current, baseline)
            assert gained & baseline == frozenset()
            assert gained <= current
            assert gained == current - baseline


def test_baseline_contract_on_1000_seeds(corpus_sources):
    sources = extend_corpus(corpus_sources, 1000)
    rng = Rng(7)
    total = 0
    for index, (seed_id, text) in enumerate(sources):
        seed = SeedEntry(seed_id, parse(text), frozenset())
        outcomes = random_at_k(seed, 3, rng.child(index))
        assert len(outcomes) == 3
        assert [o.generation for o in outcomes] == [1, 2, 3]
        total += len(outcomes)
    assert total == 3000


def test_guided_beats_baseline_on_200_seeds(corpus_sources):
    sources = extend_corpus(corpus_sources, 200)
    oracle = SyntheticOracle()
    cfg = FuzzConfig(master_seed=7)
    guided = fuzz_corpus(sources, oracle, cfg)
    from cocofuzz import baseline_corpus

    baseline = baseline_corpus(sources, oracle, cfg, k=3)
    assert guided.mean_coverage_ratio is not None
    assert baseline.mean_coverage_ratio is not None
    assert guided.mean_coverage_ratio >= baseline.mean_coverage_ratio, (
        guided.mean_coverage_ratio,
        baseline.mean_coverage_ratio,
    )
    assert guided.mean_jaccard >= baseline.mean_jaccard, (
        guided.mean_jaccard,
        baseline.mean_jaccard,
    )


@pytest.mark.skipif(not ADAPTER_SRC.is_dir(), reason="adapter package not present")
def test_secondary_adapter_protocol_integration(corpus_sources, monkeypatch):
    monkeypatch.setenv("PYTHONPATH", str(ADAPTER_SRC))
    command = [sys.executable, "-m", "codemodel_adapter"]

    # handshake + determinism, as oracle-check performs them
    with ExecOracle(command) as oracle:
        topology = oracle.topology
        probe = "int probe(int a){ int x = a + 1; return x; }"
        first = oracle.activations(probe)
        second = oracle.activations(probe)
        assert first == second
        assert tuple(len(l) for l in first.layers) == topology

    from cocofuzz.cli import main

    cmd = f"exec:{sys.executable} -m codemodel_adapter"
    assert main(["oracle-check", "--oracle", cmd]) == 0

    sources = corpus_sources[:20]
    cfg = FuzzConfig(master_seed=7)
    with ExecOracle(command) as oracle:
        report = fuzz_corpus(sources, oracle, cfg, oracle_label=cmd)
    # every response already passed the engine's per-message topology check,
    # or the campaign would have aborted with a ProtocolError
    assert report.topology == topology
    assert not report.errors
    by_seed = {}
    for test in report.tests:
        by_seed.setdefault(test.outcome.seed_id, []).append(test)
    for tests in by_seed.values():
        assert len(tests) <= cfg.max_mutations
        previous = None
        for test in tests:
            assert test.new_neuron_count >= 1
            if previous is not None:
                assert previous < test.nc_after
            previous = test.nc_after
