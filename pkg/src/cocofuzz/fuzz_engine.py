"""Coverage-guided test generation and the Random@K baseline.

Per seed, each iteration tries every configured operator on the current
program, keeps the mutant activating the most neurons not yet seen for that
seed (first strict maximum wins, operators tried in Op1..Op10 order), and
stops early when no mutant gains anything.  A seed is mutated at most
`max_mutations` times accumulatively.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .ast_core import ParseError, SourceUnit, parse
from .coverage import (
    DEFAULT_THRESHOLD,
    CoverageOracle,
    NeuronSet,
    OracleError,
    ProtocolError,
    jaccard_distance,
    scale_and_threshold,
)
from .mutators import (
    OPERATORS,
    MutationOutcome,
    OperatorId,
    Rng,
    applicable,
    apply,
    noise_fraction,
)
from .reporting import FuzzReport, corpus_fingerprint, summarize

__all__ = [
    "FuzzConfig",
    "SeedEntry",
    "GeneratedTest",
    "BaselineTest",
    "EmptyCorpus",
    "InternalError",
    "fuzz_seed",
    "fuzz_corpus",
    "random_at_k",
    "baseline_corpus",
    "sweep_max",
]


class EmptyCorpus(ValueError):
    """The corpus has no usable seed programs."""


class InternalError(RuntimeError):
    """A state the engine's contracts rule out was reached."""


@dataclass(frozen=True)
class FuzzConfig:
    master_seed: int
    max_mutations: int = 3
    activation_threshold: float = DEFAULT_THRESHOLD
    operator_set: tuple[OperatorId, ...] = OPERATORS

    def __post_init__(self):
        if self.max_mutations < 1:
            raise ValueError("max_mutations must be >= 1")
        if not 0.0 <= self.activation_threshold <= 1.0:
            raise ValueError("activation_threshold must be in [0, 1]")
        if not self.operator_set:
            raise ValueError("operator_set must not be empty")
        if len(set(self.operator_set)) != len(self.operator_set):
            raise ValueError("operator_set must not contain duplicates")

    def echo(self) -> dict:
        return {
            "master_seed": self.master_seed,
            "max_mutations": self.max_mutations,
            "activation_threshold": self.activation_threshold,
            "operator_set": [str(op) for op in self.operator_set],
        }


@dataclass(frozen=True)
class SeedEntry:
    id: str
    unit: SourceUnit
    baseline_nc: NeuronSet


@dataclass(frozen=True)
class GeneratedTest:
    """One emitted test: a mutant that activated previously-unseen neurons."""

    outcome: MutationOutcome
    new_neuron_count: int  # > 0: zero-gain mutants are never emitted
    nc_after: NeuronSet  # accumulated activation set of the seed lineage
    operator_trace: tuple[OperatorId, ...]
    activated: NeuronSet  # the mutant's own activation set
    new_vs_seed: int
    jaccard_vs_seed: float
    noise_vs_seed: float


@dataclass(frozen=True)
class BaselineTest:
    """One Random@K mutant; emitted unconditionally, counts are vs the seed."""

    outcome: MutationOutcome
    new_neuron_count: int  # may be 0: the baseline does not filter
    nc_after: NeuronSet
    operator_trace: tuple[OperatorId, ...]
    activated: NeuronSet
    new_vs_seed: int
    jaccard_vs_seed: float
    noise_vs_seed: float


class _CachedOracle:
    """Memoizes activated-neuron sets per program text for one campaign.

    Oracles are deterministic, so caching never changes results; it only
    avoids re-evaluating recurring mutants.  Non-concurrent-safe oracles are
    serialized behind a lock.
    """

    def __init__(self, oracle: CoverageOracle, threshold: float):
        self._oracle = oracle
        self._threshold = threshold
        self._memo: dict[str, NeuronSet] = {}
        self._lock = threading.Lock()
        self._serialize = not getattr(oracle, "concurrent_safe", False)
        self.requests = 0
        self.evaluations = 0  # actual oracle invocations (cache misses)
        self.topology = tuple(oracle.topology)

    def activated(self, program: str) -> NeuronSet:
        with self._lock:
            self.requests += 1
            cached = self._memo.get(program)
        if cached is not None:
            return cached
        if self._serialize:
            with self._lock:
                raw = self._oracle.activations(program)
        else:
            raw = self._oracle.activations(program)
        acts = scale_and_threshold(raw, self._threshold)
        with self._lock:
            self.evaluations += 1
            self._memo[program] = acts
        return acts


def fuzz_seed(
    seed: SeedEntry,
    oracle: CoverageOracle,
    cfg: FuzzConfig,
    rng: Rng,
    cache: _CachedOracle | None = None,
) -> list[GeneratedTest]:
    """Run the guided search for one seed; at most cfg.max_mutations tests."""
    if cache is None:
        cache = _CachedOracle(oracle, cfg.activation_threshold)
    nc_p = frozenset(seed.baseline_nc)
    current = seed.unit
    trace: list[OperatorId] = []
    tests: list[GeneratedTest] = []
    for generation in range(1, cfg.max_mutations + 1):
        best_count = 0
        best: tuple[NeuronSet, MutationOutcome] | None = None
        for op in cfg.operator_set:
            if not applicable(current, op):
                continue
            outcome = apply(current, op, rng, seed_id=seed.id, generation=generation)
            activated = cache.activated(outcome.mutant.text)
            if len(activated - nc_p) > best_count:
                best_count = len(activated - nc_p)
                best = (activated, outcome)
        if best is None:
            break
        activated, outcome = best
        nc_p = (activated - nc_p) | nc_p
        current = outcome.mutant
        trace.append(outcome.operator)
        tests.append(
            GeneratedTest(
                outcome=outcome,
                new_neuron_count=best_count,
                nc_after=nc_p,
                operator_trace=tuple(trace),
                activated=activated,
                new_vs_seed=len(activated - seed.baseline_nc),
                jaccard_vs_seed=jaccard_distance(activated, seed.baseline_nc),
                noise_vs_seed=noise_fraction(seed.unit, current),
            )
        )
    return tests


def _prepare_seeds(sources) -> tuple[list, list[dict]]:
    """Parse (id, text) pairs in id order; collect per-seed parse errors."""
    if not sources:
        raise EmptyCorpus("corpus contains no seed programs")
    ordered = sorted(sources, key=lambda item: item[0])
    entries = []
    errors = []
    for index, (seed_id, text) in enumerate(ordered):
        try:
            entries.append((index, seed_id, parse(text)))
        except ParseError as exc:
            errors.append({"seed_id": seed_id, "error": f"parse error: {exc}"})
    if not entries:
        raise EmptyCorpus("no seed program in the corpus parses")
    return entries, errors


def _run_campaign(sources, oracle, cfg, rng, jobs, per_seed, kind, extra_config, oracle_label):
    entries, errors = _prepare_seeds(sources)
    cache = _CachedOracle(oracle, cfg.activation_threshold)
    base_rng = rng if rng is not None else Rng(cfg.master_seed)

    def run_one(entry):
        index, seed_id, unit = entry
        seed_rng = base_rng.child(index)
        try:
            baseline = cache.activated(unit.text)
            seed = SeedEntry(seed_id, unit, baseline)
            return seed_id, baseline, per_seed(seed, cache, seed_rng), None
        except ProtocolError:
            raise
        except OracleError as exc:
            return seed_id, None, [], f"oracle error: {exc}"

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, entries))
    else:
        results = [run_one(entry) for entry in entries]

    tests = []
    baselines = {}
    seed_order = []
    for seed_id, baseline, seed_tests, error in results:
        seed_order.append(seed_id)
        if error is not None:
            errors.append({"seed_id": seed_id, "error": error})
            continue
        baselines[seed_id] = baseline
        tests.extend(seed_tests)

    config = dict(cfg.echo())
    config["oracle"] = oracle_label
    config.update(extra_config)
    return summarize(
        tests,
        baselines,
        topology=cache.topology,
        config=config,
        fingerprint=corpus_fingerprint(sources),
        errors=errors,
        seed_order=seed_order,
        kind=kind,
    )


def fuzz_corpus(
    sources,
    oracle: CoverageOracle,
    cfg: FuzzConfig,
    rng: Rng | None = None,
    jobs: int = 1,
    oracle_label: str = "synthetic",
) -> FuzzReport:
    """Guided campaign over (seed_id, text) pairs; returns the full report.

    Seeds are processed in id order with independent per-seed rng streams,
    so --jobs parallelism cannot change the report.  Per-seed oracle errors
    are recorded and skipped; protocol violations abort the campaign.
    """

    def per_seed(seed, cache, seed_rng):
        return fuzz_seed(seed, oracle, cfg, seed_rng, cache=cache)

    return _run_campaign(
        sources, oracle, cfg, rng, jobs, per_seed, "nc-guided", {}, oracle_label
    )


def random_at_k(
    seed: SeedEntry,
    k: int,
    rng: Rng,
    operator_set: tuple[OperatorId, ...] = OPERATORS,
) -> list[MutationOutcome]:
    """Chain of k uniformly chosen mutations; every intermediate is emitted."""
    if k < 1:
        raise ValueError("k must be >= 1")
    current = seed.unit
    outcomes = []
    for generation in range(1, k + 1):
        available = [op for op in operator_set if applicable(current, op)]
        if not available:
            raise InternalError("no mutation operator applies (Op1 always should)")
        op = available[rng.randrange(len(available))]
        outcome = apply(current, op, rng, seed_id=seed.id, generation=generation)
        outcomes.append(outcome)
        current = outcome.mutant
    return outcomes


def baseline_corpus(
    sources,
    oracle: CoverageOracle,
    cfg: FuzzConfig,
    k: int = 3,
    rng: Rng | None = None,
    jobs: int = 1,
    oracle_label: str = "synthetic",
) -> FuzzReport:
    """Random@K campaign with the same coverage metrics as the guided one."""

    def per_seed(seed, cache, seed_rng):
        rows = []
        nc_after = frozenset(seed.baseline_nc)
        trace: list[OperatorId] = []
        for outcome in random_at_k(seed, k, seed_rng, cfg.operator_set):
            activated = cache.activated(outcome.mutant.text)
            nc_after = nc_after | activated
            trace.append(outcome.operator)
            rows.append(
                BaselineTest(
                    outcome=outcome,
                    new_neuron_count=len(activated - seed.baseline_nc),
                    nc_after=nc_after,
                    operator_trace=tuple(trace),
                    activated=activated,
                    new_vs_seed=len(activated - seed.baseline_nc),
                    jaccard_vs_seed=jaccard_distance(activated, seed.baseline_nc),
                    noise_vs_seed=noise_fraction(seed.unit, outcome.mutant),
                )
            )
        return rows

    return _run_campaign(
        sources, oracle, cfg, rng, jobs, per_seed, "random-at-k", {"k": k}, oracle_label
    )


def sweep_max(
    sources,
    max_values: list[int],
    rng: Rng,
    operator_set: tuple[OperatorId, ...] = OPERATORS,
) -> list[tuple[int, float]]:
    """Mean noise fraction per mutation budget.

    Each seed gets one uniformly-random mutation chain of length
    max(max_values); the noise of every requested prefix length is recorded,
    so a longer budget never rewinds the chain it extends.
    """
    if not max_values:
        raise ValueError("max_values must not be empty")
    if any(m < 1 for m in max_values):
        raise ValueError("every MAX must be >= 1")
    entries, _ = _prepare_seeds(sources)
    wanted = sorted(set(max_values))
    deepest = wanted[-1]
    noise_by_max: dict[int, list[float]] = {m: [] for m in wanted}
    for index, seed_id, unit in entries:
        seed_rng = rng.child(index)
        seed = SeedEntry(seed_id, unit, frozenset())
        current = unit
        for step in range(1, deepest + 1):
            available = [op for op in operator_set if applicable(current, op)]
            if not available:
                raise InternalError("no mutation operator applies")
            op = available[seed_rng.randrange(len(available))]
            current = apply(current, op, seed_rng, seed_id=seed.id, generation=step).mutant
            if step in noise_by_max:
                noise_by_max[step].append(noise_fraction(unit, current))
    return [(m, sum(vals) / len(vals)) for m, vals in ((m, noise_by_max[m]) for m in wanted)]
