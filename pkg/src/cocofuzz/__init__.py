"""Coverage-guided metamorphic fuzzing for neural code models.

Generates semantic-preserving mutants of Java methods and searches mutation
sequences that activate previously-unseen neurons in a pluggable model
oracle.
"""

from .ast_core import (
    BlockScope,
    LocalVariable,
    ParseError,
    SourceUnit,
    StatementNode,
    Token,
    list_blocks,
    parse,
    render,
    token_count,
    tokenize,
)
from .coverage import (
    ActivationVector,
    CoverageOracle,
    ExecOracle,
    OracleError,
    ProtocolError,
    SyntheticOracle,
    coverage_ratio,
    jaccard_distance,
    new_neurons,
    scale_and_threshold,
)
from .fuzz_engine import (
    BaselineTest,
    EmptyCorpus,
    FuzzConfig,
    GeneratedTest,
    InternalError,
    SeedEntry,
    baseline_corpus,
    fuzz_corpus,
    fuzz_seed,
    random_at_k,
    sweep_max,
)
from .mutators import (
    OPERATORS,
    InternalRenderError,
    MutationOutcome,
    NotApplicable,
    OperatorId,
    Rng,
    applicable,
    apply,
    fresh_identifier,
    noise_fraction,
)
from .reporting import FuzzReport, UsageError, corpus_fingerprint, export, summarize, write_mutants

__version__ = "0.1.0"
