"""Neuron-activation analysis and coverage oracles.

Raw per-layer activations come from a CoverageOracle (a deterministic model
stand-in, or an external process speaking newline-delimited JSON).  All
scaling and thresholding happens here so one activation rule governs every
oracle: per layer, outputs are min-max scaled to [0, 1] and a neuron counts
as activated iff its scaled value is strictly greater than the threshold.
"""

from __future__ import annotations

import hashlib
import json
import logging
import queue
import shlex
import subprocess
import threading
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .ast_core import tokenize

__all__ = [
    "NeuronId",
    "NeuronSet",
    "ActivationVector",
    "CoverageOracle",
    "SyntheticOracle",
    "ExecOracle",
    "OracleError",
    "ProtocolError",
    "scale_and_threshold",
    "new_neurons",
    "jaccard_distance",
    "coverage_ratio",
    "DEFAULT_THRESHOLD",
]

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.4

NeuronId = tuple[int, int]  # (layer_index, position)
NeuronSet = frozenset  # of NeuronId


class OracleError(RuntimeError):
    """An oracle failed to produce activations for an input."""


class ProtocolError(OracleError):
    """The external-oracle wire protocol was violated; aborts the campaign."""


@dataclass(frozen=True)
class ActivationVector:
    layers: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.layers:
            raise ValueError("activation vector needs at least one layer")


@runtime_checkable
class CoverageOracle(Protocol):
    """Deterministic source of raw per-layer activations for program text."""

    topology: tuple[int, ...]
    concurrent_safe: bool

    def activations(self, program: str) -> ActivationVector: ...


def scale_and_threshold(raw: ActivationVector, threshold: float = DEFAULT_THRESHOLD) -> NeuronSet:
    """Min-max scale each layer to [0, 1]; activated iff scaled > threshold.

    A constant layer (max == min) carries no signal: all its neurons scale
    to 0 and stay inactivated.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    activated = set()
    for layer_index, layer in enumerate(raw.layers):
        lo = min(layer)
        hi = max(layer)
        if hi == lo:
            continue
        span = hi - lo
        for position, value in enumerate(layer):
            if (value - lo) / span > threshold:
                activated.add((layer_index, position))
    return frozenset(activated)


def new_neurons(current: NeuronSet, baseline: NeuronSet) -> NeuronSet:
    """Neurons activated now but absent from the accumulated baseline."""
    return frozenset(current) - frozenset(baseline)


def jaccard_distance(a: NeuronSet, b: NeuronSet) -> float:
    """1 - |a n b| / |a u b|; two empty sets count as complete overlap."""
    union = frozenset(a) | frozenset(b)
    if not union:
        log.debug("jaccard_distance of two empty sets, defined as 0.0")
        return 0.0
    return 1.0 - len(frozenset(a) & frozenset(b)) / len(union)


def coverage_ratio(s: NeuronSet, topology: Sequence[int]) -> float:
    """Fraction of the oracle's neurons present in the set."""
    total = sum(topology)
    return len(s) / total if total else 0.0


# ---- synthetic oracle --------------------------------------------------------


def _stable_hash(data: str, salt: bytes) -> int:
    digest = hashlib.blake2b(data.encode("utf-8"), digest_size=8, salt=salt).digest()
    return int.from_bytes(digest, "big")


class SyntheticOracle:
    """Deterministic model stand-in: hashed token trigrams through a fixed
    random projection with a tanh nonlinearity per layer.

    Its only contracts are determinism (same text, same activations, across
    process restarts) and sensitivity to token-multiset changes.
    """

    FEATURE_DIM = 256

    def __init__(self, neurons: int = 512, layers: int = 4, seed: int = 1377):
        if neurons < layers or layers < 1:
            raise ValueError("need at least one neuron per layer")
        base, extra = divmod(neurons, layers)
        self.topology = tuple(base + (1 if i < extra else 0) for i in range(layers))
        self.concurrent_safe = True
        self._salt = seed.to_bytes(8, "big", signed=False)
        rng = np.random.default_rng(seed)
        self._weights = []
        self._biases = []
        fan_in = self.FEATURE_DIM
        for size in self.topology:
            self._weights.append(rng.standard_normal((size, fan_in)))
            self._biases.append(rng.standard_normal(size) * 0.1)
            fan_in = size

    def _features(self, program: str) -> np.ndarray:
        lexemes = [t.lexeme for t in tokenize(program, strict=False)]
        padded = ["^", "^", *lexemes, "$", "$"]
        counts = np.zeros(self.FEATURE_DIM)
        for i in range(len(padded) - 2):
            h = _stable_hash("\x1f".join(padded[i : i + 3]), self._salt)
            sign = 1.0 if h & 1 else -1.0
            counts[(h >> 1) % self.FEATURE_DIM] += sign
        norm = np.linalg.norm(counts)
        return counts / norm if norm > 0 else counts

    def activations(self, program: str) -> ActivationVector:
        h = self._features(program)
        layers = []
        for w, b in zip(self._weights, self._biases):
            h = np.tanh(w @ h / np.sqrt(len(h)) * 4.0 + b)
            layers.append(tuple(float(v) for v in h))
        return ActivationVector(tuple(layers))


# ---- external oracle over stdio ---------------------------------------------


class ExecOracle:
    """Client for the newline-delimited JSON oracle protocol.

    Handshake: the child writes `{"topology": [sizes...]}` first.  Each
    request `{"id": n, "program": text}` must be answered by `{"id": n,
    "layers": [[floats...], ...]}` with layer sizes matching the handshake.
    Any deviation is a ProtocolError; the child is never restarted.
    """

    def __init__(self, command: str | Sequence[str], timeout: float = 30.0):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not argv:
            raise ProtocolError("empty oracle command")
        self._timeout = timeout
        try:
            self._proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise ProtocolError(f"cannot start oracle {argv[0]!r}: {exc}") from exc
        self.concurrent_safe = False
        self._next_id = 0
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._reader = threading.Thread(target=self._pump_stdout, daemon=True)
        self._reader.start()
        try:
            handshake = self._read_line()
            topology = handshake.get("topology")
            if (
                not isinstance(topology, list)
                or not topology
                or not all(isinstance(n, int) and n > 0 for n in topology)
            ):
                raise ProtocolError(f"bad handshake: {handshake!r}")
        except ProtocolError:
            self.close()
            raise
        self.topology = tuple(topology)

    def _pump_stdout(self) -> None:
        try:
            for line in self._proc.stdout:
                self._lines.put(line)
        except ValueError:
            pass  # stdout closed during shutdown
        finally:
            self._lines.put(None)

    def _read_line(self) -> dict:
        try:
            line = self._lines.get(timeout=self._timeout)
        except queue.Empty:
            raise ProtocolError(f"oracle sent nothing within {self._timeout}s") from None
        if line is None:
            code = self._proc.poll()
            raise ProtocolError(f"oracle closed its stdout (exit code {code})")
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"oracle sent malformed JSON: {line!r}") from exc
        if not isinstance(message, dict):
            raise ProtocolError(f"oracle sent a non-object message: {line!r}")
        return message

    def activations(self, program: str) -> ActivationVector:
        self._next_id += 1
        request_id = self._next_id
        try:
            self._proc.stdin.write(json.dumps({"id": request_id, "program": program}) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProtocolError(f"oracle pipe closed: {exc}") from exc
        response = self._read_line()
        if response.get("id") != request_id:
            raise ProtocolError(
                f"response id {response.get('id')!r} does not match request {request_id}"
            )
        if "error" in response:
            raise ProtocolError(f"oracle reported an error: {response['error']!r}")
        layers = response.get("layers")
        if not isinstance(layers, list):
            raise ProtocolError("response has no 'layers' list")
        if tuple(len(layer) for layer in layers) != self.topology:
            raise ProtocolError(
                f"layer sizes {[len(l) for l in layers]} do not match handshake "
                f"topology {list(self.topology)}"
            )
        try:
            vec = ActivationVector(tuple(tuple(float(v) for v in layer) for layer in layers))
        except (TypeError, ValueError) as exc:
            raise ProtocolError(f"non-numeric activation payload: {exc}") from exc
        return vec

    def close(self) -> None:
        proc = getattr(self, "_proc", None)
        if proc is None:
            return
        for stream in (proc.stdin, proc.stdout):
            if stream:
                try:
                    stream.close()
                except OSError:
                    pass
        proc.terminate()
        try:
            proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()

    def __enter__(self) -> "ExecOracle":
        return self

    def __exit__(self, *_exc) -> None:
        self.close()
