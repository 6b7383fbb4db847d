"""A toy token-level code model served over stdin/stdout.

Protocol (newline-delimited JSON, one message per line, flushed):
  handshake  -> {"topology": [layer sizes...]}
  request    <- {"id": <int>, "program": <string>}
  response   -> {"id": <int>, "layers": [[<float>...], ...]}
  bad input  -> {"id": <int|null>, "error": <string>}   (process keeps serving)

The adapter never scales or thresholds: responses carry raw activations so
the consuming engine owns the single activation rule.  Weights come from a
fixed seed (or an .npz file), and inference has no stochastic parts, so the
same program always yields identical activations.
"""

from __future__ import annotations

import hashlib
import json
import re
import sys

import numpy as np

__all__ = ["ToyCodeModel", "serve", "save_weights"]

__version__ = "0.1.0"

_TOKEN_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*|\d+\.?\d*|\S")
_HASH_SALT = b"tokvocab"


def _token_id(token: str, vocab_size: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, salt=_HASH_SALT).digest()
    return int.from_bytes(digest, "big") % vocab_size


class ToyCodeModel:
    """Hashed-vocabulary embedding followed by two dense tanh layers.

    Reported layers: the mean-pooled embedding, then each hidden layer.
    """

    def __init__(
        self,
        vocab_size: int = 1024,
        embed_dim: int = 64,
        hidden_dims: tuple[int, int] = (48, 32),
        seed: int = 20240,
        weights: dict[str, np.ndarray] | None = None,
    ):
        self.vocab_size = vocab_size
        if weights is None:
            rng = np.random.default_rng(seed)
            weights = {
                "embedding": rng.standard_normal((vocab_size, embed_dim)),
                "w1": rng.standard_normal((hidden_dims[0], embed_dim)),
                "b1": rng.standard_normal(hidden_dims[0]) * 0.1,
                "w2": rng.standard_normal((hidden_dims[1], hidden_dims[0])),
                "b2": rng.standard_normal(hidden_dims[1]) * 0.1,
            }
        self.embedding = np.asarray(weights["embedding"], dtype=np.float64)
        self.w1 = np.asarray(weights["w1"], dtype=np.float64)
        self.b1 = np.asarray(weights["b1"], dtype=np.float64)
        self.w2 = np.asarray(weights["w2"], dtype=np.float64)
        self.b2 = np.asarray(weights["b2"], dtype=np.float64)
        self.topology = (
            self.embedding.shape[1],
            self.w1.shape[0],
            self.w2.shape[0],
        )

    def forward(self, program: str) -> list[list[float]]:
        tokens = _TOKEN_RE.findall(program)
        if tokens:
            ids = [_token_id(t, self.embedding.shape[0]) for t in tokens]
            pooled = self.embedding[ids].mean(axis=0)
        else:
            pooled = np.zeros(self.embedding.shape[1])
        h1 = np.tanh(self.w1 @ pooled / np.sqrt(len(pooled)) * 4.0 + self.b1)
        h2 = np.tanh(self.w2 @ h1 + self.b2)
        return [
            [float(v) for v in pooled],
            [float(v) for v in h1],
            [float(v) for v in h2],
        ]


def save_weights(model: ToyCodeModel, path) -> None:
    np.savez(
        path,
        embedding=model.embedding,
        w1=model.w1,
        b1=model.b1,
        w2=model.w2,
        b2=model.b2,
    )


def load_weights(path) -> dict[str, np.ndarray]:
    with np.load(path) as data:
        return {key: data[key] for key in ("embedding", "w1", "b1", "w2", "b2")}


def serve(model: ToyCodeModel, stdin=None, stdout=None) -> None:
    """Answer requests until stdin closes; errors never kill the loop."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    def emit(payload: dict) -> None:
        stdout.write(json.dumps(payload) + "\n")
        stdout.flush()

    emit({"topology": list(model.topology)})
    for line in stdin:
        if not line.strip():
            continue
        request_id = None
        try:
            request = json.loads(line)
            if not isinstance(request, dict):
                raise ValueError("request must be a JSON object")
            request_id = request.get("id")
            program = request["program"]
            if not isinstance(program, str):
                raise ValueError("'program' must be a string")
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            emit({"id": request_id, "error": f"bad request: {exc}"})
            continue
        emit({"id": request_id, "layers": model.forward(program)})
