"""Engine-side tests of the newline-delimited JSON oracle protocol."""

import sys

import pytest

from cocofuzz import ExecOracle, ProtocolError

GOOD_ADAPTER = r"""
import json, sys
print(json.dumps({"topology": [3, 2]}), flush=True)
for line in sys.stdin:
    req = json.loads(line)
    n = float(len(req.get("program", "")))
    layers = [[n, n + 1.0, 0.0], [n * 2.0, 1.0]]
    print(json.dumps({"id": req["id"], "layers": layers}), flush=True)
"""


def adapter(script: str) -> list[str]:
    return [sys.executable, "-c", script]


def test_handshake_then_matching_responses():
    with ExecOracle(adapter(GOOD_ADAPTER)) as oracle:
        assert oracle.topology == (3, 2)
        vec = oracle.activations("int f(){return 1;}")
        assert tuple(len(l) for l in vec.layers) == (3, 2)
        assert vec == oracle.activations("int f(){return 1;}")


def test_handshake_must_come_first():
    script = r"""
import json, sys
line = sys.stdin.readline()
print(json.dumps({"id": 1, "layers": [[0.0]]}), flush=True)
"""
    with pytest.raises(ProtocolError):
        ExecOracle(adapter(script), timeout=3.0)


def test_malformed_handshake_rejected():
    with pytest.raises(ProtocolError):
        ExecOracle(adapter('print("hello")'))
    with pytest.raises(ProtocolError):
        ExecOracle(adapter('import json; print(json.dumps({"topology": []}))'))


def test_id_mismatch_is_protocol_error():
    script = r"""
import json, sys
print(json.dumps({"topology": [2]}), flush=True)
for line in sys.stdin:
    req = json.loads(line)
    print(json.dumps({"id": req["id"] + 1000, "layers": [[0.0, 1.0]]}), flush=True)
"""
    with ExecOracle(adapter(script)) as oracle:
        with pytest.raises(ProtocolError):
            oracle.activations("x")


def test_wrong_layer_sizes_are_protocol_errors():
    script = r"""
import json, sys
print(json.dumps({"topology": [2, 2]}), flush=True)
for line in sys.stdin:
    req = json.loads(line)
    print(json.dumps({"id": req["id"], "layers": [[0.0, 1.0], [0.0]]}), flush=True)
"""
    with ExecOracle(adapter(script)) as oracle:
        with pytest.raises(ProtocolError):
            oracle.activations("x")


def test_error_response_is_protocol_error():
    script = r"""
import json, sys
print(json.dumps({"topology": [2]}), flush=True)
for line in sys.stdin:
    req = json.loads(line)
    print(json.dumps({"id": req["id"], "error": "boom"}), flush=True)
"""
    with ExecOracle(adapter(script)) as oracle:
        with pytest.raises(ProtocolError):
            oracle.activations("x")


def test_child_exit_is_protocol_error():
    script = r"""
import json, sys
print(json.dumps({"topology": [2]}), flush=True)
sys.exit(0)
"""
    with ExecOracle(adapter(script)) as oracle:
        with pytest.raises(ProtocolError):
            oracle.activations("x")


def test_nonexistent_command_is_protocol_error():
    with pytest.raises(ProtocolError):
        ExecOracle(["definitely-not-a-real-binary-zzz"])
