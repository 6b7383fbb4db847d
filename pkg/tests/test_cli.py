import json
from pathlib import Path

import pytest

from cocofuzz.cli import main

CORPUS = str(Path(__file__).parent / "corpus")
ASSIGN = str(Path(__file__).parent / "fixtures" / "assign.java")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_mutate_op3_output_contains_add_zero(capsys):
    code, out, _ = run(capsys, "mutate", "--op", "Op3", "--seed-rng", "1", ASSIGN)
    assert code == 0
    assert "+0-0" in out


def test_mutate_unknown_operator_is_usage_error(capsys):
    code, _, err = run(capsys, "mutate", "--op", "Op11", ASSIGN)
    assert code == 1
    assert "Op1..Op10" in err


def test_mutate_missing_file_is_corpus_error(capsys):
    code, _, _ = run(capsys, "mutate", "--op", "Op1", "does-not-exist.java")
    assert code == 2


def test_mutate_unparseable_file_is_corpus_error(capsys, tmp_path):
    bad = tmp_path / "bad.java"
    bad.write_text("not a method", encoding="utf-8")
    code, _, _ = run(capsys, "mutate", "--op", "Op1", str(bad))
    assert code == 2


def test_fuzz_twice_writes_identical_reports(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        code, _, _ = run(
            capsys,
            "fuzz", "--corpus", CORPUS, "--oracle", "synthetic",
            "--max", "2", "--seed-rng", "7", "--out", str(out),
        )
        assert code == 0
    assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()
    assert (out_a / "report.csv").read_bytes() == (out_b / "report.csv").read_bytes()


def test_fuzz_writes_mutant_files(tmp_path, capsys):
    out = tmp_path / "campaign"
    code, _, _ = run(
        capsys,
        "fuzz", "--corpus", CORPUS, "--oracle", "synthetic",
        "--max", "1", "--seed-rng", "3", "--out", str(out),
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    mutants = list((out / "mutants").rglob("*.java"))
    assert len(mutants) == report["emitted"]
    assert all(p.parent.parent.name == "mutants" for p in mutants)


def test_fuzz_report_to_stdout_without_out(capsys, tmp_path):
    src = tmp_path / "mini"
    src.mkdir()
    (src / "one.java").write_text("int f(){int x=1; return x;}", encoding="utf-8")
    code, out, _ = run(
        capsys, "fuzz", "--corpus", str(src), "--oracle", "synthetic", "--seed-rng", "7"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["config"]["max_mutations"] == 3
    assert payload["config"]["activation_threshold"] == 0.4


def test_fuzz_max_zero_is_usage_error(capsys):
    code, _, err = run(
        capsys, "fuzz", "--corpus", CORPUS, "--max", "0", "--seed-rng", "1"
    )
    assert code == 1
    assert "max_mutations" in err


def test_fuzz_missing_corpus_is_corpus_error(capsys, tmp_path):
    code, _, _ = run(capsys, "fuzz", "--corpus", str(tmp_path / "nope"), "--seed-rng", "1")
    assert code == 2


def test_fuzz_empty_corpus_dir_is_corpus_error(capsys, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    code, _, _ = run(capsys, "fuzz", "--corpus", str(empty), "--seed-rng", "1")
    assert code == 2


def test_fuzz_unknown_oracle_is_usage_error(capsys):
    code, _, _ = run(capsys, "fuzz", "--corpus", CORPUS, "--oracle", "quantum")
    assert code == 1


def test_fuzz_unknown_format_rejected_before_running(capsys):
    code, _, err = run(
        capsys, "fuzz", "--corpus", CORPUS, "--format", "xml", "--seed-rng", "1"
    )
    assert code == 1
    assert "format" in err


def test_fuzz_broken_exec_oracle_is_oracle_error(capsys):
    code, _, _ = run(
        capsys, "fuzz", "--corpus", CORPUS, "--oracle", "exec:false", "--seed-rng", "1"
    )
    assert code == 3


def test_fuzz_operator_subset(capsys, tmp_path):
    src = tmp_path / "mini"
    src.mkdir()
    (src / "one.java").write_text("int f(){int x=1; return x;}", encoding="utf-8")
    code, out, _ = run(
        capsys,
        "fuzz", "--corpus", str(src), "--operators", "Op1,Op5", "--seed-rng", "7",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["config"]["operator_set"] == ["Op1", "Op5"]
    used = set(payload["operator_counts"])
    assert used <= {"Op1", "Op5"}


def test_baseline_emits_k_per_seed(capsys, tmp_path):
    out = tmp_path / "base"
    code, _, _ = run(
        capsys,
        "baseline", "--corpus", CORPUS, "--k", "3", "--seed-rng", "7", "--out", str(out),
    )
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    assert payload["kind"] == "random-at-k"
    assert payload["emitted"] == payload["seed_count"] * 3


def test_baseline_bad_k_is_usage_error(capsys):
    code, _, _ = run(capsys, "baseline", "--corpus", CORPUS, "--k", "0")
    assert code == 1


def test_sweep_max_table(capsys, tmp_path):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(
        capsys,
        "sweep-max", "--corpus", CORPUS, "--from", "1", "--to", "3",
        "--seed-rng", "7", "--out", str(target),
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "max_mutations,mean_noise_fraction"
    assert len(lines) == 4
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values[0] < values[1] < values[2]
    assert target.read_text() == out


def test_sweep_max_bad_range_is_usage_error(capsys):
    code, _, _ = run(capsys, "sweep-max", "--corpus", CORPUS, "--from", "3", "--to", "1")
    assert code == 1


def test_oracle_check_synthetic(capsys):
    code, out, _ = run(capsys, "oracle-check", "--oracle", "synthetic")
    assert code == 0
    assert "deterministic" in out


def test_oracle_check_broken_exec(capsys):
    code, _, _ = run(capsys, "oracle-check", "--oracle", "exec:false")
    assert code == 3


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1


def test_help_exits_zero(capsys):
    code = main(["--help"])
    assert code == 0
