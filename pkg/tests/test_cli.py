from __future__ import annotations

import json
import subprocess
import sys

import pytest

from erdos_sos import cli
from erdos_sos.errors import ProofGap
from erdos_sos.graph import complete_graph
from erdos_sos.graph6 import encode
from erdos_sos.ledger import load_corpus


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_embed_found(capsys):
    code, out, _ = run(capsys, "embed", "C~", "-1 0 1 2")
    assert code == 0
    assert len(out.splitlines()) == 4 and "->" in out


def test_embed_none(capsys):
    code, out, _ = run(capsys, "embed", "Cl", "-1 0 0 0")
    assert code == 1 and "no embedding" in out


def test_embed_parse_error_reports_position(capsys, tmp_path):
    code, _, err = run(capsys, "embed", "C~~", "-1 0")
    assert code == 4 and "line 1, column 3" in err
    trees = tmp_path / "t.txt"
    trees.write_text("\n-1 0 q\n")
    code, _, err = run(capsys, "embed", "C~", str(trees))
    assert code == 4 and "line 2, column 6" in err


def test_embed_constructive_prints_trace(capsys, tmp_path):
    g = tmp_path / "g.g6"
    g.write_text(">>graph6<<" + encode(complete_graph(13)) + "\n")
    code, out, _ = run(capsys, "embed", str(g), "-1 0 1 2 3 4 5 6 7", "--engine", "constructive")
    assert code == 0 and "trace: base: δ≥k−4 > fallback-oracle" in out


def test_embed_constructive_precondition(capsys):
    code, _, err = run(capsys, "embed", "C?", "-1 0 1", "--engine", "constructive")
    assert code == 4 and "avedeg" in err


def test_embed_proof_gap_exit(capsys, monkeypatch):
    def gap(*_args, **_kw):
        raise ProofGap("2.1", "extension failed")

    monkeypatch.setattr(cli.harness, "embed_instance", gap)
    code, _, err = run(capsys, "embed", "C~", "-1 0 1 2", "--engine", "constructive")
    assert code == 3 and "2.1" in err


def test_usage_errors_exit_4(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--k", "nine"])
    assert exc.value.code == 4
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 4
    code, _, err = run(capsys, "verify", "--k", "9", "--n", "12", "--samples", "1")
    assert code == 4


def test_ledger_clean_and_empty_range(capsys):
    code, out, _ = run(capsys, "ledger", "--kmax", "200")
    assert code == 0 and "all hold" in out
    code, _, err = run(capsys, "ledger", "--kmax", "8")
    assert code == 4 and "k_min" in err


def test_ledger_corrupted_corpus(capsys, tmp_path):
    text = (tmp_path / "c.txt")
    src = "2.1 | k+3, k-5 | -9 | k+2 | 1,-2,-2 | k+2 | > k-4\n"
    text.write_text(src)
    code, out, _ = run(capsys, "ledger", "--corpus", str(text), "--json")
    report = json.loads(out)
    assert code == 2
    assert report["failures"][0]["case_id"] == "2.1"
    assert report["failures"][0]["first_bad_k"] == 9
    code, out, _ = run(capsys, "ledger", "--corpus", str(text))
    assert "FAIL at k=9" in out and "2.1" in out


def test_verify_json_report(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--k", "9", "--samples", "20", "--seed", "7",
                       "--json", "--report", str(dest))
    assert code == 0
    report = json.loads(out)
    assert report == json.loads(dest.read_text())
    assert report["schema"] == 1 and report["totals"]["instances"] == 20


def test_verify_relaxed_exhaustive_exit_2(capsys):
    code, out, _ = run(capsys, "verify", "--exhaustive", "--n", "4", "--threshold-at", "k-2")
    assert code == 2 and "counterexamples by k" in out


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nsamples = 5\njobs = 2\nseed=9\n")
    parser = cli.build_parser()
    monkeypatch.setenv(cli.JOBS_ENV, "4")
    s = cli.resolve(parser.parse_args(["verify", "--config", str(cfg), "--samples", "3"]))
    assert (s["samples"], s["jobs"], s["seed"]) == (3, 2, 9)
    s = cli.resolve(parser.parse_args(["verify"]))
    assert (s["samples"], s["jobs"], s["seed"]) == (1000, 4, 0)
    s = cli.resolve(parser.parse_args(["verify", "--jobs", "1"]))
    assert s["jobs"] == 1
    monkeypatch.delenv(cli.JOBS_ENV)
    assert cli.resolve(parser.parse_args(["verify"]))["jobs"] == 1


def test_bad_config_exits_4(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("samples = 5\ncolour = blue\n")
    code, _, err = run(capsys, "verify", "--k", "9", "--config", str(cfg))
    assert code == 4 and "line 2" in err


def test_hunt_target_case(capsys):
    code, out, _ = run(capsys, "hunt", "--k", "9", "--samples", "30", "--target-case", "2.5.2D",
                       "--json")
    report = json.loads(out)
    assert code == 0
    assert list(report["subcases"]) == ["2.5.2(D)"]
    assert "fallback_rate" in report["subcases"]["2.5.2(D)"]


def test_hunt_zero_samples(capsys):
    code, out, _ = run(capsys, "hunt", "--samples", "0", "--json")
    assert code == 0 and json.loads(out)["subcases"] == {}


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "erdos_sos.cli", "embed", "C~", "-1 0 1 2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.count("->") == 4


def test_default_corpus_matches_package_data():
    assert len(load_corpus()) == 49


def test_config_threshold_value_checked(capsys, tmp_path):
    cfg = tmp_path / "t.cfg"
    cfg.write_text("threshold-at = strict\n")
    code, _, err = run(capsys, "verify", "--exhaustive", "--n", "3", "--config", str(cfg))
    assert code == 4 and "line 1" in err
    cfg.write_text("threshold-at = k-2\n")
    code, _, _ = run(capsys, "verify", "--exhaustive", "--n", "4", "--config", str(cfg))
    assert code == 2
