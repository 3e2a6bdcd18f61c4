import json

import pytest

from voalab import cli
from voalab.affine2 import a2_algebra
from voalab.report import VerificationReport


def test_character_csv(capsys):
    assert cli.main(["character", "--r", "1/2", "--max-weight", "0", "--window", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "weight,charge,dim"
    assert "-1/2,-2,1" in lines
    assert "0,-3,2" in lines


def test_character_json(capsys):
    assert cli.main(["character", "--r", "1/2", "--max-weight=-1/2", "--window", "2",
                     "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["module"] == "M(1/2)"
    assert {row["dim"] for row in doc["rows"]} == {1}


def test_lowest_relaxed(capsys):
    assert cli.main(["lowest", "--r", "1/2", "--window", "1"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert [r["h"] for r in rows] == ["0/1", "-2/1", "-4/1"]


@pytest.mark.parametrize("argv", [
    ["verify", "zhu", "--mu", "1/2", "--no-cache"],
    ["verify", "modules", "--r", "1", "--no-cache"],
    ["verify", "coset", "--max-weight", "7", "--no-cache"],
    ["verify", "n4", "--mu", "0.3x", "--no-cache"],
    ["verify", "bogus"],
    ["character", "--r", "2", "--max-weight", "1"],
])
def test_configuration_errors_exit_2(argv):
    assert cli.main(argv) == 2


def test_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nsuites = n4, coset\nmax_weight.coset = 2\nmu = 0, 1/3\nwindow = 4\n")
    cfg = cli.apply_config(cli.RunConfig(), cli.load_config_file(p))
    assert cfg.suites == ["n4", "coset"]
    assert str(cfg.cutoff("coset")) == "2"
    assert cfg.window == 4
    p.write_text("nonsense = 1\n")
    with pytest.raises(cli.ConfigError):
        cli.apply_config(cli.RunConfig(), cli.load_config_file(p))
    assert cli.main(["verify", "all", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_failing_check_exits_1(monkeypatch, tmp_path, capsys):
    def failing(cfg):
        rep = VerificationReport("n4")
        rep.add("deliberately false", "exit status", False)
        return [rep]
    monkeypatch.setitem(cli.SUITE_RUNNERS, "n4", failing)
    out = tmp_path / "r.json"
    assert cli.main(["verify", "n4", "--no-cache", "--output", str(out)]) == 1
    assert json.loads(out.read_text())["status"] == "fail"
    assert capsys.readouterr().out.strip().endswith("FAIL: 1 checks in 1 reports")


def test_verify_n4_passes_and_writes_report(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["verify", "n4", "--max-weight", "3/2", "--no-cache", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "pass"
    assert "cache" not in doc


def test_second_run_hits_the_cache(tmp_path):
    argv = ["verify", "coset", "--max-weight", "2", "--cache-dir", str(tmp_path / "c"),
            "--output", str(tmp_path / "r.json")]
    a2_algebra.cache_clear()
    assert cli.main(argv) == 0
    first = json.loads((tmp_path / "r.json").read_text())["cache"]
    a2_algebra.cache_clear()
    assert cli.main(argv) == 0
    second = json.loads((tmp_path / "r.json").read_text())["cache"]
    a2_algebra.cache_clear()
    assert first["hits"] == 0 and first["misses"] > 0
    assert second["hits"] > 0 and second["misses"] == 0


def test_cache_gc_command(tmp_path, capsys):
    assert cli.main(["cache-gc", "--cache-dir", str(tmp_path), "--max-bytes", "1k"]) == 0
    assert json.loads(capsys.readouterr().out)["evicted"] == []
    assert cli.main(["cache-gc", "--cache-dir", str(tmp_path), "--max-bytes", "lots"]) == 2
