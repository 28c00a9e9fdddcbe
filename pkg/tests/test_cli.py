import json

from polytract.cli import main
from polytract.report import strip_timings


def test_list_exits_zero(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "wordstats-count-digest" in out
    assert "qbds-to-bds" in out


def test_unknown_catalog_name_is_usage_error(capsys):
    assert main(["verify-witness", "no-such-thing"]) == 2
    assert "unknown witness" in capsys.readouterr().err


def test_unknown_subcommand_is_usage_error():
    assert main(["frobnicate"]) == 2


def test_help_exits_zero():
    assert main(["--help"]) == 0


def test_bad_config_file_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("made_up_key = 1\n")
    assert main(["run-suite", "--config", str(cfg)]) == 2
    assert "unknown key" in capsys.readouterr().err


def test_short_ladder_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "short.cfg"
    cfg.write_text("ladder = 512, 1024\n")
    assert main(["run-suite", "--config", str(cfg)]) == 2
    assert "ladder" in capsys.readouterr().err


def test_verify_factorization_pass(capsys):
    code = main(["verify-factorization", "qbds-absorb", "--random", "25"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS restore-roundtrip" in out
    assert "overall: PASS" in out


def test_verify_reduction_json_output(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main(["verify-reduction", "qbds-to-bds", "--random", "25",
                 "--json", str(path)])
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["verdict"] == "pass"
    assert any(c["name"] == "iff-equivalence" for c in payload["checks"])


def test_injected_fault_fails_with_exit_one(tmp_path, capsys):
    cfg = tmp_path / "inject.cfg"
    cfg.write_text("inject = identity-preprocessing:wordstats-count-digest\n")
    code = main(["verify-witness", "wordstats-count-digest",
                 "--config", str(cfg), "--random", "25"])
    out = capsys.readouterr().out
    assert code == 1
    assert "overall: FAIL" in out


def test_separate_table_and_csv(capsys):
    assert main(["separate", "--max-n", "6"]) == 0
    out = capsys.readouterr().out
    assert "n=  5" in out
    assert "collision" in out
    assert main(["separate", "--max-n", "6", "--csv"]) == 0
    csv_out = capsys.readouterr().out
    assert csv_out.splitlines()[0].startswith("n,")


def test_separate_json_stdout(capsys):
    assert main(["separate", "--max-n", "5", "--json", "-"]) == 0
    out = capsys.readouterr().out
    start = out.index("{")
    payload = json.loads(out[start: out.rindex("}") + 1])
    assert payload["verdict"] == "pass"


def test_stripped_check_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify-witness", "bds-verdict-bit", "--seed", "7",
                     "--random", "20", "--json", str(path)]) == 0
    ja = strip_timings(json.loads(a.read_text()))
    jb = strip_timings(json.loads(b.read_text()))
    assert ja == jb
