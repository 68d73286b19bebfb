import json
import subprocess
import sys

from mpmath import mpf

from qlaurent.cli import SUITES, racah_configs, resolve, build_parser, run
from qlaurent.qcore import canonical_params


def test_build_json(capsys):
    assert run(["build", "--family", "R", "--n", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["family"] == "R" and out["index"] == 2
    assert out["params"]["q"].startswith("0.35")


def test_build_to_file(tmp_path):
    path = tmp_path / "x.json"
    assert run(["build", "--family", "X", "--n", "-1", "--output", str(path)]) == 0
    assert json.loads(path.read_text())["family"] == "X"


def test_build_rejects_bad_index(capsys):
    assert run(["build", "--family", "R", "--n", "-1"]) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_suite_is_usage_error(capsys):
    assert run(["verify", "--suite", "nope"]) == 2


def test_incomplete_parameters(capsys):
    assert run(["verify", "--suite", "connections", "--q", "0.3"]) == 2
    assert run(["build", "--family", "R", "--n", "1", "--q", "1.5", "--t", "0.1", "0.2", "0.3", "0.4"]) == 2


def test_connections_pass(capsys):
    assert run(["verify", "--suite", "connections", "--max-n", "4"]) == 0
    header = capsys.readouterr().out.splitlines()[0]
    assert header.startswith("suite,identity")


def test_recurrences_report_failure(capsys):
    assert run(["verify", "--suite", "recurrences", "--max-n", "3"]) == 1
    err = capsys.readouterr().err
    assert "FAILED" in err and "U recurrence (printed)" in err


def test_racah_with_truncation(capsys):
    assert run(["verify", "--suite", "racah", "--N", "2", "--pair", "4"]) == 0


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"q": "0.3", "t": ["0.2", "0.1", "-0.4", "0.5"], "precision": {"digits": 40},
                               "seed": 7}))
    args = build_parser().parse_args(["verify", "--suite", "racah", "--config", str(cfg)])
    params, budget, seed = resolve(args)
    assert budget.working_digits == 40 and seed == 7
    assert abs(params.q - mpf("0.3")) < mpf("1e-35")
    monkeypatch.setenv("QLAURENT_DIGITS", "80")
    assert resolve(args)[1].working_digits == 80
    args = build_parser().parse_args(["verify", "--suite", "racah", "--config", str(cfg), "--digits", "50"])
    assert resolve(args)[1].working_digits == 50
    monkeypatch.setenv("QLAURENT_DIGITS", "lots")
    assert run(["verify", "--suite", "racah", "--config", str(cfg)]) == 2


def test_bad_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert run(["build", "--family", "R", "--n", "1", "--config", str(bad)]) == 2
    assert run(["build", "--family", "R", "--n", "1", "--config", str(tmp_path / "missing.json")]) == 2


def test_asymptotics_csv(capsys):
    assert run(["asymptotics", "--family", "T", "--points", "1.3", "--n-list", "8,12", "--check"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "family,theta,n,err" and len(lines) == 3


def test_asymptotics_bad_points():
    assert run(["asymptotics", "--points", "a,b"]) == 2
    assert run(["asymptotics", "--points", "0"]) == 2


def test_selftest_passes(capsys):
    assert run(["selftest", "--count", "5"]) == 0


def test_racah_configs_truncate():
    P = canonical_params()
    cfgs = racah_configs(P)
    assert len(cfgs) == 4 and {c.pair for c in cfgs} == {3, 4}


def test_suite_names():
    assert len(SUITES) == 8


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qlaurent", "verify", "--suite", "racah", "--N", "1", "--pair", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_params_alias(tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"q": "0.3", "t": ["0.2", "0.1", "-0.4", "0.5"]}))
    args = build_parser().parse_args(["verify", "--suite", "racah", "--params", str(cfg)])
    assert abs(resolve(args)[0].t4 - mpf("0.5")) < mpf("1e-35")
