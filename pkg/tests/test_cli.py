import json
import subprocess
import sys

import jsonschema
import pytest

from artifact.cli import main
from artifact.report import SCHEMA
from artifact.suites import SuiteConfig, run_suite


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--json", str(out), "--quiet"])
    payload = json.loads(out.read_text())
    jsonschema.validate(payload, SCHEMA)
    return code, payload


def strip_timing(payload):
    return [{k: v for k, v in c.items() if k != "elapsed"} for c in payload["checks"]]


def test_hirota_rational(tmp_path):
    code, payload = run(tmp_path, "hirota", "--flavor", "rational", "--seed", "1")
    assert code == 0 and payload["status"] == "pass"
    assert all(float(c["max_residual"]) < 1e-40 for c in payload["checks"])
    assert all(c["anchor"] for c in payload["checks"])


def test_wronski_elliptic(tmp_path):
    code, payload = run(tmp_path, "wronski", "--flavor", "elliptic", "--n", "3", "--lmax", "4", "--samples", "5")
    assert code == 0
    assert len(payload["checks"]) == 4


def test_macdonald_exact(tmp_path):
    code, payload = run(tmp_path, "macdonald", "--n", "2", "--q", "3/5", "--t", "2/7")
    assert code == 0
    exact = [c for c in payload["checks"] if c["exact"]]
    assert exact and all(c["passed"] for c in exact)


def test_displays_fail_with_exit_one(tmp_path):
    code, payload = run(tmp_path, "displays", "--flavor", "rational", "--n", "2", "--samples", "3")
    assert code == 1 and payload["status"] == "fail"
    failing = {c["identity"].split("[")[0] for c in payload["checks"] if not c["passed"]}
    assert "h3-display-kappa-plus-delta" in failing


def test_deterministic(tmp_path):
    argv = ("keyidentity", "--flavor", "trig", "--n", "2", "--samples", "4", "--seed", "7")
    _, first = run(tmp_path, *argv)
    _, second = run(tmp_path, *argv)
    assert strip_timing(first) == strip_timing(second)
    assert first["config"]["seed"] == 7


def test_table_output(capsys):
    assert main(["hirota", "--flavor", "trig"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("suite hirota: PASS")


@pytest.mark.parametrize(
    "argv",
    [
        ["hirota", "--q", "1"],
        ["hirota", "--t", "0"],
        ["hirota", "--q", "abc"],
        ["wronski", "--lmax", "7"],
        ["wronski", "--n", "0"],
        ["nosuchsuite"],
        ["hirota", "--flavor", "hyperbolic"],
    ],
)
def test_invalid_config_exits_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_run_suite_rejects_unknown_name():
    with pytest.raises(ValueError):
        run_suite("nope", SuiteConfig())


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "artifact", "kajihara", "--json", str(out), "--quiet"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["status"] == "pass"
