import json
import subprocess
import sys

import numpy as np
import pytest

from eoa import __version__
from eoa.cli import main

DEATH = 0.8813735870195429


def run_main(argv):
    return main(argv)


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        run_main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == f"eoa {__version__}"


def test_series_csv_values(capsys):
    code = run_main(["series", "--channel", "phase-damping", "--alpha", "0.5",
                     "--grid", "0:2:5"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "gamma_t,factor,eoa_product,channel,alpha"
    assert len(lines) == 6
    eoa0 = np.sqrt(3.0) / 2.0
    for line in lines[1:]:
        gt, factor, product, channel, alpha = line.split(",")
        gt = float(gt)
        assert channel == "phase-damping" and float(alpha) == 0.5
        assert abs(float(factor) - np.exp(-gt)) < 1e-11
        assert abs(float(product) - eoa0 * np.exp(-gt)) < 1e-11
        # 12 significant digits round-trip
        assert f"{float(factor):.12g}" == factor


def test_series_json_payload(tmp_path):
    out = tmp_path / "series.json"
    code = run_main(["series", "--channel", "gad", "--p", "0.5", "--alpha", "0.5",
                     "--grid", "0:1:3", "--format", "json", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["version"] == __version__
    assert payload["config"]["channel"] == "generalized-amplitude-damping"
    assert payload["config"]["grid"] == [0.0, 0.5, 1.0]
    assert len(payload["points"]) == 3
    nu = np.exp(-0.5)
    want = max(0.0, (nu * nu + 2.0 * nu - 1.0) / 2.0)
    assert abs(payload["points"][1]["factor"] - want) < 1e-12


def test_series_default_grid(capsys):
    code = run_main(["series", "--channel", "identity", "--alpha", "0.5"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 302  # header + 301 default grid points


def test_series_reruns_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["series", "--channel", "phase-damping", "--alpha", "0.7", "--grid", "0:3:40"]
    assert run_main(argv + ["--out", str(a)]) == 0
    assert run_main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    ["series", "--channel", "nope", "--alpha", "0.5"],
    ["series", "--channel", "phase-damping", "--alpha", "1.5"],
    ["series", "--channel", "phase-damping", "--alpha", "0.5", "--grid", "2:1:10"],
    ["series", "--channel", "phase-damping", "--alpha", "0.5", "--grid", "0:1"],
    ["series", "--channel", "phase-damping", "--alpha", "0.5", "--grid", "0:1:1"],
    ["series", "--channel", "phase-damping", "--alpha", "0.5", "--grid", "-1:1:5"],
    ["sudden-death", "--channel", "gad", "--p", "0.5", "--bracket", "5:1"],
])
def test_usage_errors_from_argparse(argv):
    with pytest.raises(SystemExit) as exc:
        run_main(argv)
    assert exc.value.code == 2


def test_usage_errors_returned(capsys):
    # gad without --p
    assert run_main(["series", "--channel", "gad", "--alpha", "0.5",
                     "--grid", "0:1:3"]) == 2
    assert "--p is required" in capsys.readouterr().err
    # p outside [0, 1]
    assert run_main(["series", "--channel", "gad", "--p", "1.4", "--alpha", "0.5",
                     "--grid", "0:1:3"]) == 2
    # bracket starting past the death point
    assert run_main(["sudden-death", "--channel", "gad", "--p", "0.5",
                     "--bracket", "2:5"]) == 2
    # nonpositive tolerance
    assert run_main(["sudden-death", "--channel", "phase-damping", "--tol", "0"]) == 2
    # bad verify counts
    assert run_main(["verify", "tau", "--n", "0"]) == 2
    assert run_main(["verify", "tau", "--n3", "1"]) == 2


def test_sudden_death_outputs(capsys, tmp_path):
    assert run_main(["sudden-death", "--channel", "gad", "--p", "0.5"]) == 0
    first = capsys.readouterr().out.strip().splitlines()[0]
    assert abs(float(first) - DEATH) < 1e-6

    out = tmp_path / "sd.json"
    assert run_main(["sudden-death", "--channel", "phase-damping",
                     "--out", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "none"
    payload = json.loads(out.read_text())
    assert payload["t_star"] is None
    assert payload["residual"] > 0.0


def test_verify_records_and_summary(capsys, tmp_path):
    out = tmp_path / "records.json"
    code = run_main(["verify", "theorem1", "--n", "2", "--seed", "0",
                     "--restarts", "4", "--iters", "150", "--out", str(out)])
    assert code == 0
    summary = capsys.readouterr().out.strip()
    assert summary.startswith("verify theorem1: 2/2 passed")
    records = json.loads(out.read_text())
    assert len(records) == 2
    for rec in records:
        assert rec["version"] == __version__
        assert rec["config"]["law"] == "theorem1"
        assert rec["passed"] is True
        assert rec["lhs"]["direction"] == "lower"
        assert "instance_seed" in rec["details"]


def test_verify_reruns_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "tau", "--n", "4", "--seed", "11"]
    assert run_main(argv + ["--out", str(a)]) == 0
    assert run_main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_exit_one_on_certified_failure(capsys, tmp_path):
    # an impossible tolerance forces certified records to fail
    out = tmp_path / "bad.json"
    code = run_main(["verify", "corollary1", "--n", "1", "--restarts", "4",
                     "--iters", "150", "--alg-tol", "-10", "--out", str(out)])
    assert code == 1
    assert "certified failures" in capsys.readouterr().out


def test_console_script_installed():
    res = subprocess.run(["eoa", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == f"eoa {__version__}"


def test_selftest_fault_injection_names_kraus_check():
    res = subprocess.run(
        [sys.executable, "-m", "eoa.cli", "selftest", "--seed", "0",
         "--inject-fault", "kraus"],
        capture_output=True, text=True,
    )
    assert res.returncode == 1
    assert "FAIL kraus-completeness" in res.stdout
    assert "residual" in res.stdout
