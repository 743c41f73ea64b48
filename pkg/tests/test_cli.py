from pathlib import Path

import pytest

from anticyc.cli import main

ROOT = Path(__file__).resolve().parents[1]
CFG = str(ROOT / "configs" / "21a1_D-15_p3.cfg")
CURVE = ["--curve", "1 0 0 -4 -1"]


def test_check_accepts(capsys):
    assert main(["check", *CURVE, "--N", "21", "--p", "3", "--D", "-120"]) == 0
    out = capsys.readouterr().out
    assert "all pass" in out and "inert" in out


@pytest.mark.parametrize("D,needle", [("-3", "units"), ("-20", "does not divide")])
def test_check_rejects_with_exit_2(capsys, D, needle):
    assert main(["check", *CURVE, "--N", "21", "--p", "3", "--D", D]) == 2
    assert needle in capsys.readouterr().err


def test_bad_config_is_exit_4(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("curve = 1 0 0 -4 -1\nN = 21\n")
    assert main(["check", "--config", str(cfg)]) == 4


def test_verify_then_report(tmp_path, capsys):
    assert main(["verify", "--config", CFG, "--cache-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "derivative_A" in out and "[norm identity]" in out and "ratio" in out
    (report,) = tmp_path.glob("report-*.txt")
    assert main(["report", str(report)]) == 0
    assert "finite_difference" in capsys.readouterr().out
    assert main(["build", "--config", CFG, "--cache-dir", str(tmp_path)]) == 0
    assert "cached: True" in capsys.readouterr().out
