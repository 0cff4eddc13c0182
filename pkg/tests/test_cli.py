import subprocess
import sys

import pytest

from dmxy import cli
from dmxy.sweep import VerifyReport


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_asymptotic(capsys):
    code, out, _ = run(["asymptotic", "--chi", "0.3", "--B", "4", "--b", "-3.5", "--D", "0.5", "--TM", "2", "--dT", "1"], capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines[0].startswith("concurrence,eof,rho11")
    assert float(lines[1].split(",")[0]) == pytest.approx(0.0501529795708, abs=1e-12)
    assert "# geometry: indirect" in out


def test_critical(capsys):
    code, out, _ = run(["critical", "--chi", "0.3", "--B", "4", "--b", "1"], capsys)
    assert code == 0
    assert float(out.splitlines()[-1]) == pytest.approx(3.75366, abs=5e-5)


def test_critical_absent(capsys):
    code, out, _ = run(["critical", "--chi", "0.1", "--B", "0.5", "--b", "2"], capsys)
    assert code == 0 and out.splitlines()[-1] == ""


def test_evolve_with_verify(capsys):
    code, out, err = run(["evolve", "--chi", "0.9", "--B", "2", "--b", "1", "--TM", "1.5", "--dT", "0.5",
                          "--initial", "mixed-01-10", "--t-max", "50", "--points", "201", "--verify"], capsys)
    assert code == 0
    assert "0 failures" in err
    assert len([l for l in out.splitlines() if not l.startswith("#")]) == 202


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "f.csv"
    code, out, _ = run(["figure", "5", "--out", str(dest)], capsys)
    assert code == 0 and out == ""
    assert dest.read_text().startswith("# dmxy")


def test_figure_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["figure", "1", "--out", str(a)])
    cli.main(["figure", "1", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_config_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("J = 1\nchi = oops\n")
    code, _, err = run(["sweep", "--config", str(cfg)], capsys)
    assert code == 1
    assert "line 2" in err and "'chi'" in err


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run(["sweep", "--config", str(tmp_path / "none.cfg")], capsys)
    assert code == 1


def test_degenerate_only_grid(tmp_path, capsys):
    cfg = tmp_path / "deg.cfg"
    cfg.write_text("J = 1\nchi = 1\naxis.B = [0]\n")
    code, out, _ = run(["sweep", "--config", str(cfg)], capsys)
    assert code == 2
    assert out.splitlines()[-1].endswith(",1,0,0")


def test_sweep_overrides_file(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("J = 1\nchi = 0.3\nB = 4\nb = 0\naxis.D = [1]\n")
    _, out, _ = run(["sweep", "--config", str(cfg), "--b", "1"], capsys)
    assert "b=1 " in out


def test_verify_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "verify", lambda result: VerifyReport(1, ("row 0: forced",)))
    code, _, err = run(["asymptotic", "--chi", "0.3", "--B", "4", "--verify"], capsys)
    assert code == 3 and "forced" in err


def test_bad_figure_number(capsys):
    with pytest.raises(SystemExit):
        cli.main(["figure", "9"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dmxy", "critical", "--chi", "0.3", "--B", "4"],
                         capture_output=True, text=True, check=True).stdout
    assert float(out.splitlines()[-1]) == pytest.approx(3.88458, abs=5e-5)
