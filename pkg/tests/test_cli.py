import csv
import io
import subprocess
import sys

import pytest

from envtheory.cli import main

LINEAR = """[system]
potential = linear
[state]
n = 0 0
l = 0 0
L = 0
[method]
phi = fixed:2, dos, calibrate:2.753
"""


@pytest.fixture
def run_cli(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_solve_table_and_csv_agree(tmp_path, run_cli):
    cfg = _write(tmp_path, LINEAR)
    code, table, _ = run_cli("solve", "--config", cfg)
    assert code == 0 and "DOS" in table
    code, text, _ = run_cli("solve", "--config", cfg, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["phi_label"] for r in rows] == ["2", "DOS", "GS"]
    assert float(rows[0]["E"]) == pytest.approx(2.835, abs=5e-4)
    assert f"{float(rows[0]['E']):#.4g}" in table


def test_reruns_are_bit_identical(tmp_path, run_cli):
    cfg = _write(tmp_path, LINEAR)
    first = run_cli("solve", "--config", cfg, "--format", "csv")
    second = run_cli("solve", "--config", cfg, "--format", "csv")
    assert first == second


def test_out_file(tmp_path, run_cli):
    cfg = _write(tmp_path, LINEAR)
    out = tmp_path / "r.csv"
    code, printed, _ = run_cli("solve", "--config", cfg, "--format", "csv", "--out", out)
    assert code == 0 and printed == "" and out.read_text().startswith("table,phi_label")


def test_config_error_exit_code(tmp_path, run_cli):
    cfg = _write(tmp_path, "[system]\npotential = linear\nfoo = 1\n[state]\n")
    code, _, err = run_cli("solve", "--config", cfg)
    assert code == 3 and "line 3" in err


def test_missing_config_exit_code(run_cli):
    code, _, err = run_cli("solve")
    assert code == 3 and "--config" in err


def test_no_bound_state_exit_code(tmp_path, run_cli):
    text = "[system]\npotential = expwell\na = 1\nb = 1\n[state]\nn = 40 0\nl = 0 0\nL = 0\n"
    code, _, err = run_cli("solve", "--config", _write(tmp_path, text))
    assert code == 4 and "no bound state" in err


def test_usage_error_exit_code(run_cli):
    with pytest.raises(SystemExit) as info:
        main(["table", "nope"])
    assert info.value.code == 2


def test_phi_dos_and_calibrate(tmp_path, run_cli):
    cfg = _write(tmp_path, LINEAR)
    code, text, _ = run_cli("phi-dos", "--config", cfg, "--format", "csv")
    assert code == 0 and float(text.splitlines()[1]) == pytest.approx(3**0.5, rel=1e-9)
    code, text, _ = run_cli("calibrate-phi", "--config", cfg, "--energy", "2.753")
    assert code == 0 and "phi_gs" in text


def test_table_all_without_oracle(run_cli):
    code, text, _ = run_cli("table", "all", "--no-oracle", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len({r["table"] for r in rows}) == 11
    lin4 = [r for r in rows if r["table"] == "lin4" and r["phi_label"] == "DOS"][0]
    assert lin4["r"] == "MixedQ0"


def test_oracle_command(tmp_path, run_cli):
    cfg = _write(tmp_path, LINEAR)
    code, text, _ = run_cli("oracle", "--config", cfg, "--qstar-max", 8)
    assert code == 0 and "E_acc" in text and "z_opt" in text


def test_hierarchy(run_cli):
    code, text, _ = run_cli("hierarchy", "--qstar-max", 8)
    assert code == 0 and "ordering consistent" in text


def test_module_entry_point(tmp_path):
    cfg = _write(tmp_path, LINEAR)
    res = subprocess.run([sys.executable, "-m", "envtheory", "phi-dos", "--config", str(cfg)],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "phi_dos" in res.stdout
