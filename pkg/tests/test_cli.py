import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from qplasma.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_energy_default_anchor(capsys):
    code, out, _ = run(capsys, "energy", "--n", "0", "--m", "0", "--g", "1", "--lambda-d", "20")
    assert code == 0
    assert "total  = -1.95001563" in out
    for part in ("e0", "shift", "e1", "e2"):
        assert part in out


def test_energy_negative_branch_field_independent(capsys):
    code, out, _ = run(capsys, "energy", "--n", "0", "--m", "-1", "--xi", "0", "--F", "5", "--g", "1")
    assert code == 0 and "total  = -1.95000000" in out


def test_energy_json(capsys):
    code, out, _ = run(capsys, "energy", "--format", "json", "--g", "0")
    (row,) = json.loads(out)
    assert set(row) == {"n", "m", "e0", "shift", "e1", "e2", "total"}
    assert row["total"] == pytest.approx(-1.9506173, abs=1e-7)


def test_spectrum_csv_ordering(capsys):
    code, out, _ = run(capsys, "spectrum", "--n-max", "2", "--m-min", "-1", "--m-max", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "m", "e0", "shift", "e1", "e2", "total"]
    assert [(int(r[0]), int(r[1])) for r in rows[1:]] == [(n, m) for m in (-1, 0, 1) for n in range(3)]


def test_potential(capsys):
    code, out, _ = run(capsys, "potential", "--points", "5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["r", "exact", "series"] and len(rows) == 6


def test_wavefunction(capsys):
    code, out, _ = run(capsys, "wavefunction", "--m", "1", "--points", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data) == 10
    assert all(d["Q"] > 0 for d in data)


def test_wavefunction_negative_branch_is_domain_error(capsys):
    code, out, err = run(capsys, "wavefunction", "--m", "-1")
    assert code == 3 and out == ""
    assert "WavefunctionUndefinedError" in err


@pytest.mark.parametrize("tid", ["1", "2"])
def test_table_passes(capsys, tid):
    code, out, _ = run(capsys, "table", "--id", tid)
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("60/60 cells pass")


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--id", "2", "--format", "json")
    assert json.loads(out)["passed"] is True


def test_table_failure_exit_code(capsys, monkeypatch):
    from qplasma import cli, reports

    monkeypatch.setattr(cli, "reproduce_table", lambda tid: reports.reproduce_table(tid, 0.0, 0.0))
    code, out, _ = run(capsys, "table", "--id", "1")
    assert code == 1 and "NO" in out


def test_figure(capsys):
    code, out, _ = run(capsys, "figure", "--id", "2a")
    assert code == 0 and out.startswith("# figure=2a params=")


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--m", "0", "--k", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "m", "eigenvalue", "error_estimate"]
    assert float(rows[1][2]) == pytest.approx(-1.9500156, abs=5e-4)


def test_oracle_field_is_domain_error(capsys):
    code, _, err = run(capsys, "oracle", "--F", "0.1")
    assert code == 3 and "UnboundedPotentialError" in err


def test_oracle_box_mode_note(capsys):
    code, out, _ = run(capsys, "oracle", "--F", "0.001", "--box", "--k", "1")
    assert code == 0 and "box-regularised" in out


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["abs_gap"] < 1e-5 and data["outside_validity"] is False


def test_compare_flags_short_screening(capsys):
    code, out, _ = run(capsys, "compare", "--lambda-d", "1")
    assert code == 0 and "True" in out and "note:" in out


def test_delta_e(capsys):
    code, out, _ = run(capsys, "delta-e", "--format", "json")
    rows = {r["xi"]: r for r in json.loads(out)}
    assert 37 <= rows[1]["delta_E"] <= 39
    assert rows[2]["discrepancy"] == "yes" and rows[1]["discrepancy"] == "no"


def test_delta_e_default_does_not_leak(capsys):
    _, out, _ = run(capsys, "energy", "--format", "json")
    assert json.loads(out)[0]["e1"] == 0.0


def test_output_file(tmp_path, capsys):
    path = tmp_path / "fig.csv"
    code, out, _ = run(capsys, "figure", "--id", "1a", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_bytes().startswith(b"# figure=1a")


def test_deterministic_output(capsys):
    _, a, _ = run(capsys, "spectrum", "--format", "csv")
    _, b, _ = run(capsys, "spectrum", "--format", "csv")
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["table"], ["table", "--id", "3"], ["energy", "--g", "2"], ["energy", "--lambda-d", "-1"]],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_worker_cap(monkeypatch, capsys):
    monkeypatch.setenv("QPLASMA_WORKERS", "1")
    _, serial, _ = run(capsys, "table", "--id", "1")
    monkeypatch.setenv("QPLASMA_WORKERS", "8")
    _, parallel, _ = run(capsys, "table", "--id", "1")
    assert serial == parallel


def test_console_script():
    exe = shutil.which("qplasma")
    argv = [exe] if exe else [sys.executable, "-m", "qplasma.cli"]
    proc = subprocess.run([*argv, "table", "--id", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "60/60 cells pass" in proc.stdout
    proc = subprocess.run([*argv, "oracle", "--F", "1"], capture_output=True, text=True)
    assert proc.returncode == 3
