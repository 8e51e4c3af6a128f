import csv
import io
import json
import subprocess
import sys

import pytest

from singularity_metric.cli import main
from singularity_metric.dataset import DATASET_ENV_VAR, serialize
from singularity_metric.evidence import canonical_dataset


@pytest.fixture(autouse=True)
def _no_env(monkeypatch):
    monkeypatch.delenv(DATASET_ENV_VAR, raising=False)


def test_run_default(capsys):
    assert main(["run"]) == 0
    out = capsys.readouterr().out
    assert "| Ev3 | 0.92308 |" in out
    assert "0.834498805" in out


def test_run_formats_and_out(tmp_path, capsys):
    assert main(["run", "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 8 and len(rows[0]) == 10
    out = tmp_path / "r.json"
    assert main(["run", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["display"]["metric"] == "0.834498805"


def test_run_bad_dataset(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text(serialize(canonical_dataset().with_cell("S1", "Ev2", "magic")))
    assert main(["run", "--dataset", str(path)]) == 1
    assert "(S1, Ev2)" in capsys.readouterr().err


def test_env_var_dataset(tmp_path, monkeypatch, capsys):
    path = tmp_path / "d.toml"
    path.write_text(serialize(canonical_dataset().with_cell("S9", "Ev7", "irrelevant")))
    monkeypatch.setenv(DATASET_ENV_VAR, str(path))
    assert main(["run"]) == 0
    assert "0.823387694" in capsys.readouterr().out


def test_validate(tmp_path, capsys):
    good = tmp_path / "good.toml"
    good.write_text(serialize(canonical_dataset()))
    assert main(["validate", "--dataset", str(good)]) == 0
    assert "ok" in capsys.readouterr().out
    empty = tmp_path / "empty.toml"
    empty.write_text("")
    assert main(["validate", "--dataset", str(empty)]) == 1
    assert "syntax error" in capsys.readouterr().err
    assert main(["validate", "--dataset", str(tmp_path / "nope.toml")]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["validate"],
        ["run", "--format", "xlsx"],
        ["sense", "--delta", "0.1", "--samples", "0", "--seed", "1"],
        ["sense", "--delta", "-1", "--samples", "5", "--seed", "1"],
        ["sense", "--delta", "0.1", "--samples", "5"],
        ["fit"],
        ["fit", "--table", "x", "--correct", "garbage"],
    ],
)
def test_bad_invocation(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_sense_deterministic(capsys):
    argv = ["sense", "--delta", "0.05", "--samples", "200", "--seed", "42", "--format", "json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_tornado(capsys):
    assert main(["tornado"]) == 0
    assert "| S9 | Ev7 | up |" in capsys.readouterr().out


def test_fit_printed_table(tmp_path, capsys):
    from singularity_metric.fit import published_table

    path = tmp_path / "t.txt"
    path.write_text("\n".join(" ".join(r) for r in published_table().cells) + "\n")
    assert main(["fit", "--table", str(path), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [a["kind"] for a in doc["anomalies"]].count("monotonicity-violation") == 1
    assert main(["fit", "--table", str(path), "--published-corrections", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(s["snapped_level"] for steps in doc["steps"].values() for s in steps)
    assert main(["fit", "--table", str(path), "--correct", "S4:Ev5=0.99945", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == doc


def test_fit_custom_schedule(tmp_path, capsys):
    table = tmp_path / "t.txt"
    table.write_text("0.75\n0.9\n")
    schedule = tmp_path / "s.toml"
    schedule.write_text("[levels.one]\ngiven_h = 0.5\ngiven_not_h = 0.5\n[levels.three]\ngiven_h = 0.75\ngiven_not_h = 0.25\n")
    assert main(["fit", "--table", str(table), "--schedule", str(schedule)]) == 0
    out = capsys.readouterr().out
    assert out.count("three") == 2
    schedule.write_text("levels = 3\n")
    assert main(["fit", "--table", str(table), "--schedule", str(schedule)]) == 1


def test_fit_unreadable_table(tmp_path, capsys):
    assert main(["fit", "--table", str(tmp_path / "missing.txt")]) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("0.5 0.6\n0.7\n")
    assert main(["fit", "--table", str(bad)]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "singularity_metric", "run", "--format", "csv"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0].startswith("Evidence,S1")
